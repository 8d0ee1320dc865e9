#include "zofo/plant.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <sstream>
#include <stdexcept>

#include "zofo/errors.hpp"
#include "zofo/rng.hpp"

namespace zofo {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

} // namespace

PlantModel::PlantModel(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                       Eigen::MatrixXd D, Eigen::MatrixXd E, Eigen::MatrixXd F,
                       Eigen::VectorXd d_x, Eigen::VectorXd d_y)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)),
      E_(std::move(E)), F_(std::move(F)), d_x_(std::move(d_x)), d_y_(std::move(d_y)) {
    dims_.n = A_.rows();
    dims_.p = B_.cols();
    dims_.q = C_.rows();
    dims_.r = E_.cols();

    require(A_.cols() == dims_.n, "plant: A must be square");
    require(B_.rows() == dims_.n, "plant: B row count must match state dimension");
    require(C_.cols() == dims_.n, "plant: C column count must match state dimension");
    require(D_.rows() == dims_.q && D_.cols() == dims_.r,
            "plant: D must be q-by-r");
    require(E_.rows() == dims_.n, "plant: E row count must match state dimension");
    require(F_.rows() == dims_.n && F_.cols() == dims_.n * dims_.n,
            "plant: F must be n-by-n^2");
    require(d_x_.size() == dims_.r && d_y_.size() == dims_.r,
            "plant: disturbance vectors must be r-vectors");

    const Eigen::MatrixXd i_minus_a = Eigen::MatrixXd::Identity(dims_.n, dims_.n) - A_;
    Eigen::FullPivLU<Eigen::MatrixXd> full(i_minus_a);
    if (!full.isInvertible()) {
        throw ModelError("plant: I - A is singular; no steady-state map exists");
    }
    i_minus_a_lu_.compute(i_minus_a);
}

Eigen::MatrixXd PlantModel::solve_i_minus_a(const Eigen::MatrixXd& rhs) const {
    return i_minus_a_lu_.solve(rhs);
}

PlantState step(const PlantModel& model, const PlantState& state, const Eigen::VectorXd& u) {
    const auto& d = model.dims();
    if (u.size() != d.p) {
        std::ostringstream msg;
        msg << "plant: input has dimension " << u.size() << ", expected " << d.p;
        throw ConfigError(msg.str());
    }
    if (state.x.size() != d.n) throw ConfigError("plant: state has wrong dimension");

    const Eigen::VectorXd x_ss = steady_state_state(model, u);
    const Eigen::VectorXd dev = state.x - x_ss;

    // Outer-product flattening: (dev (x) dev)(i*n + j) = dev_i * dev_j.
    Eigen::VectorXd dev_sq(d.n * d.n);
    for (Eigen::Index i = 0; i < d.n; ++i) {
        dev_sq.segment(i * d.n, d.n) = dev(i) * dev;
    }

    PlantState next;
    next.x = model.A() * state.x + model.B() * u + model.E() * model.d_x() +
             model.F() * dev_sq;
    next.t = state.t + 1;
    next.last_y = model.C() * next.x + model.D() * model.d_y();
    return next;
}

Eigen::VectorXd steady_state_state(const PlantModel& model, const Eigen::VectorXd& u) {
    if (u.size() != model.dims().p) throw ConfigError("plant: input has wrong dimension");
    return model.solve_i_minus_a(model.B() * u + model.E() * model.d_x());
}

Eigen::VectorXd steady_state_output(const PlantModel& model, const Eigen::VectorXd& u) {
    return model.C() * steady_state_state(model, u) + model.D() * model.d_y();
}

Eigen::MatrixXd sensitivity(const PlantModel& model) {
    return model.C() * model.solve_i_minus_a(model.B());
}

double estimate_mu(const PlantModel& model, const std::vector<Eigen::VectorXd>& input_trace,
                   const Eigen::VectorXd& x0) {
    if (input_trace.empty()) throw ConfigError("estimate_mu: empty input trace");
    PlantState state{x0, 0, model.C() * x0 + model.D() * model.d_y()};
    double worst = 0.0;
    for (const auto& u : input_trace) {
        state = step(model, state, u);
        const double dev_sq = (state.last_y - steady_state_output(model, u)).squaredNorm();
        if (dev_sq > worst) worst = dev_sq;
    }
    return worst;
}

PlantModel generate_random_plant(std::uint64_t seed, const PlantDims& dims,
                                 double a_norm, double f_norm) {
    if (!(a_norm >= 0.0 && a_norm < 1.0)) {
        throw std::invalid_argument("generate_random_plant: a_norm must lie in [0, 1)");
    }
    if (f_norm < 0.0) {
        throw std::invalid_argument("generate_random_plant: f_norm must be non-negative");
    }
    if (dims.n < 1 || dims.p < 1 || dims.q < 1 || dims.r < 1) {
        throw std::invalid_argument("generate_random_plant: all dimensions must be positive");
    }

    rng::Stream stream(seed, rng::kStreamPlant);
    Eigen::MatrixXd A = stream.uniform_matrix(dims.n, dims.n);
    Eigen::MatrixXd B = stream.uniform_matrix(dims.n, dims.p);
    Eigen::MatrixXd C = stream.uniform_matrix(dims.q, dims.n);
    Eigen::MatrixXd D = stream.uniform_matrix(dims.q, dims.r);
    Eigen::MatrixXd E = stream.uniform_matrix(dims.n, dims.r);
    Eigen::MatrixXd F = stream.uniform_matrix(dims.n, dims.n * dims.n);
    Eigen::VectorXd d_x = stream.normal_vector(dims.r);
    Eigen::VectorXd d_y = stream.normal_vector(dims.r);

    const double a_actual = spectral_norm(A);
    A *= (a_actual > 0.0) ? a_norm / a_actual : 0.0;
    const double f_actual = induced_one_norm(F);
    F *= (f_actual > 0.0) ? f_norm / f_actual : 0.0;

    PlantModel model(std::move(A), std::move(B), std::move(C), std::move(D),
                     std::move(E), std::move(F), std::move(d_x), std::move(d_y));
    model.seed = seed;
    model.a_norm = a_norm;
    model.f_norm = f_norm;
    return model;
}

double spectral_norm(const Eigen::MatrixXd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

double induced_one_norm(const Eigen::MatrixXd& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

} // namespace zofo
