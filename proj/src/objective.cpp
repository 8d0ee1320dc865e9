#include "zofo/objective.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "zofo/errors.hpp"
#include "zofo/rng.hpp"

namespace zofo {

QuadraticObjective::QuadraticObjective(Eigen::MatrixXd r3_factor, Eigen::VectorXd r2)
    : r3_(std::move(r3_factor)), r2_(std::move(r2)) {
    if (r3_.rows() != r3_.cols() || r3_.rows() != r2_.size()) {
        throw ConfigError("objective: R3 must be p-by-p and R2 a p-vector");
    }
    r1_ = r3_.transpose() * r3_;
    r1_ = ((r1_ + r1_.transpose()) / 2.0).eval(); // exactly symmetric
}

double phi(const QuadraticObjective& obj, const Eigen::VectorXd& u, const Eigen::VectorXd& y) {
    if (u.size() != obj.input_dim()) throw ConfigError("phi: input has wrong dimension");
    return u.dot(obj.r1() * u) + obj.r2().dot(u) + y.squaredNorm();
}

QuadraticObjective generate_random_objective(std::uint64_t seed, Eigen::Index p) {
    rng::Stream stream(seed, rng::kStreamObjective);
    QuadraticObjective obj(stream.uniform_matrix(p, p), stream.uniform_vector(p));
    obj.seed = seed;
    return obj;
}

ReducedObjective::ReducedObjective(const QuadraticObjective& objective, const PlantModel& plant)
    : objective_(objective), plant_(plant) {
    if (objective.input_dim() != plant.dims().p) {
        throw ConfigError("reduced objective: objective and plant input dimensions differ");
    }
    g_ = sensitivity(plant);
    h_ = steady_state_output(plant, Eigen::VectorXd::Zero(plant.dims().p));
    normal_ = objective.r1() + g_.transpose() * g_;
    normal_ = ((normal_ + normal_.transpose()) / 2.0).eval();
}

double tilde_phi(const ReducedObjective& red, const Eigen::VectorXd& u) {
    return phi(red.objective(), u, red.G() * u + red.H());
}

Eigen::VectorXd grad_tilde_phi(const ReducedObjective& red, const Eigen::VectorXd& u) {
    return 2.0 * red.normal_matrix() * u + red.objective().r2() +
           2.0 * red.G().transpose() * red.H();
}

Minimizer analytic_minimizer(const ReducedObjective& red) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(red.normal_matrix());
    if (eig.eigenvalues().minCoeff() <= 0.0) {
        throw DegenerateObjectiveError(
            "analytic_minimizer: R1 + G'G is not positive definite");
    }
    const Eigen::VectorXd rhs =
        -(red.objective().r2() + 2.0 * red.G().transpose() * red.H());
    Minimizer result;
    result.u = eig.eigenvectors() *
               (eig.eigenvectors().transpose() * rhs).cwiseQuotient(2.0 * eig.eigenvalues());
    result.value = tilde_phi(red, result.u);
    return result;
}

SmoothnessConstants derived_constants(const ReducedObjective& red, double operating_radius) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(red.normal_matrix());
    SmoothnessConstants out;
    out.l_smooth = 2.0 * eig.eigenvalues().maxCoeff();
    out.operating_radius = operating_radius;
    out.m_phi_local =
        2.0 * (spectral_norm(red.G()) * operating_radius + red.H().norm());
    return out;
}

SmoothedValue gaussian_smoothed_value(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& u, double delta, long n_samples,
                                      std::uint64_t seed) {
    if (delta < 0.0) throw std::invalid_argument("gaussian_smoothed_value: delta must be >= 0");
    if (delta == 0.0) return {f(u), 0.0};
    if (n_samples < 2) throw std::invalid_argument("gaussian_smoothed_value: need >= 2 samples");

    rng::Stream stream(seed, rng::kStreamSmoothing);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < n_samples; ++i) {
        const double value = f(u + delta * stream.normal_vector(u.size()));
        sum += value;
        sum_sq += value * value;
    }
    const double mean = sum / static_cast<double>(n_samples);
    const double var =
        (sum_sq - static_cast<double>(n_samples) * mean * mean) /
        static_cast<double>(n_samples - 1);
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n_samples))};
}

} // namespace zofo
