#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

namespace zofo {

struct PlantDims {
    Eigen::Index n = 0; // states
    Eigen::Index p = 0; // inputs
    Eigen::Index q = 0; // outputs
    Eigen::Index r = 0; // disturbance channels

    bool operator==(const PlantDims&) const = default;
};

// Discrete-time plant
//
//   x' = A x + B u + E d_x + F ((x - x_ss(u)) (x) (x - x_ss(u)))
//   y' = C x' + D d_y
//
// where (x) is the outer-product flattening of the deviation with itself
// (an n^2-vector, row-major), F is n-by-n^2, and
// x_ss(u) = (I - A)^{-1} (B u + E d_x) is the exact steady-state map.
// The nonlinear term vanishes at x_ss, so x_ss is a fixed point of the
// dynamics under constant input. Immutable after construction; one model
// can be shared across concurrent runs, each run owning its PlantState.
class PlantModel {
public:
    PlantModel(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
               Eigen::MatrixXd D, Eigen::MatrixXd E, Eigen::MatrixXd F,
               Eigen::VectorXd d_x, Eigen::VectorXd d_y);

    [[nodiscard]] const PlantDims& dims() const { return dims_; }
    [[nodiscard]] const Eigen::MatrixXd& A() const { return A_; }
    [[nodiscard]] const Eigen::MatrixXd& B() const { return B_; }
    [[nodiscard]] const Eigen::MatrixXd& C() const { return C_; }
    [[nodiscard]] const Eigen::MatrixXd& D() const { return D_; }
    [[nodiscard]] const Eigen::MatrixXd& E() const { return E_; }
    [[nodiscard]] const Eigen::MatrixXd& F() const { return F_; }
    [[nodiscard]] const Eigen::VectorXd& d_x() const { return d_x_; }
    [[nodiscard]] const Eigen::VectorXd& d_y() const { return d_y_; }

    // Solve (I - A) Z = rhs using the factorization cached at construction.
    [[nodiscard]] Eigen::MatrixXd solve_i_minus_a(const Eigen::MatrixXd& rhs) const;

    // Provenance of generated models; zero / unset for hand-built ones.
    std::uint64_t seed = 0;
    double a_norm = 0.0;
    double f_norm = 0.0;

private:
    PlantDims dims_;
    Eigen::MatrixXd A_, B_, C_, D_, E_, F_;
    Eigen::VectorXd d_x_, d_y_;
    Eigen::PartialPivLU<Eigen::MatrixXd> i_minus_a_lu_;
};

struct PlantState {
    Eigen::VectorXd x;      // current state
    long t = 0;             // discrete time index
    Eigen::VectorXd last_y; // most recent measured output
};

// Advance the plant one step under input u; returns the state at t+1 with
// the output measured there. Deterministic.
[[nodiscard]] PlantState step(const PlantModel& model, const PlantState& state,
                              const Eigen::VectorXd& u);

// x_ss(u) = (I - A)^{-1} (B u + E d_x)
[[nodiscard]] Eigen::VectorXd steady_state_state(const PlantModel& model,
                                                 const Eigen::VectorXd& u);

// h(u) = C x_ss(u) + D d_y; affine in u with slope sensitivity().
[[nodiscard]] Eigen::VectorXd steady_state_output(const PlantModel& model,
                                                  const Eigen::VectorXd& u);

// Steady-state input-to-output sensitivity G = C (I - A)^{-1} B.
[[nodiscard]] Eigen::MatrixXd sensitivity(const PlantModel& model);

// Simulate the input trace from x0 and return max_t ||y_{t+1} - h(u_t)||^2,
// an empirical bound on how far a single-step measurement can sit from the
// steady-state output of the input that produced it.
[[nodiscard]] double estimate_mu(const PlantModel& model,
                                 const std::vector<Eigen::VectorXd>& input_trace,
                                 const Eigen::VectorXd& x0);

// All matrix entries ~ U(0,1) from the (seed, plant) stream, then A rescaled
// to spectral norm a_norm and F to induced 1-norm f_norm; d_x, d_y ~ N(0,1).
// Bit-for-bit deterministic per seed.
[[nodiscard]] PlantModel generate_random_plant(std::uint64_t seed, const PlantDims& dims,
                                               double a_norm, double f_norm);

[[nodiscard]] double spectral_norm(const Eigen::MatrixXd& m);
[[nodiscard]] double induced_one_norm(const Eigen::MatrixXd& m);

} // namespace zofo
