#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include <Eigen/Core>

#include "zofo/plant.hpp"

namespace zofo {

// Quadratic steady-state loss  phi(u, y) = u' R1 u + R2' u + ||y||^2
// with R1 = R3' R3 held positive semidefinite by construction.
class QuadraticObjective {
public:
    QuadraticObjective(Eigen::MatrixXd r3_factor, Eigen::VectorXd r2);

    [[nodiscard]] const Eigen::MatrixXd& r1() const { return r1_; }
    [[nodiscard]] const Eigen::MatrixXd& r3() const { return r3_; }
    [[nodiscard]] const Eigen::VectorXd& r2() const { return r2_; }
    [[nodiscard]] Eigen::Index input_dim() const { return r2_.size(); }

    std::uint64_t seed = 0;

private:
    Eigen::MatrixXd r3_;
    Eigen::MatrixXd r1_; // R3' R3, symmetrized exactly
    Eigen::VectorXd r2_;
};

[[nodiscard]] double phi(const QuadraticObjective& obj, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& y);

// R3 and R2 entries ~ U(0,1) from the (seed, objective) stream.
[[nodiscard]] QuadraticObjective generate_random_objective(std::uint64_t seed, Eigen::Index p);

// The composition of the loss with the plant's steady-state output map:
// reduced(u) = phi(u, h(u)). Since h is affine (h(u) = G u + H), the reduced
// objective is the quadratic u' (R1 + G'G) u + (R2 + 2 G'H)' u + ||H||^2,
// whose gradient and minimizer are available in closed form.
class ReducedObjective {
public:
    ReducedObjective(const QuadraticObjective& objective, const PlantModel& plant);

    [[nodiscard]] const QuadraticObjective& objective() const { return objective_; }
    [[nodiscard]] const PlantModel& plant() const { return plant_; }
    [[nodiscard]] const Eigen::MatrixXd& G() const { return g_; }
    [[nodiscard]] const Eigen::VectorXd& H() const { return h_; }
    // R1 + G'G, the half-Hessian of the reduced objective.
    [[nodiscard]] const Eigen::MatrixXd& normal_matrix() const { return normal_; }

private:
    const QuadraticObjective& objective_;
    const PlantModel& plant_;
    Eigen::MatrixXd g_;
    Eigen::VectorXd h_;
    Eigen::MatrixXd normal_;
};

[[nodiscard]] double tilde_phi(const ReducedObjective& red, const Eigen::VectorXd& u);

// Exact gradient 2 (R1 + G'G) u + R2 + 2 G'H; this is the convergence metric
// reported by the experiment harness.
[[nodiscard]] Eigen::VectorXd grad_tilde_phi(const ReducedObjective& red,
                                             const Eigen::VectorXd& u);

struct Minimizer {
    Eigen::VectorXd u;
    double value = 0.0;
};

// Unique minimizer of the reduced objective; requires R1 + G'G positive
// definite, otherwise throws DegenerateObjectiveError.
[[nodiscard]] Minimizer analytic_minimizer(const ReducedObjective& red);

struct SmoothnessConstants {
    // Exact smoothness constant of the reduced objective: 2 lambda_max(R1 + G'G).
    double l_smooth = 0.0;
    // Local Lipschitz estimate of phi(u, .) in y over the declared operating
    // ball ||u|| <= radius: 2 sup ||y||. The loss is quadratic in y, so no
    // global constant exists; downstream bounds use trajectory-local values.
    double m_phi_local = 0.0;
    double operating_radius = 0.0;
};

[[nodiscard]] SmoothnessConstants derived_constants(const ReducedObjective& red,
                                                    double operating_radius = 10.0);

struct SmoothedValue {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte Carlo estimate of the Gaussian-smoothed value
// f_delta(u) = E_{v ~ N(0,I_p)}[ f(u + delta v) ] with its standard error.
// Draws come from the dedicated smoothing stream for the given seed.
[[nodiscard]] SmoothedValue gaussian_smoothed_value(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& u,
    double delta, long n_samples, std::uint64_t seed);

} // namespace zofo
