#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include <Eigen/Core>

namespace zofo {

// A Gaussian exploration direction, addressable by (seed, stream, counter)
// so any draw can be reproduced in isolation.
struct Perturbation {
    Eigen::VectorXd v;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;
};

[[nodiscard]] Perturbation draw_perturbation(std::uint64_t seed, std::uint64_t stream,
                                             std::uint64_t counter, Eigen::Index p);

// g = (v / delta) * (phi_plus - phi_base), plus the raw ingredients for
// diagnostics. The invariant g == (v/delta)*(phi_plus - phi_base) holds
// exactly by construction.
struct GradientEstimate {
    Eigen::VectorXd g;
    double phi_plus = 0.0;
    double phi_base = 0.0;
    double delta = 0.0;
    Perturbation v;
};

// Static two-point oracle: evaluates f at u and u + delta v directly.
[[nodiscard]] GradientEstimate two_point_oracle(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& u,
    const Perturbation& v, double delta);

// Closed-loop two-point estimate from two measured costs taken one plant
// step apart; pure arithmetic, plant stepping is the controller's job.
[[nodiscard]] GradientEstimate feedback_two_point_estimate(double phi_base, double phi_plus,
                                                           const Perturbation& v, double delta);

// Residual baseline: one new measurement per iteration, reusing the
// previous perturbed measurement as the baseline.
[[nodiscard]] GradientEstimate one_point_residual_estimate(double phi_now, double phi_prev,
                                                           const Perturbation& v_now,
                                                           double delta);

struct EstimatorError {
    Eigen::VectorXd e;
    double norm_sq = 0.0;
};

// e = g_feedback - g_ideal; both estimates must share the same perturbation
// and smoothing parameter, otherwise the comparison is meaningless and an
// InvalidComparisonError is thrown.
[[nodiscard]] EstimatorError estimator_error(const GradientEstimate& g_feedback,
                                             const GradientEstimate& g_ideal);

} // namespace zofo
