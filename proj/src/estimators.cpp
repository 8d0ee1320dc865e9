#include "zofo/estimators.hpp"

#include <stdexcept>

#include "zofo/errors.hpp"
#include "zofo/rng.hpp"

namespace zofo {

namespace {

void require_positive_delta(double delta) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("gradient estimate: delta must be > 0");
    }
}

} // namespace

Perturbation draw_perturbation(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                               Eigen::Index p) {
    rng::Stream s(seed, stream, counter);
    return {s.normal_vector(p), seed, stream, counter};
}

GradientEstimate two_point_oracle(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& u, const Perturbation& v,
                                  double delta) {
    require_positive_delta(delta);
    const double base = f(u);
    const double plus = f(u + delta * v.v);
    return {(v.v / delta) * (plus - base), plus, base, delta, v};
}

GradientEstimate feedback_two_point_estimate(double phi_base, double phi_plus,
                                             const Perturbation& v, double delta) {
    require_positive_delta(delta);
    return {(v.v / delta) * (phi_plus - phi_base), phi_plus, phi_base, delta, v};
}

GradientEstimate one_point_residual_estimate(double phi_now, double phi_prev,
                                             const Perturbation& v_now, double delta) {
    require_positive_delta(delta);
    return {(v_now.v / delta) * (phi_now - phi_prev), phi_now, phi_prev, delta, v_now};
}

EstimatorError estimator_error(const GradientEstimate& g_feedback,
                               const GradientEstimate& g_ideal) {
    if (g_feedback.delta != g_ideal.delta || g_feedback.v.v != g_ideal.v.v) {
        throw InvalidComparisonError(
            "estimator_error: estimates must share the same perturbation and delta");
    }
    EstimatorError out;
    out.e = g_feedback.g - g_ideal.g;
    out.norm_sq = out.e.squaredNorm();
    return out;
}

} // namespace zofo
