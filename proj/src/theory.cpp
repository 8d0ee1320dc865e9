#include "zofo/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace zofo {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

SelectedParameters select_parameters(const TheoryConstants& tc) {
    require(tc.l_smooth > 0.0, "select_parameters: l_smooth must be > 0");
    require(tc.m_phi > 0.0, "select_parameters: m_phi must be > 0");
    require(tc.p >= 1, "select_parameters: p must be >= 1");
    require(tc.mu > 0.0, "select_parameters: mu must be > 0");
    require(tc.epsilon > 0.0, "select_parameters: epsilon must be > 0");
    require(tc.epsilon_phi > 0.0, "select_parameters: epsilon_phi must be > 0");
    require(tc.phi_delta_u0 >= tc.phi_low,
            "select_parameters: phi_delta_u0 must be >= phi_low");

    const double l = tc.l_smooth;
    const double m = tc.m_phi;
    const double p = static_cast<double>(tc.p);
    const double p4 = p + 4.0;
    const double p6 = p + 6.0;
    const double w = 8.0 * p + 33.0;

    SelectedParameters out;
    out.c2 = p6 * p6 * p6 + p4 * p4;
    out.c3 = 2.0 * m * m * p * w / p4;
    out.c1 = 128.0 * l * p4 * (tc.phi_delta_u0 - tc.phi_low);
    out.eta = 1.0 / (16.0 * l * p4);
    out.delta_sq = std::sqrt(4.0 * m * m * tc.mu * p * w / (l * l * p4 * out.c2));
    out.delta = std::sqrt(out.delta_sq);
    out.mu1 = p4 * tc.epsilon * tc.epsilon / (16.0 * l * l * m * m * p * w * out.c2);
    out.mu2 = p4 * out.c2 * tc.epsilon_phi * tc.epsilon_phi / (m * m * p * p * p * w);
    out.t_min = static_cast<long>(std::ceil(2.0 * out.c1 / tc.epsilon));
    out.mu1_binds = tc.mu > out.mu1;
    out.mu2_binds = tc.mu > out.mu2;
    out.feasible = !out.mu1_binds && !out.mu2_binds;
    return out;
}

double average_gradient_bound(const TheoryConstants& tc, double eta, double delta,
                              long iterations) {
    require(tc.l_smooth > 0.0, "average_gradient_bound: l_smooth must be > 0");
    require(tc.p >= 1, "average_gradient_bound: p must be >= 1");
    require(tc.mu >= 0.0, "average_gradient_bound: mu must be >= 0");
    require(delta > 0.0, "average_gradient_bound: delta must be > 0");
    require(iterations >= 1, "average_gradient_bound: need at least one iteration");

    const double l = tc.l_smooth;
    const double p = static_cast<double>(tc.p);
    const double p4 = p + 4.0;
    const double p6 = p + 6.0;
    const double contraction = 1.0 - 8.0 * l * eta * p4;
    require(eta > 0.0 && contraction > 0.0,
            "average_gradient_bound: eta must lie in (0, 1/(8 L (p+4)))");

    const double t = static_cast<double>(iterations);
    const double delta_sq = delta * delta;
    const double term_initial = 4.0 * (tc.phi_delta_u0 - tc.phi_low) / (t * eta * contraction);
    const double term_smoothing = 12.0 * l * l * l * eta * delta_sq * p4 * p4 * p4 / contraction;
    const double term_tracking =
        8.0 * tc.m_phi * tc.m_phi * tc.mu * p * (2.0 * l * eta + 1.0) / (delta_sq * contraction);
    const double term_floor = delta_sq * l * l * p6 * p6 * p6 / 2.0;
    return term_initial + term_smoothing + term_tracking + term_floor;
}

double estimator_error_bound(double m_phi, double mu, long p, double delta) {
    require(delta > 0.0, "estimator_error_bound: delta must be > 0");
    require(mu >= 0.0, "estimator_error_bound: mu must be >= 0");
    return 4.0 * m_phi * m_phi * mu * static_cast<double>(p) / (delta * delta);
}

double smoothing_gap_bound(double l_smooth, long p, double delta) {
    require(delta >= 0.0, "smoothing_gap_bound: delta must be >= 0");
    return delta * delta * l_smooth * static_cast<double>(p) / 2.0;
}

} // namespace zofo
