#pragma once

#include <cstdint>

namespace zofo {

// Problem constants feeding the parameter selection and the convergence
// bound. All are plain numbers so callers can mix exact values (L for the
// quadratic case), trajectory estimates (mu, m_phi) and targets (epsilon).
struct TheoryConstants {
    double l_smooth = 0.0;      // smoothness constant of the reduced objective
    double m_phi = 0.0;         // Lipschitz estimate of the loss in y
    double m_tilde = 0.0;       // Lipschitz constant of the reduced objective (reported, unused)
    long p = 0;                 // input dimension
    double mu = 0.0;            // plant-speed bound estimate
    double epsilon = 0.0;       // target mean-squared-gradient accuracy
    double epsilon_phi = 0.0;   // smoothing-precision target
    double phi_low = 0.0;       // lower bound of the reduced objective
    double phi_delta_u0 = 0.0;  // smoothed objective value at the initial input
};

struct SelectedParameters {
    double eta = 0.0;
    double delta = 0.0;
    double delta_sq = 0.0;
    double mu1 = 0.0;    // admissibility threshold from the accuracy target
    double mu2 = 0.0;    // admissibility threshold from the smoothing target
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    long t_min = 0;      // iterations needed to reach the accuracy target
    bool feasible = false;
    bool mu1_binds = false; // which threshold is violated when infeasible
    bool mu2_binds = false;
};

// Stepsize, smoothing parameter and iteration budget that guarantee the
// average squared gradient norm reaches epsilon, provided mu is small
// enough. Infeasible mu is reported explicitly, never silently.
//
//   eta      = 1 / (16 L (p+4))
//   delta^2  = sqrt( 4 m_phi^2 mu p (8p+33) / (L^2 (p+4) c2) )
//   c2       = (p+6)^3 + (p+4)^2
//   c3       = 2 m_phi^2 p (8p+33) / (p+4)
//   c1       = 128 L (p+4) (phi_delta_u0 - phi_low)
//   t_min    = ceil(2 c1 / epsilon)
//   mu1      = (p+4) eps^2 / (16 L^2 m_phi^2 p (8p+33) c2)
//   mu2      = (p+4) c2 eps_phi^2 / (m_phi^2 p^3 (8p+33))
[[nodiscard]] SelectedParameters select_parameters(const TheoryConstants& tc);

// Explicit upper bound on (1/T) sum_k E ||grad(u_k)||^2 for the two-point
// feedback controller run with stepsize eta < 1/(8 L (p+4)) and smoothing
// delta for T updates:
//
//     4 (phi_delta_u0 - phi_low) / (T eta (1 - 8 L eta (p+4)))
//   + 12 L^3 eta delta^2 (p+4)^3 / (1 - 8 L eta (p+4))
//   + 8 m_phi^2 mu p (2 L eta + 1) / (delta^2 (1 - 8 L eta (p+4)))
//   + delta^2 L^2 (p+6)^3 / 2
[[nodiscard]] double average_gradient_bound(const TheoryConstants& tc, double eta, double delta,
                                            long iterations);

// Bound on the expected squared error between the feedback and idealized
// two-point estimates: 4 m_phi^2 mu p / delta^2.
[[nodiscard]] double estimator_error_bound(double m_phi, double mu, long p, double delta);

// Bound on |f_delta(u) - f(u)| for an L-smooth f: delta^2 L p / 2. Also the
// quantity that must stay below epsilon_phi for the smoothing to be faithful.
[[nodiscard]] double smoothing_gap_bound(double l_smooth, long p, double delta);

} // namespace zofo
