#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zofo/controllers.hpp"
#include "zofo/theory.hpp"

namespace zofo::validation {

struct Check {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double reference = 0.0; // bound or target the measurement is held against
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;

    [[nodiscard]] bool all_passed() const;
};

// Empirical moments of ||v|| for v ~ N(0, I_p), with standard errors.
struct GaussianMoments {
    double m1 = 0.0, se1 = 0.0;
    double m2 = 0.0, se2 = 0.0;
    double m4 = 0.0, se4 = 0.0;
};

[[nodiscard]] GaussianMoments gaussian_norm_moments(long p, long n_samples, std::uint64_t seed);

// Moment bounds for the exploration direction: E||v|| <= sqrt(p),
// E||v||^2 = p (within 3 standard errors), E||v||^4 <= (p+4)^2.
[[nodiscard]] std::vector<Check> gaussian_moment_checks(long p, long n_samples,
                                                        std::uint64_t seed);

// Sample-mean of the two-point oracle against the exact gradient of a seeded
// quadratic: every coordinate within 3 standard errors, at n_points inputs.
[[nodiscard]] std::vector<Check> oracle_unbiasedness_checks(long p, long n_draws, long n_points,
                                                            double delta, std::uint64_t seed);

// Second moment of the oracle against 4(p+4)||grad f_delta||^2 + 3 delta^2 L^2 (p+4)^3.
[[nodiscard]] std::vector<Check> oracle_second_moment_checks(long p, long n_draws, long n_points,
                                                             double delta, std::uint64_t seed);

// Gaussian smoothing of a seeded quadratic: Monte Carlo gap within 3
// standard errors of delta^2 tr(Q), and the exact gap below delta^2 L p / 2.
[[nodiscard]] std::vector<Check> smoothing_gap_checks(long p, long n_samples, double delta,
                                                      std::uint64_t seed);

// Paired feedback/idealized two-point estimates with shared perturbations
// along a closed-loop trajectory; the sample mean of ||e||^2 must respect
// the bound 4 m_phi^2 mu p / delta^2 built from the run's own mu and m_phi.
struct EstimatorErrorStats {
    double mean_error_sq = 0.0;
    double bound = 0.0;
    double mu_hat = 0.0;
    double m_phi_hat = 0.0;
    long pairs = 0;
};

[[nodiscard]] EstimatorErrorStats estimator_error_experiment(std::uint64_t plant_seed,
                                                             long n_pairs, double eta,
                                                             double delta,
                                                             std::uint64_t controller_seed);

[[nodiscard]] std::vector<Check> estimator_error_checks(std::uint64_t plant_seed, long n_pairs,
                                                        double eta, double delta,
                                                        std::uint64_t controller_seed);

// Select (eta, delta) from a planning run on the seed-0 style instance,
// re-run the two-point controller on several seeds and require the measured
// average squared gradient to stay below the closed-form bound, per seed.
struct BoundExperiment {
    double eta = 0.0;
    double delta = 0.0;
    double planning_mu = 0.0;
    double planning_m_phi = 0.0;
    std::vector<double> measured; // per seed
    std::vector<double> bound;    // per seed, with that run's mu and m_phi
    std::vector<double> final_grad_ratio; // final / initial squared gradient norm
};

[[nodiscard]] BoundExperiment average_gradient_bound_experiment(std::uint64_t plant_seed,
                                                                long n_seeds, long budget);

[[nodiscard]] std::vector<Check> average_gradient_bound_checks(std::uint64_t plant_seed,
                                                               long n_seeds, long budget);

// Plant physics: settling of constant-input trajectories to the analytic
// steady state, exactness of the fixed point, determinism.
[[nodiscard]] std::vector<Check> plant_consistency_checks(long n_plants, std::uint64_t seed);

[[nodiscard]] SuiteResult run_suite(const std::string& suite, long samples, std::uint64_t seed);

} // namespace zofo::validation
