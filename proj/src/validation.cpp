#include "zofo/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "zofo/errors.hpp"
#include "zofo/estimators.hpp"
#include "zofo/objective.hpp"
#include "zofo/rng.hpp"

namespace zofo::validation {

namespace {

// Seeded quadratic test function f(u) = u'Qu + b'u with Q = S'S / p kept
// well-conditioned; carries its own exact gradient, trace and smoothness
// constant so Monte Carlo estimates have closed-form references.
struct QuadraticProbe {
    Eigen::MatrixXd q;
    Eigen::VectorXd b;
    double trace = 0.0;
    double l_smooth = 0.0;

    [[nodiscard]] double operator()(const Eigen::VectorXd& u) const {
        return u.dot(q * u) + b.dot(u);
    }
    [[nodiscard]] Eigen::VectorXd grad(const Eigen::VectorXd& u) const {
        return 2.0 * q * u + b;
    }
};

QuadraticProbe make_probe(long p, std::uint64_t seed) {
    rng::Stream stream(seed, rng::kStreamValidation, 0xABCD);
    const Eigen::MatrixXd s = stream.uniform_matrix(p, p);
    QuadraticProbe probe;
    probe.q = (s.transpose() * s) / static_cast<double>(p);
    probe.q = ((probe.q + probe.q.transpose()) / 2.0).eval();
    probe.b = stream.normal_vector(p);
    probe.trace = probe.q.trace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(probe.q);
    probe.l_smooth = 2.0 * eig.eigenvalues().maxCoeff();
    return probe;
}

std::string describe(double measured, double reference) {
    std::ostringstream out;
    out << "measured " << measured << " vs " << reference;
    return out.str();
}

} // namespace

bool SuiteResult::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.passed; });
}

GaussianMoments gaussian_norm_moments(long p, long n_samples, std::uint64_t seed) {
    rng::Stream stream(seed, rng::kStreamValidation, static_cast<std::uint64_t>(p));
    double s1 = 0, s1_sq = 0, s2 = 0, s2_sq = 0, s4 = 0, s4_sq = 0;
    for (long i = 0; i < n_samples; ++i) {
        const Eigen::VectorXd v = stream.normal_vector(p);
        const double norm_sq = v.squaredNorm();
        const double norm = std::sqrt(norm_sq);
        const double norm4 = norm_sq * norm_sq;
        s1 += norm;
        s1_sq += norm_sq;
        s2 += norm_sq;
        s2_sq += norm4;
        s4 += norm4;
        s4_sq += norm4 * norm4;
    }
    const double n = static_cast<double>(n_samples);
    const auto se = [&](double sum, double sum_sq) {
        const double mean = sum / n;
        const double var = std::max(sum_sq / n - mean * mean, 0.0);
        return std::sqrt(var / n);
    };
    GaussianMoments m;
    m.m1 = s1 / n;
    m.se1 = se(s1, s1_sq);
    m.m2 = s2 / n;
    m.se2 = se(s2, s2_sq);
    m.m4 = s4 / n;
    m.se4 = se(s4, s4_sq);
    return m;
}

std::vector<Check> gaussian_moment_checks(long p, long n_samples, std::uint64_t seed) {
    const GaussianMoments m = gaussian_norm_moments(p, n_samples, seed);
    const double dp = static_cast<double>(p);
    std::vector<Check> checks;
    checks.push_back({"E||v|| <= sqrt(p), p=" + std::to_string(p),
                      m.m1 <= std::sqrt(dp) + 3.0 * m.se1, m.m1, std::sqrt(dp),
                      describe(m.m1, std::sqrt(dp))});
    checks.push_back({"E||v||^2 == p within 3se, p=" + std::to_string(p),
                      std::abs(m.m2 - dp) <= 3.0 * m.se2, m.m2, dp,
                      describe(m.m2, dp)});
    const double fourth_bound = (dp + 4.0) * (dp + 4.0);
    checks.push_back({"E||v||^4 <= (p+4)^2, p=" + std::to_string(p),
                      m.m4 <= fourth_bound + 3.0 * m.se4, m.m4, fourth_bound,
                      describe(m.m4, fourth_bound)});
    return checks;
}

std::vector<Check> oracle_unbiasedness_checks(long p, long n_draws, long n_points, double delta,
                                              std::uint64_t seed) {
    const QuadraticProbe probe = make_probe(p, seed);
    const auto f = [&](const Eigen::VectorXd& u) { return probe(u); };
    rng::Stream points(seed, rng::kStreamValidation, 0x9011);

    std::vector<Check> checks;
    for (long pt = 0; pt < n_points; ++pt) {
        const Eigen::VectorXd u = points.normal_vector(p);
        const Eigen::VectorXd exact = probe.grad(u);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(p);
        for (long i = 0; i < n_draws; ++i) {
            const Perturbation v = draw_perturbation(
                seed, rng::kStreamValidation + 1,
                static_cast<std::uint64_t>(pt) * static_cast<std::uint64_t>(n_draws) +
                    static_cast<std::uint64_t>(i),
                p);
            const GradientEstimate est = two_point_oracle(f, u, v, delta);
            sum += est.g;
            sum_sq += est.g.cwiseProduct(est.g);
        }
        const double n = static_cast<double>(n_draws);
        double worst_z = 0.0;
        for (long i = 0; i < p; ++i) {
            const double mean = sum(i) / n;
            const double var = std::max(sum_sq(i) / n - mean * mean, 0.0);
            const double sigma = std::sqrt(var / n);
            const double z = sigma > 0.0 ? std::abs(mean - exact(i)) / sigma
                                         : std::abs(mean - exact(i));
            worst_z = std::max(worst_z, z);
        }
        checks.push_back({"two-point oracle unbiased, point " + std::to_string(pt),
                          worst_z <= 3.0, worst_z, 3.0,
                          "worst per-coordinate z-score"});
    }
    return checks;
}

std::vector<Check> oracle_second_moment_checks(long p, long n_draws, long n_points, double delta,
                                               std::uint64_t seed) {
    const QuadraticProbe probe = make_probe(p, seed);
    const auto f = [&](const Eigen::VectorXd& u) { return probe(u); };
    rng::Stream points(seed, rng::kStreamValidation, 0x9022);
    const double dp = static_cast<double>(p);

    std::vector<Check> checks;
    for (long pt = 0; pt < n_points; ++pt) {
        const Eigen::VectorXd u = points.normal_vector(p);
        double sum = 0.0;
        for (long i = 0; i < n_draws; ++i) {
            const Perturbation v = draw_perturbation(
                seed, rng::kStreamValidation + 2,
                static_cast<std::uint64_t>(pt) * static_cast<std::uint64_t>(n_draws) +
                    static_cast<std::uint64_t>(i),
                p);
            sum += two_point_oracle(f, u, v, delta).g.squaredNorm();
        }
        const double measured = sum / static_cast<double>(n_draws);
        // For a quadratic, grad f_delta == grad f.
        const double bound = 4.0 * (dp + 4.0) * probe.grad(u).squaredNorm() +
                             3.0 * delta * delta * probe.l_smooth * probe.l_smooth *
                                 (dp + 4.0) * (dp + 4.0) * (dp + 4.0);
        checks.push_back({"two-point oracle second moment, point " + std::to_string(pt),
                          measured <= bound, measured, bound, describe(measured, bound)});
    }
    return checks;
}

std::vector<Check> smoothing_gap_checks(long p, long n_samples, double delta,
                                        std::uint64_t seed) {
    const QuadraticProbe probe = make_probe(p, seed);
    rng::Stream points(seed, rng::kStreamValidation, 0x9033);
    const Eigen::VectorXd u = points.normal_vector(p);

    const SmoothedValue sv = gaussian_smoothed_value(
        [&](const Eigen::VectorXd& x) { return probe(x); }, u, delta, n_samples, seed);
    const double gap_mc = sv.mean - probe(u);
    const double gap_exact = delta * delta * probe.trace;
    const double bound = smoothing_gap_bound(probe.l_smooth, p, delta);

    std::vector<Check> checks;
    checks.push_back({"smoothing gap matches delta^2 tr(Q) within 3se",
                      std::abs(gap_mc - gap_exact) <= 3.0 * sv.std_error, gap_mc, gap_exact,
                      describe(gap_mc, gap_exact)});
    checks.push_back({"smoothing gap below delta^2 L p / 2",
                      gap_exact <= bound && std::abs(gap_mc) <= bound + 3.0 * sv.std_error,
                      gap_exact, bound, describe(gap_exact, bound)});
    // Gradient relation; gradients of f and f_delta coincide for quadratics.
    const Eigen::VectorXd g = probe.grad(u);
    const double lhs = g.squaredNorm();
    const double rhs = 2.0 * g.squaredNorm() +
                       delta * delta / 2.0 * probe.l_smooth * probe.l_smooth *
                           std::pow(static_cast<double>(p) + 6.0, 3);
    checks.push_back({"gradient norm within smoothed-gradient envelope", lhs <= rhs, lhs, rhs,
                      describe(lhs, rhs)});
    return checks;
}

EstimatorErrorStats estimator_error_experiment(std::uint64_t plant_seed, long n_pairs,
                                               double eta, double delta,
                                               std::uint64_t controller_seed) {
    const PlantModel plant = generate_random_plant(plant_seed, {10, 5, 5, 5}, 0.05, 0.01);
    const QuadraticObjective objective = generate_random_objective(plant_seed, 5);
    const ReducedObjective reduced(objective, plant);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(5);
    const Eigen::VectorXd x0 = steady_state_state(plant, u0);

    ControllerConfig cfg{Method::kTwoPointRgf, eta, delta, controller_seed};
    RunOptions options;
    options.record_details = true;
    const MetricSeries series =
        run_closed_loop(cfg, plant, reduced, x0, u0, 2 * n_pairs, options);

    const auto tilde = [&](const Eigen::VectorXd& u) { return tilde_phi(reduced, u); };
    double sum = 0.0;
    std::vector<Eigen::VectorXd> applied;
    applied.reserve(series.details.size() * 2);
    for (const auto& rec : series.details) {
        const GradientEstimate feedback =
            feedback_two_point_estimate(rec.phi_base, rec.phi_plus, rec.v, delta);
        const GradientEstimate ideal = two_point_oracle(tilde, rec.u_before, rec.v, delta);
        sum += estimator_error(feedback, ideal).norm_sq;
        applied.push_back(rec.u_before);
        applied.push_back(rec.u_before + delta * rec.v.v);
    }

    EstimatorErrorStats stats;
    stats.pairs = static_cast<long>(series.details.size());
    stats.mean_error_sq = sum / static_cast<double>(stats.pairs);
    stats.mu_hat = estimate_mu(plant, applied, x0);
    stats.m_phi_hat = series.m_phi_hat;
    stats.bound = estimator_error_bound(stats.m_phi_hat, stats.mu_hat, 5, delta);
    return stats;
}

std::vector<Check> estimator_error_checks(std::uint64_t plant_seed, long n_pairs, double eta,
                                          double delta, std::uint64_t controller_seed) {
    const EstimatorErrorStats stats =
        estimator_error_experiment(plant_seed, n_pairs, eta, delta, controller_seed);
    std::ostringstream note;
    note << "pairs=" << stats.pairs << " mu_hat=" << stats.mu_hat
         << " m_phi_hat=" << stats.m_phi_hat;
    return {{"mean feedback-vs-ideal estimator error within bound",
             stats.mean_error_sq <= stats.bound, stats.mean_error_sq, stats.bound,
             note.str()}};
}

BoundExperiment average_gradient_bound_experiment(std::uint64_t plant_seed, long n_seeds,
                                                  long budget) {
    const PlantModel plant = generate_random_plant(plant_seed, {10, 5, 5, 5}, 0.05, 0.01);
    const QuadraticObjective objective = generate_random_objective(plant_seed, 5);
    const ReducedObjective reduced(objective, plant);
    const long p = 5;
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(p);
    const Eigen::VectorXd x0 = steady_state_state(plant, u0);
    const double l_smooth = derived_constants(reduced).l_smooth;
    const double phi_low = analytic_minimizer(reduced).value;

    BoundExperiment exp;
    exp.eta = 1.0 / (16.0 * l_smooth * (static_cast<double>(p) + 4.0));

    // Planning run at a conservative smoothing value to estimate the plant
    // speed and the local output scale before committing to delta.
    ControllerConfig planning{Method::kTwoPointRgf, exp.eta, 5e-3, 999};
    const MetricSeries plan =
        run_closed_loop(planning, plant, reduced, x0, u0, 2000);
    exp.planning_mu = plan.mu_hat;
    exp.planning_m_phi = plan.m_phi_hat;

    TheoryConstants tc;
    tc.l_smooth = l_smooth;
    tc.m_phi = exp.planning_m_phi;
    tc.p = p;
    tc.mu = exp.planning_mu;
    tc.epsilon = 1.0;
    tc.epsilon_phi = 1.0;
    tc.phi_low = phi_low;
    tc.phi_delta_u0 = tilde_phi(reduced, u0);
    const SelectedParameters sel = select_parameters(tc);
    exp.delta = sel.delta;

    for (long s = 0; s < n_seeds; ++s) {
        ControllerConfig cfg{Method::kTwoPointRgf, exp.eta, exp.delta,
                             static_cast<std::uint64_t>(s)};
        const MetricSeries series = run_closed_loop(cfg, plant, reduced, x0, u0, budget);
        const std::size_t updates = series.update_index.size() - 1;
        double lhs = 0.0;
        for (std::size_t k = 0; k < updates; ++k) lhs += series.grad_norm_sq[k];
        lhs /= static_cast<double>(updates);

        TheoryConstants run_tc = tc;
        run_tc.m_phi = series.m_phi_hat;
        run_tc.mu = series.mu_hat;
        run_tc.phi_delta_u0 =
            tilde_phi(reduced, u0) + smoothing_gap_bound(l_smooth, p, exp.delta);
        const double rhs = average_gradient_bound(run_tc, exp.eta, exp.delta,
                                                  static_cast<long>(updates));
        exp.measured.push_back(lhs);
        exp.bound.push_back(rhs);
        exp.final_grad_ratio.push_back(series.grad_norm_sq.back() /
                                       series.grad_norm_sq.front());
    }
    return exp;
}

std::vector<Check> average_gradient_bound_checks(std::uint64_t plant_seed, long n_seeds,
                                                 long budget) {
    const BoundExperiment exp = average_gradient_bound_experiment(plant_seed, n_seeds, budget);
    std::vector<Check> checks;
    for (std::size_t s = 0; s < exp.measured.size(); ++s) {
        std::ostringstream note;
        note << "eta=" << exp.eta << " delta=" << exp.delta;
        checks.push_back({"average squared gradient within bound, seed " + std::to_string(s),
                          exp.measured[s] <= exp.bound[s], exp.measured[s], exp.bound[s],
                          note.str()});
    }
    return checks;
}

std::vector<Check> plant_consistency_checks(long n_plants, std::uint64_t seed) {
    std::vector<Check> checks;
    double worst_residual = 0.0;
    for (long i = 0; i < n_plants; ++i) {
        const PlantModel plant =
            generate_random_plant(seed + static_cast<std::uint64_t>(i), {10, 5, 5, 5}, 0.05,
                                  0.01);
        rng::Stream inputs(seed, rng::kStreamValidation, 0x9044 + static_cast<std::uint64_t>(i));
        const Eigen::VectorXd u = inputs.normal_vector(5);
        const Eigen::VectorXd target = steady_state_state(plant, u);
        PlantState state{Eigen::VectorXd::Zero(10), 0, Eigen::VectorXd::Zero(5)};
        double residual = std::numeric_limits<double>::infinity();
        for (int t = 0; t < 1000 && residual > 1e-8; ++t) {
            state = step(plant, state, u);
            residual = (state.x - target).norm();
        }
        worst_residual = std::max(worst_residual, residual);
    }
    checks.push_back({"constant-input trajectories settle to x_ss within 1e3 steps",
                      worst_residual <= 1e-8, worst_residual, 1e-8,
                      std::to_string(n_plants) + " random plants"});

    // Fixed point is exact for F = 0.
    const PlantModel linear = generate_random_plant(seed, {10, 5, 5, 5}, 0.05, 0.0);
    rng::Stream inputs(seed, rng::kStreamValidation, 0x9055);
    const Eigen::VectorXd u = inputs.normal_vector(5);
    const Eigen::VectorXd x_ss = steady_state_state(linear, u);
    const PlantState at_ss{x_ss, 0, Eigen::VectorXd::Zero(5)};
    const double drift = (step(linear, at_ss, u).x - x_ss).norm();
    checks.push_back({"steady state is a fixed point for the linear plant", drift <= 1e-10,
                      drift, 1e-10, ""});

    // Bit-for-bit determinism of generation.
    const PlantModel a = generate_random_plant(seed, {10, 5, 5, 5}, 0.05, 0.01);
    const PlantModel b = generate_random_plant(seed, {10, 5, 5, 5}, 0.05, 0.01);
    const bool identical = a.A() == b.A() && a.B() == b.B() && a.C() == b.C() &&
                           a.D() == b.D() && a.E() == b.E() && a.F() == b.F() &&
                           a.d_x() == b.d_x() && a.d_y() == b.d_y();
    checks.push_back({"identical seeds generate identical plants", identical,
                      identical ? 1.0 : 0.0, 1.0, ""});
    return checks;
}

SuiteResult run_suite(const std::string& suite, long samples, std::uint64_t seed) {
    SuiteResult result;
    result.suite = suite;
    if (suite == "lemmas") {
        for (const long p : {1L, 5L, 20L}) {
            auto checks = gaussian_moment_checks(p, samples, seed);
            result.checks.insert(result.checks.end(), checks.begin(), checks.end());
        }
        auto gap = smoothing_gap_checks(5, samples, 0.1, seed);
        result.checks.insert(result.checks.end(), gap.begin(), gap.end());
        auto unbiased = oracle_unbiasedness_checks(3, samples, 5, 1e-2, seed);
        result.checks.insert(result.checks.end(), unbiased.begin(), unbiased.end());
        auto second = oracle_second_moment_checks(3, samples, 5, 1e-2, seed);
        result.checks.insert(result.checks.end(), second.begin(), second.end());
    } else if (suite == "bounds") {
        auto err = estimator_error_checks(0, std::min<long>(samples, 1000), 1e-6, 5e-5, 0);
        result.checks.insert(result.checks.end(), err.begin(), err.end());
        auto bound = average_gradient_bound_checks(0, 10, 10000);
        result.checks.insert(result.checks.end(), bound.begin(), bound.end());
    } else if (suite == "plant") {
        auto checks = plant_consistency_checks(std::min<long>(samples, 20), seed);
        result.checks.insert(result.checks.end(), checks.begin(), checks.end());
    } else {
        throw ConfigError("validate: unknown suite " + suite);
    }
    return result;
}

} // namespace zofo::validation
