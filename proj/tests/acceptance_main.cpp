// Acceptance suite: end-to-end checks of the closed-loop comparison, the
// estimator statistics, the parameter-selection arithmetic and the
// reproducibility guarantees. Prints one PASS/FAIL line per criterion and
// exits with the number of failures.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zofo/controllers.hpp"
#include "zofo/experiments.hpp"
#include "zofo/objective.hpp"
#include "zofo/plant.hpp"
#include "zofo/rng.hpp"
#include "zofo/theory.hpp"
#include "zofo/validation.hpp"

namespace {

using zofo::AggregateResult;
using zofo::ControllerConfig;
using zofo::ExperimentConfig;
using zofo::Method;

int failures = 0;

void report(int criterion, const std::string& name, bool passed, const std::string& details) {
    std::printf("[%s] criterion %2d: %s — %s\n", passed ? "PASS" : "FAIL", criterion,
                name.c_str(), details.c_str());
    if (!passed) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ExperimentConfig reference_comparison_config() {
    ExperimentConfig cfg;
    cfg.plant_seed = 0;
    cfg.objective_seed = 0;
    cfg.controller_seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    cfg.plant_step_budget = 10000;
    cfg.record_stride = 10;
    cfg.methods = zofo::default_method_set();
    return cfg;
}

// Criterion 1: four-method ordering at the reference stepsizes (two-point
// methods 40e-5, one-point 2.5e-5, exact 100e-5, delta 5e-5), 10 seeds,
// 1e4 plant steps, within a two-minute budget.
AggregateResult criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = reference_comparison_config();
    const AggregateResult result = zofo::run_comparison(cfg);
    const double seconds = elapsed_seconds(start);

    const double exact = result.gap_for("exact_gradient").mean.back();
    const double ideal = result.gap_for("idealized_two_point").mean.back();
    const double two_point = result.gap_for("two_point_rgf").mean.back();
    const double two_grad = result.grad_for("two_point_rgf").mean.back();
    const double one_grad = result.grad_for("one_point_residual").mean.back();

    const bool ordering = exact <= ideal && ideal <= 2.0 * two_point;
    const bool grad_ratio = two_grad <= 0.5 * one_grad;
    const bool in_time = seconds <= 120.0;
    report(1, "method ordering at reference stepsizes",
           ordering && grad_ratio && in_time,
           "final mean gaps: exact=" + fmt(exact) + " idealized=" + fmt(ideal) +
               " two_point=" + fmt(two_point) + "; final mean grad^2: two_point=" +
               fmt(two_grad) + " one_point=" + fmt(one_grad) + "; runtime " + fmt(seconds) +
               " s");
    return result;
}

// Criterion 2: the two-point controller, run at the selected stepsize and
// smoothing values, drives the squared gradient norm to ~zero: the 10-seed
// mean at the final update is at most 1% of its initial value and no single
// seed exceeds 5%.
void criterion_2() {
    const zofo::validation::BoundExperiment exp =
        zofo::validation::average_gradient_bound_experiment(0, 10, 10000);
    double mean_ratio = 0.0;
    double worst = 0.0;
    for (const double r : exp.final_grad_ratio) {
        mean_ratio += r;
        worst = std::max(worst, r);
    }
    mean_ratio /= static_cast<double>(exp.final_grad_ratio.size());
    report(2, "two-point controller convergence", mean_ratio <= 0.01 && worst <= 0.05,
           "mean final/initial grad^2 = " + fmt(mean_ratio) + " (<= 0.01), worst seed = " +
               fmt(worst) + " (<= 0.05), eta=" + fmt(exp.eta) + " delta=" + fmt(exp.delta));
}

// Criterion 3: Gaussian norm moments at one million draws for p in {1,5,20}.
void criterion_3() {
    const auto start = std::chrono::steady_clock::now();
    bool all = true;
    std::string details;
    for (const long p : {1L, 5L, 20L}) {
        for (const auto& check : zofo::validation::gaussian_moment_checks(p, 1000000, 0)) {
            all = all && check.passed;
            if (!check.passed) details += check.name + " (" + fmt(check.measured) + "); ";
        }
    }
    const double seconds = elapsed_seconds(start);
    all = all && seconds <= 10.0;
    report(3, "exploration-direction moment bounds", all,
           details.empty() ? "all moments within bounds, runtime " + fmt(seconds) + " s"
                           : details);
}

// Criterion 4: two-point oracle unbiasedness on a quadratic, p=3, 2e5 draws
// at 5 random points, per-coordinate 3-standard-error tolerance.
void criterion_4() {
    bool all = true;
    double worst = 0.0;
    for (const auto& check :
         zofo::validation::oracle_unbiasedness_checks(3, 200000, 5, 1e-2, 0)) {
        all = all && check.passed;
        worst = std::max(worst, check.measured);
    }
    report(4, "two-point oracle unbiasedness", all,
           "worst per-coordinate z-score " + fmt(worst) + " (<= 3)");
}

// Criterion 5: oracle second moment under the dimension-dependent bound at
// every test point.
void criterion_5() {
    bool all = true;
    std::string details;
    for (const auto& check :
         zofo::validation::oracle_second_moment_checks(3, 200000, 5, 1e-2, 0)) {
        all = all && check.passed;
        details += fmt(check.measured) + "/" + fmt(check.reference) + " ";
    }
    report(5, "two-point oracle second moment", all, "measured/bound per point: " + details);
}

// Criterion 6: Gaussian smoothing of a quadratic shifts the value by
// delta^2 tr(Q), within Monte Carlo error, and the shift respects the
// smoothness envelope delta^2 L p / 2.
void criterion_6() {
    bool all = true;
    std::string details;
    for (const auto& check : zofo::validation::smoothing_gap_checks(5, 200000, 0.1, 0)) {
        all = all && check.passed;
        details += check.name + "=" + fmt(check.measured) + " vs " + fmt(check.reference) +
                   "; ";
    }
    report(6, "smoothing gap closed form", all, details);
}

// Criterion 7: along a closed-loop trajectory, the sample mean of the
// squared feedback-vs-idealized estimator error stays below
// 4 m_phi^2 mu p / delta^2 with the run's own mu and m_phi estimates.
void criterion_7() {
    const zofo::validation::EstimatorErrorStats stats =
        zofo::validation::estimator_error_experiment(0, 1000, 1e-6, 5e-5, 0);
    report(7, "closed-loop estimator error bound", stats.mean_error_sq <= stats.bound,
           "mean ||e||^2 = " + fmt(stats.mean_error_sq) + " <= " + fmt(stats.bound) +
               " (mu_hat=" + fmt(stats.mu_hat) + ", m_phi_hat=" + fmt(stats.m_phi_hat) +
               ", pairs=" + std::to_string(stats.pairs) + ")");
}

// Criterion 8: measured average squared gradient against the closed-form
// bound at the selected parameters, every seed.
void criterion_8() {
    const zofo::validation::BoundExperiment exp =
        zofo::validation::average_gradient_bound_experiment(0, 10, 10000);
    bool all = true;
    double worst_margin = 0.0;
    for (std::size_t s = 0; s < exp.measured.size(); ++s) {
        all = all && exp.measured[s] <= exp.bound[s];
        worst_margin = std::max(worst_margin, exp.measured[s] / exp.bound[s]);
    }
    report(8, "average-gradient convergence bound", all,
           "10 seeds, worst measured/bound = " + fmt(worst_margin) + ", eta=" + fmt(exp.eta) +
               " delta=" + fmt(exp.delta));
}

// Criterion 9: parameter-selection arithmetic against a 50-digit oracle on
// a 3x3x3-point grid, 12 significant digits.
void criterion_9() {
    using mp = boost::multiprecision::cpp_bin_float_50;
    bool all = true;
    double worst = 0.0;
    const double ls[] = {0.5, 5.0, 50.0};
    const double ms[] = {0.1, 1.0, 10.0};
    const double mus[] = {1e-8, 1e-5, 1e-2};
    for (const double l : ls) {
        for (const double m : ms) {
            for (const double mu : mus) {
                zofo::TheoryConstants tc;
                tc.l_smooth = l;
                tc.m_phi = m;
                tc.mu = mu;
                tc.p = 5;
                tc.epsilon = 0.5;
                tc.epsilon_phi = 0.1;
                tc.phi_low = 0.0;
                tc.phi_delta_u0 = 1.0;
                const zofo::SelectedParameters out = zofo::select_parameters(tc);

                const mp L = l, M = m, MU = mu, P = 5;
                const mp p4 = P + 4, p6 = P + 6, w = 8 * P + 33;
                const mp c2 = p6 * p6 * p6 + p4 * p4;
                const mp c3 = 2 * M * M * P * w / p4;
                const mp c1 = 128 * L * p4 * mp(1.0);
                const mp eta = 1 / (16 * L * p4);
                const mp d2 = sqrt(4 * M * M * MU * P * w / (L * L * p4 * c2));
                const mp mu1 =
                    p4 * mp(0.5) * mp(0.5) / (16 * L * L * M * M * P * w * c2);
                const mp mu2 = p4 * c2 * mp(0.1) * mp(0.1) / (M * M * P * P * P * w);

                const auto rel = [&](double got, const mp& want) {
                    const double w_d = static_cast<double>(want);
                    return std::abs(got - w_d) / std::abs(w_d);
                };
                for (const double r :
                     {rel(out.eta, eta), rel(out.delta_sq, d2), rel(out.mu1, mu1),
                      rel(out.mu2, mu2), rel(out.c1, c1), rel(out.c2, c2),
                      rel(out.c3, c3)}) {
                    worst = std::max(worst, r);
                    all = all && r <= 1e-12;
                }
                const long t_min_mp =
                    static_cast<long>(ceil(2 * c1 / mp(0.5)));
                all = all && out.t_min == t_min_mp;
            }
        }
    }
    report(9, "parameter-selection arithmetic vs 50-digit oracle", all,
           "27 grid points, worst relative deviation " + fmt(worst) + " (<= 1e-12)");
}

// Criterion 10: physics consistency. Constant-input trajectories on 20
// random plants settle to the analytic steady state within 1e3 steps at
// 1e-8; the exact-gradient controller reaches the analytic minimizer to
// 1e-6 within the horizon predicted by its own contraction rate.
void criterion_10() {
    bool settling = true;
    double worst_residual = 0.0;
    for (long i = 0; i < 20; ++i) {
        const zofo::PlantModel plant =
            zofo::generate_random_plant(100 + static_cast<std::uint64_t>(i), {10, 5, 5, 5},
                                        0.05, 0.01);
        zofo::rng::Stream inputs(200 + static_cast<std::uint64_t>(i),
                                 zofo::rng::kStreamValidation, 1);
        const Eigen::VectorXd u = inputs.normal_vector(5);
        const Eigen::VectorXd target = zofo::steady_state_state(plant, u);
        zofo::PlantState state{Eigen::VectorXd::Zero(10), 0, Eigen::VectorXd::Zero(5)};
        double residual = std::numeric_limits<double>::infinity();
        for (int t = 0; t < 1000 && residual > 1e-8; ++t) {
            state = zofo::step(plant, state, u);
            residual = (state.x - target).norm();
        }
        settling = settling && residual <= 1e-8;
        worst_residual = std::max(worst_residual, residual);
    }

    const zofo::PlantModel plant = zofo::generate_random_plant(0, {10, 5, 5, 5}, 0.05, 0.01);
    const zofo::QuadraticObjective objective = zofo::generate_random_objective(0, 5);
    const zofo::ReducedObjective reduced(objective, plant);
    const zofo::Minimizer min = zofo::analytic_minimizer(reduced);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(5);

    // Contraction-rate horizon: the slowest mode decays like
    // (1 - eta lambda_min) per update.
    const double eta = 100e-5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(2.0 * reduced.normal_matrix());
    const double lambda_min = eig.eigenvalues().minCoeff();
    const double distance = (u0 - min.u).norm();
    const long horizon = static_cast<long>(
        std::ceil(std::log(distance / 1e-6) / (eta * lambda_min) * 1.5));

    zofo::RunOptions options;
    options.record_stride = horizon;
    options.record_inputs = true;
    const zofo::MetricSeries series =
        zofo::run_closed_loop({Method::kExactGradient, eta, 0.0, 0}, plant, reduced,
                              zofo::steady_state_state(plant, u0), u0, horizon, options);
    const double final_distance = (series.inputs.back() - min.u).norm();
    report(10, "steady-state and minimizer consistency",
           settling && final_distance <= 1e-6,
           "worst settling residual " + fmt(worst_residual) + " (<= 1e-8); ||u_T - u*|| <= " +
               fmt(final_distance) + " (<= 1e-6) after " + std::to_string(horizon) +
               " steps");
}

// Criterion 11: repeating the criterion-1 run reproduces the CSV byte for
// byte.
void criterion_11(const AggregateResult& first) {
    const AggregateResult second = zofo::run_comparison(reference_comparison_config());
    const std::string a = zofo::csv_string(first.runs);
    const std::string b = zofo::csv_string(second.runs);
    report(11, "byte-identical reproduction", a == b,
           "csv bytes " + std::to_string(a.size()) + " == " + std::to_string(b.size()) +
               ", equal=" + (a == b ? "yes" : "no"));
}

} // namespace

int main() {
    std::printf("acceptance suite\n");
    const AggregateResult first = criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(first);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures;
}
