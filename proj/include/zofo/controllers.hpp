#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zofo/estimators.hpp"
#include "zofo/objective.hpp"
#include "zofo/plant.hpp"

namespace zofo {

enum class Method {
    kTwoPointRgf,       // two-timescale two-point random gradient-free controller
    kIdealizedTwoPoint, // same, but the plant is restarted at steady state per measurement
    kOnePointResidual,  // one perturbed measurement per update, previous one as baseline
    kExactGradient,     // model-based update using the exact sensitivity G
};

[[nodiscard]] std::string method_name(Method method);
[[nodiscard]] std::optional<Method> method_from_name(const std::string& name);
[[nodiscard]] long plant_steps_per_update(Method method);

struct ControllerConfig {
    Method method = Method::kTwoPointRgf;
    double eta = 0.0;   // stepsize, > 0
    double delta = 0.0; // smoothing parameter, > 0 (ignored by kExactGradient)
    std::uint64_t seed = 0;
};

enum class Phase { kBase, kPerturbed };

struct ControllerState {
    Phase phase = Phase::kBase;
    Eigen::VectorXd u_base;                  // current unperturbed input
    std::optional<Perturbation> v_current;   // last exploration direction
    std::optional<double> phi_base;          // stored first measurement (two-point)
    std::optional<double> phi_prev;          // previous measurement (one-point)
    long iteration = 0;                      // controller updates performed
    long plant_steps = 0;                    // plant steps consumed
};

// Everything observed during one controller update, for diagnostics and the
// estimator-error analysis. Fields not produced by a method stay empty/NaN.
struct UpdateRecord {
    Eigen::VectorXd u_before;
    Eigen::VectorXd u_after;
    Perturbation v;
    double phi_base = 0.0;
    double phi_plus = 0.0;
    Eigen::VectorXd g;
    long plant_steps_used = 0;
    double max_output_dev_sq = 0.0; // max ||y - h(u)||^2 over this update's measurements
    double max_output_norm = 0.0;
};

// One full two-timescale update: measure phi at the base input, perturb,
// measure again, form the two-point estimate, descend. Two plant steps.
UpdateRecord two_point_rgf_update(const ControllerConfig& cfg, ControllerState& state,
                                  const PlantModel& plant, PlantState& plant_state,
                                  const ReducedObjective& objective);

// Same schedule, but the plant state is reset to the steady state of the
// input about to be applied before each measurement, so both measurements
// equal the reduced objective exactly.
UpdateRecord idealized_two_point_update(const ControllerConfig& cfg, ControllerState& state,
                                        const PlantModel& plant, PlantState& plant_state,
                                        const ReducedObjective& objective);

// One plant step per update; the first call performs an extra unperturbed
// warm-up measurement to seed the residual baseline.
UpdateRecord one_point_residual_update(const ControllerConfig& cfg, ControllerState& state,
                                       const PlantModel& plant, PlantState& plant_state,
                                       const ReducedObjective& objective);

// Model-based update u' = u - eta (2 R1 u + R2 + 2 G' y) from the measured
// output; one plant step, deterministic.
UpdateRecord exact_gradient_update(const ControllerConfig& cfg, ControllerState& state,
                                   const PlantModel& plant, PlantState& plant_state,
                                   const ReducedObjective& objective);

// Per-run metric series. Entry k holds the iterate u_k (u_0 is the initial
// input, u_k the input after the k-th update) together with the exact
// gradient-norm and optimality-gap metrics evaluated there. plant_step[k]
// is the cumulative number of plant steps consumed when u_k became current,
// which is the fair comparison axis across methods.
struct MetricSeries {
    std::string method;
    std::uint64_t seed = 0;
    std::vector<long> update_index;
    std::vector<long> plant_step;
    std::vector<double> grad_norm_sq;
    std::vector<double> optimality_gap;
    std::vector<Eigen::VectorXd> inputs;   // filled when record_inputs is set
    std::vector<UpdateRecord> details;     // filled when record_details is set
    double eta = 0.0;
    double delta = 0.0;
    double phi_low = 0.0;
    double mu_hat = 0.0;    // max ||y - h(u)||^2 observed along the run
    double m_phi_hat = 0.0; // 2 max ||y|| observed along the run
};

struct RunOptions {
    long record_stride = 1;
    bool record_inputs = false;
    bool record_details = false;
};

// Drive the configured controller until the plant-step budget is exhausted.
// A two-point method performs floor(budget / 2) updates; the one-point
// method spends one budget step on its warm-up measurement. Deterministic
// given (plant, objective, cfg.seed, budget).
[[nodiscard]] MetricSeries run_closed_loop(const ControllerConfig& cfg, const PlantModel& plant,
                                           const ReducedObjective& objective,
                                           const Eigen::VectorXd& x0, const Eigen::VectorXd& u0,
                                           long total_plant_steps,
                                           const RunOptions& options = {});

} // namespace zofo
