#include "zofo/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zofo/errors.hpp"
#include "zofo/rng.hpp"

namespace zofo {

namespace {

std::uint64_t method_stream(Method method) {
    return rng::kControllerBase + static_cast<std::uint64_t>(method);
}

void require_method(const ControllerConfig& cfg, Method expected, const char* op) {
    if (cfg.method != expected) {
        throw std::invalid_argument(std::string(op) + ": config method mismatch");
    }
    // eta = 0 is allowed as a pure-exploration degenerate case.
    if (!(cfg.eta >= 0.0)) {
        throw std::invalid_argument(std::string(op) + ": eta must be >= 0");
    }
    if (expected != Method::kExactGradient && !(cfg.delta > 0.0)) {
        throw std::invalid_argument(std::string(op) + ": delta must be > 0");
    }
}

struct Measurement {
    double cost = 0.0;
    double output_dev_sq = 0.0;
    double output_norm = 0.0;
};

// Apply u for one plant step and evaluate the cost at the resulting output.
Measurement measure(const PlantModel& plant, PlantState& plant_state,
                    const ReducedObjective& objective, const Eigen::VectorXd& u) {
    plant_state = step(plant, plant_state, u);
    Measurement m;
    m.cost = phi(objective.objective(), u, plant_state.last_y);
    m.output_dev_sq = (plant_state.last_y - (objective.G() * u + objective.H())).squaredNorm();
    m.output_norm = plant_state.last_y.norm();
    return m;
}

UpdateRecord two_point_update_impl(const ControllerConfig& cfg, ControllerState& state,
                                   const PlantModel& plant, PlantState& plant_state,
                                   const ReducedObjective& objective, bool restart) {
    UpdateRecord rec;
    rec.u_before = state.u_base;

    if (restart) plant_state.x = steady_state_state(plant, state.u_base);
    const Measurement base = measure(plant, plant_state, objective, state.u_base);
    state.phi_base = base.cost;
    state.phase = Phase::kPerturbed;

    const Perturbation v = draw_perturbation(cfg.seed, method_stream(cfg.method),
                                             static_cast<std::uint64_t>(state.iteration),
                                             plant.dims().p);
    const Eigen::VectorXd u_perturbed = state.u_base + cfg.delta * v.v;
    if (restart) plant_state.x = steady_state_state(plant, u_perturbed);
    const Measurement plus = measure(plant, plant_state, objective, u_perturbed);

    const GradientEstimate est =
        feedback_two_point_estimate(base.cost, plus.cost, v, cfg.delta);
    state.u_base -= cfg.eta * est.g;
    state.v_current = v;
    state.iteration += 1;
    state.plant_steps += 2;
    state.phase = Phase::kBase;

    rec.u_after = state.u_base;
    rec.v = v;
    rec.phi_base = base.cost;
    rec.phi_plus = plus.cost;
    rec.g = est.g;
    rec.plant_steps_used = 2;
    rec.max_output_dev_sq = std::max(base.output_dev_sq, plus.output_dev_sq);
    rec.max_output_norm = std::max(base.output_norm, plus.output_norm);
    return rec;
}

} // namespace

std::string method_name(Method method) {
    switch (method) {
    case Method::kTwoPointRgf: return "two_point_rgf";
    case Method::kIdealizedTwoPoint: return "idealized_two_point";
    case Method::kOnePointResidual: return "one_point_residual";
    case Method::kExactGradient: return "exact_gradient";
    }
    return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
    for (Method m : {Method::kTwoPointRgf, Method::kIdealizedTwoPoint,
                     Method::kOnePointResidual, Method::kExactGradient}) {
        if (method_name(m) == name) return m;
    }
    return std::nullopt;
}

long plant_steps_per_update(Method method) {
    switch (method) {
    case Method::kTwoPointRgf:
    case Method::kIdealizedTwoPoint:
        return 2;
    default:
        return 1;
    }
}

UpdateRecord two_point_rgf_update(const ControllerConfig& cfg, ControllerState& state,
                                  const PlantModel& plant, PlantState& plant_state,
                                  const ReducedObjective& objective) {
    require_method(cfg, Method::kTwoPointRgf, "two_point_rgf_update");
    return two_point_update_impl(cfg, state, plant, plant_state, objective, false);
}

UpdateRecord idealized_two_point_update(const ControllerConfig& cfg, ControllerState& state,
                                        const PlantModel& plant, PlantState& plant_state,
                                        const ReducedObjective& objective) {
    require_method(cfg, Method::kIdealizedTwoPoint, "idealized_two_point_update");
    return two_point_update_impl(cfg, state, plant, plant_state, objective, true);
}

UpdateRecord one_point_residual_update(const ControllerConfig& cfg, ControllerState& state,
                                       const PlantModel& plant, PlantState& plant_state,
                                       const ReducedObjective& objective) {
    require_method(cfg, Method::kOnePointResidual, "one_point_residual_update");
    UpdateRecord rec;
    rec.u_before = state.u_base;

    double warm_dev_sq = 0.0;
    double warm_norm = 0.0;
    long steps_used = 1;
    if (!state.phi_prev.has_value()) {
        // Warm-up: one unperturbed measurement seeds the residual baseline.
        const Measurement warm = measure(plant, plant_state, objective, state.u_base);
        state.phi_prev = warm.cost;
        state.plant_steps += 1;
        steps_used += 1;
        warm_dev_sq = warm.output_dev_sq;
        warm_norm = warm.output_norm;
    }

    const Perturbation v = draw_perturbation(cfg.seed, method_stream(cfg.method),
                                             static_cast<std::uint64_t>(state.iteration),
                                             plant.dims().p);
    const Eigen::VectorXd u_applied = state.u_base + cfg.delta * v.v;
    const Measurement now = measure(plant, plant_state, objective, u_applied);

    const GradientEstimate est =
        one_point_residual_estimate(now.cost, *state.phi_prev, v, cfg.delta);
    state.u_base -= cfg.eta * est.g;
    state.phi_prev = now.cost;
    state.v_current = v;
    state.iteration += 1;
    state.plant_steps += 1;

    rec.u_after = state.u_base;
    rec.v = v;
    rec.phi_base = est.phi_base;
    rec.phi_plus = now.cost;
    rec.g = est.g;
    rec.plant_steps_used = steps_used;
    rec.max_output_dev_sq = std::max(now.output_dev_sq, warm_dev_sq);
    rec.max_output_norm = std::max(now.output_norm, warm_norm);
    return rec;
}

UpdateRecord exact_gradient_update(const ControllerConfig& cfg, ControllerState& state,
                                   const PlantModel& plant, PlantState& plant_state,
                                   const ReducedObjective& objective) {
    require_method(cfg, Method::kExactGradient, "exact_gradient_update");
    UpdateRecord rec;
    rec.u_before = state.u_base;

    const Measurement m = measure(plant, plant_state, objective, state.u_base);
    const Eigen::VectorXd g =
        2.0 * objective.objective().r1() * state.u_base + objective.objective().r2() +
        2.0 * objective.G().transpose() * plant_state.last_y;
    state.u_base -= cfg.eta * g;
    state.iteration += 1;
    state.plant_steps += 1;

    rec.u_after = state.u_base;
    rec.phi_base = m.cost;
    rec.phi_plus = m.cost;
    rec.g = g;
    rec.plant_steps_used = 1;
    rec.max_output_dev_sq = m.output_dev_sq;
    rec.max_output_norm = m.output_norm;
    return rec;
}

MetricSeries run_closed_loop(const ControllerConfig& cfg, const PlantModel& plant,
                             const ReducedObjective& objective, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& u0, long total_plant_steps,
                             const RunOptions& options) {
    if (total_plant_steps < 2) {
        throw EmptySeriesError("run_closed_loop: plant-step budget must be >= 2");
    }
    if (options.record_stride < 1) {
        throw std::invalid_argument("run_closed_loop: record_stride must be >= 1");
    }

    const Minimizer minimizer = analytic_minimizer(objective);

    ControllerState state;
    state.u_base = u0;
    PlantState plant_state{x0, 0, plant.C() * x0 + plant.D() * plant.d_y()};

    MetricSeries series;
    series.method = method_name(cfg.method);
    series.seed = cfg.seed;
    series.eta = cfg.eta;
    series.delta = cfg.delta;
    series.phi_low = minimizer.value;

    const auto record_point = [&](long k) {
        series.update_index.push_back(k);
        series.plant_step.push_back(state.plant_steps);
        series.grad_norm_sq.push_back(grad_tilde_phi(objective, state.u_base).squaredNorm());
        series.optimality_gap.push_back(tilde_phi(objective, state.u_base) - minimizer.value);
        if (options.record_inputs) series.inputs.push_back(state.u_base);
    };
    record_point(0);

    const auto next_update_cost = [&]() -> long {
        long cost = plant_steps_per_update(cfg.method);
        if (cfg.method == Method::kOnePointResidual && !state.phi_prev.has_value()) {
            cost += 1; // warm-up measurement
        }
        return cost;
    };
    if (total_plant_steps < next_update_cost()) {
        throw EmptySeriesError("run_closed_loop: budget too small for a single update");
    }

    while (state.plant_steps + next_update_cost() <= total_plant_steps) {
        UpdateRecord rec;
        switch (cfg.method) {
        case Method::kTwoPointRgf:
            rec = two_point_rgf_update(cfg, state, plant, plant_state, objective);
            break;
        case Method::kIdealizedTwoPoint:
            rec = idealized_two_point_update(cfg, state, plant, plant_state, objective);
            break;
        case Method::kOnePointResidual:
            rec = one_point_residual_update(cfg, state, plant, plant_state, objective);
            break;
        case Method::kExactGradient:
            rec = exact_gradient_update(cfg, state, plant, plant_state, objective);
            break;
        }
        series.mu_hat = std::max(series.mu_hat, rec.max_output_dev_sq);
        series.m_phi_hat = std::max(series.m_phi_hat, 2.0 * rec.max_output_norm);
        if (options.record_details) series.details.push_back(rec);
        const long k = state.iteration;
        const bool last_possible = state.plant_steps + next_update_cost() > total_plant_steps;
        if (k % options.record_stride == 0 || last_possible) record_point(k);
    }
    return series;
}

} // namespace zofo
