#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "zofo/controllers.hpp"
#include "zofo/errors.hpp"
#include "zofo/experiments.hpp"

using namespace zofo;

namespace {

struct Fixture {
    PlantModel plant = test::sv_plant();
    QuadraticObjective objective = test::sv_objective();
    ReducedObjective reduced{objective, plant};
    Eigen::VectorXd u0 = Eigen::VectorXd::Zero(5);
    Eigen::VectorXd x0 = steady_state_state(plant, u0);
};

} // namespace

TEST_CASE("plant-step accounting per method") {
    Fixture f;
    const long budget = 2000;

    const MetricSeries two_point = run_closed_loop({Method::kTwoPointRgf, 1e-6, 5e-5, 0},
                                                   f.plant, f.reduced, f.x0, f.u0, budget);
    CHECK(two_point.update_index.back() == 1000); // exactly budget / 2 updates
    CHECK(two_point.plant_step.back() == budget);

    const MetricSeries idealized =
        run_closed_loop({Method::kIdealizedTwoPoint, 1e-6, 5e-5, 0}, f.plant, f.reduced, f.x0,
                        f.u0, budget);
    CHECK(idealized.update_index.back() == 1000);

    // One budget step goes to the warm-up measurement.
    const MetricSeries one_point = run_closed_loop({Method::kOnePointResidual, 1e-8, 5e-5, 0},
                                                   f.plant, f.reduced, f.x0, f.u0, budget);
    CHECK(one_point.update_index.back() == budget - 1);
    CHECK(one_point.plant_step.back() == budget);

    const MetricSeries exact = run_closed_loop({Method::kExactGradient, 1e-4, 0.0, 0},
                                               f.plant, f.reduced, f.x0, f.u0, budget);
    CHECK(exact.update_index.back() == budget);
}

TEST_CASE("per-update accounting invariants") {
    Fixture f;
    ControllerConfig cfg{Method::kTwoPointRgf, 1e-6, 5e-5, 1};
    ControllerState state;
    state.u_base = f.u0;
    PlantState plant_state{f.x0, 0, Eigen::VectorXd::Zero(5)};
    for (int k = 1; k <= 5; ++k) {
        const UpdateRecord rec =
            two_point_rgf_update(cfg, state, f.plant, plant_state, f.reduced);
        CHECK(rec.plant_steps_used == 2);
        CHECK(state.iteration == k);
        CHECK(state.plant_steps == 2 * k);
        CHECK(plant_state.t == 2 * k);
    }

    ControllerConfig one{Method::kOnePointResidual, 1e-8, 5e-5, 1};
    ControllerState one_state;
    one_state.u_base = f.u0;
    PlantState one_plant{f.x0, 0, Eigen::VectorXd::Zero(5)};
    const UpdateRecord first =
        one_point_residual_update(one, one_state, f.plant, one_plant, f.reduced);
    CHECK(first.plant_steps_used == 2); // warm-up + measurement
    const UpdateRecord second =
        one_point_residual_update(one, one_state, f.plant, one_plant, f.reduced);
    CHECK(second.plant_steps_used == 1);
    CHECK(one_state.plant_steps == 3);
}

TEST_CASE("runs are bit-reproducible from their seeds") {
    Fixture f;
    const ControllerConfig cfg{Method::kTwoPointRgf, 1e-6, 5e-5, 17};
    const MetricSeries a = run_closed_loop(cfg, f.plant, f.reduced, f.x0, f.u0, 500);
    const MetricSeries b = run_closed_loop(cfg, f.plant, f.reduced, f.x0, f.u0, 500);
    CHECK(csv_string({a}) == csv_string({b}));

    const MetricSeries c =
        run_closed_loop({Method::kTwoPointRgf, 1e-6, 5e-5, 18}, f.plant, f.reduced, f.x0,
                        f.u0, 500);
    CHECK(csv_string({a}) != csv_string({c}));
}

TEST_CASE("zero stepsize freezes the input sequence") {
    Fixture f;
    const MetricSeries series = run_closed_loop({Method::kTwoPointRgf, 0.0, 5e-5, 0}, f.plant,
                                                f.reduced, f.x0, f.u0, 200);
    for (const double g : series.grad_norm_sq) {
        CHECK(g == doctest::Approx(series.grad_norm_sq.front()).epsilon(1e-12));
    }
}

TEST_CASE("idealized measurements equal the reduced objective") {
    Fixture f;
    RunOptions options;
    options.record_details = true;
    const MetricSeries series = run_closed_loop({Method::kIdealizedTwoPoint, 40e-5, 5e-5, 2},
                                                f.plant, f.reduced, f.x0, f.u0, 400, options);
    for (const auto& rec : series.details) {
        CHECK(rec.phi_base ==
              doctest::Approx(tilde_phi(f.reduced, rec.u_before)).epsilon(1e-12));
        const Eigen::VectorXd perturbed = rec.u_before + 5e-5 * rec.v.v;
        CHECK(rec.phi_plus ==
              doctest::Approx(tilde_phi(f.reduced, perturbed)).epsilon(1e-12));
    }
}

TEST_CASE("idealized update matches the static oracle on a linear plant") {
    const PlantModel plant = generate_random_plant(0, {10, 5, 5, 5}, 0.05, 0.0);
    const QuadraticObjective objective = test::sv_objective();
    const ReducedObjective reduced(objective, plant);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(5);
    const Eigen::VectorXd x0 = steady_state_state(plant, u0);

    ControllerConfig cfg{Method::kIdealizedTwoPoint, 40e-5, 5e-5, 5};
    ControllerState state;
    state.u_base = u0;
    PlantState plant_state{x0, 0, Eigen::VectorXd::Zero(5)};
    for (int k = 0; k < 10; ++k) {
        const Eigen::VectorXd u_before = state.u_base;
        const UpdateRecord rec =
            idealized_two_point_update(cfg, state, plant, plant_state, reduced);
        const GradientEstimate oracle = two_point_oracle(
            [&](const Eigen::VectorXd& x) { return tilde_phi(reduced, x); }, u_before, rec.v,
            cfg.delta);
        CHECK((rec.g - oracle.g).norm() <= 1e-9 * (1.0 + oracle.g.norm()));
    }
}

TEST_CASE("exact gradient follows the scalar contraction recursion") {
    // Instant scalar plant (a = 0) so y_{t+1} = h(u_t) exactly:
    // u' = (1 - eta lambda) u - eta (R2 + 2 G H), lambda = 2 (R1 + G^2).
    PlantModel plant = test::scalar_plant(0.0, 1.0, 1.0, 1.0, 0.0, 0.5);
    QuadraticObjective objective(Eigen::MatrixXd::Identity(1, 1),
                                 Eigen::VectorXd::Constant(1, -1.0));
    const ReducedObjective reduced(objective, plant);
    const double g = reduced.G()(0, 0);
    const double h = reduced.H()(0);
    const double lambda = 2.0 * (1.0 + g * g);
    const double eta = 0.05;

    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(1);
    RunOptions options;
    options.record_inputs = true;
    const MetricSeries series =
        run_closed_loop({Method::kExactGradient, eta, 0.0, 0}, plant, reduced,
                        steady_state_state(plant, u0), u0, 50, options);
    double u_expected = 0.0;
    for (std::size_t k = 1; k < series.inputs.size(); ++k) {
        u_expected = (1.0 - eta * lambda) * u_expected - eta * (-1.0 + 2.0 * g * h);
        CHECK(series.inputs[k](0) == doctest::Approx(u_expected).epsilon(1e-12));
    }
}

TEST_CASE("exact gradient is stationary at the minimizer") {
    Fixture f;
    const Minimizer min = analytic_minimizer(f.reduced);
    ControllerConfig cfg{Method::kExactGradient, 100e-5, 0.0, 0};
    ControllerState state;
    state.u_base = min.u;
    PlantState plant_state{steady_state_state(f.plant, min.u), 0, Eigen::VectorXd::Zero(5)};
    const UpdateRecord rec = exact_gradient_update(cfg, state, f.plant, plant_state, f.reduced);
    CHECK((rec.u_after - rec.u_before).norm() <= 1e-8);
}

TEST_CASE("exact gradient does nothing on a fully decoupled problem") {
    // R1 = 0, R2 = 0, C = 0: the cost is identically ||D d_y||^2.
    QuadraticObjective zero(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2));
    Eigen::MatrixXd D(1, 1);
    D << 1.0;
    PlantModel plant = test::linear_plant(
        Eigen::MatrixXd::Zero(3, 3) * 0.0, Eigen::MatrixXd::Ones(3, 2),
        Eigen::MatrixXd::Zero(1, 3), D, Eigen::MatrixXd::Zero(3, 1),
        Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
    const ReducedObjective reduced(zero, plant);
    ControllerConfig cfg{Method::kExactGradient, 1e-2, 0.0, 0};
    ControllerState state;
    state.u_base = Eigen::VectorXd::Ones(2);
    PlantState plant_state{Eigen::VectorXd::Zero(3), 0, Eigen::VectorXd::Zero(1)};
    for (int k = 0; k < 5; ++k) {
        exact_gradient_update(cfg, state, plant, plant_state, reduced);
    }
    CHECK(state.u_base == Eigen::VectorXd::Ones(2));
}

TEST_CASE("budget accounting and failure modes") {
    Fixture f;
    CHECK_THROWS_AS((void)run_closed_loop({Method::kTwoPointRgf, 1e-6, 5e-5, 0}, f.plant,
                                          f.reduced, f.x0, f.u0, 1),
                    EmptySeriesError);
    const MetricSeries series = run_closed_loop({Method::kTwoPointRgf, 1e-6, 5e-5, 0},
                                                f.plant, f.reduced, f.x0, f.u0, 2001);
    CHECK(series.update_index.back() == 1000); // odd leftover step is unused
    CHECK(series.plant_step.back() == 2000);

    CHECK_THROWS_AS((void)run_closed_loop({Method::kTwoPointRgf, -1.0, 5e-5, 0}, f.plant,
                                          f.reduced, f.x0, f.u0, 100),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)run_closed_loop({Method::kTwoPointRgf, 1e-6, 0.0, 0}, f.plant,
                                          f.reduced, f.x0, f.u0, 100),
                    std::invalid_argument);
}

TEST_CASE("every method descends from the initial cost at stable stepsizes") {
    Fixture f;
    const double phi0 = tilde_phi(f.reduced, f.u0);
    const struct {
        Method method;
        double eta;
        double delta;
    } configs[] = {
        {Method::kTwoPointRgf, 1e-4, 5e-3},
        {Method::kIdealizedTwoPoint, 40e-5, 5e-5},
        {Method::kOnePointResidual, 2.5e-6, 5e-3},
        {Method::kExactGradient, 100e-5, 0.0},
    };
    for (const auto& c : configs) {
        double mean_final = 0.0;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const MetricSeries series = run_closed_loop({c.method, c.eta, c.delta, seed},
                                                        f.plant, f.reduced, f.x0, f.u0, 4000);
            mean_final += series.optimality_gap.back() + series.phi_low;
        }
        mean_final /= 10.0;
        INFO(method_name(c.method), " mean final cost ", mean_final, " vs ", phi0);
        CHECK(mean_final < phi0);
    }
}

TEST_CASE("method name round trip") {
    for (const Method m : {Method::kTwoPointRgf, Method::kIdealizedTwoPoint,
                           Method::kOnePointResidual, Method::kExactGradient}) {
        CHECK(method_from_name(method_name(m)) == m);
    }
    CHECK(!method_from_name("nonsense").has_value());
}
