// zofo command-line interface: generate plant/objective instances, select
// controller parameters, run closed-loop comparisons and sweeps, validate
// the estimator and bound properties, and render CSV results as SVG.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zofo/config_io.hpp"
#include "zofo/controllers.hpp"
#include "zofo/errors.hpp"
#include "zofo/experiments.hpp"
#include "zofo/objective.hpp"
#include "zofo/plant.hpp"
#include "zofo/plot.hpp"
#include "zofo/theory.hpp"
#include "zofo/validation.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 infeasible parameters,
// 4 validation failure, 5 I/O failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitValidation = 4;
constexpr int kExitIo = 5;

struct EchoTable {
    std::vector<std::pair<std::string, std::string>> rows;

    template <typename T> void add(const std::string& key, const T& value) {
        std::ostringstream out;
        out << value;
        rows.emplace_back(key, out.str());
    }
    void print() const {
        std::cout << "configuration:\n";
        for (const auto& [key, value] : rows) {
            std::cout << "  " << key << " = " << value << "\n";
        }
    }
};

zofo::PlantDims parse_dims(const std::string& text) {
    zofo::PlantDims dims;
    char c1, c2, c3;
    std::istringstream in(text);
    if (!(in >> dims.n >> c1 >> dims.p >> c2 >> dims.q >> c3 >> dims.r) || c1 != ',' ||
        c2 != ',' || c3 != ',' || dims.n < 1 || dims.p < 1 || dims.q < 1 || dims.r < 1) {
        throw zofo::ConfigError("--dims expects n,p,q,r with positive entries");
    }
    return dims;
}

struct ComparisonInputs {
    std::string config;
    std::uint64_t plant_seed = 0;
    std::uint64_t objective_seed = 0;
    long seeds = 10;
    long budget = 10000;
    long stride = 1;
    double delta = 5e-5;
    double eta_two_point = 40e-5;
    double eta_idealized = 40e-5;
    double eta_one_point = 2.5e-5;
    double eta_exact = 100e-5;
    std::string out_csv;
    std::string out_plot;
};

void echo_inputs(const char* command, const ComparisonInputs& in) {
    EchoTable echo;
    echo.add("command", command);
    echo.add("config", in.config.empty() ? "(generated from seeds)" : in.config);
    echo.add("plant_seed", in.plant_seed);
    echo.add("objective_seed", in.objective_seed);
    echo.add("seeds", in.seeds);
    echo.add("budget", in.budget);
    echo.add("record_stride", in.stride);
    echo.add("delta", in.delta);
    echo.add("eta_two_point", in.eta_two_point);
    echo.add("eta_idealized", in.eta_idealized);
    echo.add("eta_one_point", in.eta_one_point);
    echo.add("eta_exact", in.eta_exact);
    echo.add("out_csv", in.out_csv.empty() ? "(none)" : in.out_csv);
    echo.add("out_plot", in.out_plot.empty() ? "(none)" : in.out_plot);
    echo.print();
}

// Run (methods x seeds) either on the generated instance or on the instance
// pinned by a config file.
zofo::AggregateResult execute_runs(const ComparisonInputs& in,
                                   const std::vector<zofo::ControllerConfig>& methods,
                                   const std::vector<std::uint64_t>& seeds) {
    if (in.config.empty()) {
        zofo::ExperimentConfig cfg;
        cfg.plant_seed = in.plant_seed;
        cfg.objective_seed = in.objective_seed;
        cfg.controller_seeds = seeds;
        cfg.methods = methods;
        cfg.plant_step_budget = in.budget;
        cfg.record_stride = in.stride;
        return zofo::run_comparison(cfg);
    }
    const zofo::InstanceConfig instance = zofo::load_instance(in.config);
    const zofo::ReducedObjective reduced(instance.objective, instance.plant);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(instance.plant.dims().p);
    const Eigen::VectorXd x0 = zofo::steady_state_state(instance.plant, u0);
    zofo::RunOptions options;
    options.record_stride = in.stride;
    std::vector<zofo::MetricSeries> runs;
    for (const auto& method_cfg : methods) {
        for (const std::uint64_t seed : seeds) {
            zofo::ControllerConfig run_cfg = method_cfg;
            run_cfg.seed = seed;
            runs.push_back(zofo::run_closed_loop(run_cfg, instance.plant, reduced, x0, u0,
                                                 in.budget, options));
        }
    }
    return zofo::aggregate_runs(std::move(runs));
}

std::vector<std::uint64_t> seed_range(long count) {
    std::vector<std::uint64_t> seeds;
    for (long s = 0; s < count; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    return seeds;
}

std::vector<zofo::ControllerConfig> comparison_methods(const ComparisonInputs& in) {
    return {
        {zofo::Method::kTwoPointRgf, in.eta_two_point, in.delta, 0},
        {zofo::Method::kIdealizedTwoPoint, in.eta_idealized, in.delta, 0},
        {zofo::Method::kOnePointResidual, in.eta_one_point, in.delta, 0},
        {zofo::Method::kExactGradient, in.eta_exact, in.delta, 0},
    };
}

void print_final_table(const zofo::AggregateResult& result) {
    std::printf("%-22s %16s %16s\n", "method", "final grad^2", "final gap");
    for (const auto& grad : result.grad_norm_sq) {
        const auto& gap = result.gap_for(grad.method);
        std::printf("%-22s %16.6g %16.6g\n", grad.method.c_str(), grad.mean.back(),
                    gap.mean.back());
    }
}

void write_outputs(const zofo::AggregateResult& result, const ComparisonInputs& in) {
    if (!in.out_csv.empty()) {
        zofo::export_csv(result, in.out_csv);
        std::printf("wrote %s\n", in.out_csv.c_str());
    }
    if (!in.out_plot.empty()) {
        zofo::PlotOptions plot;
        plot.metric = zofo::PlotMetric::kGradNormSq;
        plot.title = "squared gradient norm";
        zofo::emit_plot(result, in.out_plot, plot);
        std::printf("wrote %s\n", in.out_plot.c_str());

        const std::size_t dot = in.out_plot.rfind('.');
        const std::string stem =
            dot == std::string::npos ? in.out_plot : in.out_plot.substr(0, dot);
        const std::string ext =
            dot == std::string::npos ? std::string(".svg") : in.out_plot.substr(dot);
        plot.metric = zofo::PlotMetric::kOptimalityGap;
        plot.title = "optimality gap";
        zofo::emit_plot(result, stem + "-gap" + ext, plot);
        std::printf("wrote %s\n", (stem + "-gap" + ext).c_str());
    }
}

int print_suite(const zofo::validation::SuiteResult& result) {
    for (const auto& check : result.checks) {
        std::printf("[%s] %s: measured=%.6g reference=%.6g%s%s\n",
                    check.passed ? "PASS" : "FAIL", check.name.c_str(), check.measured,
                    check.reference, check.note.empty() ? "" : " ", check.note.c_str());
    }
    const bool ok = result.all_passed();
    std::printf("%s: %zu checks, %s\n", result.suite.c_str(), result.checks.size(),
                ok ? "all passed" : "FAILURES PRESENT");
    return ok ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zofo: model-free feedback optimization testbed"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen-plant", "generate a random plant/objective instance");
    std::uint64_t gen_seed = 0;
    std::uint64_t gen_obj_seed = 0;
    bool gen_obj_seed_set = false;
    std::string gen_dims = "10,5,5,5";
    double gen_a_norm = 0.05;
    double gen_f_norm = 0.01;
    std::string gen_out;
    gen->add_option("--seed", gen_seed, "instance seed")->capture_default_str();
    gen->add_option("--objective-seed", gen_obj_seed, "objective seed (defaults to --seed)")
        ->each([&](const std::string&) { gen_obj_seed_set = true; });
    gen->add_option("--dims", gen_dims, "dimensions n,p,q,r")->capture_default_str();
    gen->add_option("--a-norm", gen_a_norm, "spectral norm of A, must be < 1")
        ->capture_default_str();
    gen->add_option("--f-norm", gen_f_norm, "induced 1-norm of F")->capture_default_str();
    gen->add_option("--out", gen_out, "output config path");

    auto* sel = app.add_subcommand("select-params", "stepsize/smoothing selection and bounds");
    double sel_l = 0, sel_m = 0, sel_mu = 0, sel_eps = 0, sel_eps_phi = 0, sel_gap = 1.0;
    long sel_p = 0;
    sel->add_option("--L", sel_l, "smoothness constant")->required();
    sel->add_option("--Mphi", sel_m, "Lipschitz estimate of the loss in y")->required();
    sel->add_option("--mu", sel_mu, "plant-speed bound estimate")->required();
    sel->add_option("--p", sel_p, "input dimension")->required();
    sel->add_option("--eps", sel_eps, "target mean-squared-gradient accuracy")->required();
    sel->add_option("--eps-phi", sel_eps_phi, "smoothing-precision target")->required();
    sel->add_option("--phi-gap", sel_gap, "initial gap phi_delta(u0) - phi_low")
        ->capture_default_str();

    auto* run = app.add_subcommand("run", "run a single controller");
    ComparisonInputs run_in;
    std::string run_method = "two_point_rgf";
    double run_eta = 40e-5;
    std::uint64_t run_seed = 0;
    run->add_option("--config", run_in.config, "instance config file");
    run->add_option("--plant-seed", run_in.plant_seed, "plant seed")->capture_default_str();
    run->add_option("--objective-seed", run_in.objective_seed, "objective seed")
        ->capture_default_str();
    run->add_option("--method", run_method,
                    "two_point_rgf | idealized_two_point | one_point_residual | exact_gradient")
        ->capture_default_str();
    run->add_option("--eta", run_eta, "stepsize")->capture_default_str();
    run->add_option("--delta", run_in.delta, "smoothing parameter")->capture_default_str();
    run->add_option("--seed", run_seed, "controller seed")->capture_default_str();
    run->add_option("--budget", run_in.budget, "plant-step budget")->capture_default_str();
    run->add_option("--stride", run_in.stride, "record stride")->capture_default_str();
    run->add_option("--out-csv", run_in.out_csv, "CSV output path");
    run->add_option("--out-plot", run_in.out_plot, "SVG output path");

    auto* cmp = app.add_subcommand("compare", "four-method closed-loop comparison");
    ComparisonInputs cmp_in;
    cmp->add_option("--config", cmp_in.config, "instance config file");
    cmp->add_option("--plant-seed", cmp_in.plant_seed, "plant seed")->capture_default_str();
    cmp->add_option("--objective-seed", cmp_in.objective_seed, "objective seed")
        ->capture_default_str();
    cmp->add_option("--seeds", cmp_in.seeds, "number of controller seeds")
        ->capture_default_str();
    cmp->add_option("--budget", cmp_in.budget, "plant-step budget per run")
        ->capture_default_str();
    cmp->add_option("--stride", cmp_in.stride, "record stride")->capture_default_str();
    cmp->add_option("--eta-two-point", cmp_in.eta_two_point, "two-point stepsize")
        ->capture_default_str();
    cmp->add_option("--eta-idealized", cmp_in.eta_idealized, "idealized stepsize")
        ->capture_default_str();
    cmp->add_option("--eta-one-point", cmp_in.eta_one_point, "one-point stepsize")
        ->capture_default_str();
    cmp->add_option("--eta-exact", cmp_in.eta_exact, "exact-gradient stepsize")
        ->capture_default_str();
    cmp->add_option("--delta", cmp_in.delta, "smoothing parameter")->capture_default_str();
    cmp->add_option("--out-csv", cmp_in.out_csv, "CSV output path");
    cmp->add_option("--out-plot", cmp_in.out_plot, "SVG output path");

    auto* swp = app.add_subcommand("sweep", "sweep eta or delta for the two-point controller");
    ComparisonInputs swp_in;
    std::string swp_param = "delta";
    std::vector<double> swp_values;
    swp->add_option("--config", swp_in.config, "instance config file");
    swp->add_option("--plant-seed", swp_in.plant_seed, "plant seed")->capture_default_str();
    swp->add_option("--objective-seed", swp_in.objective_seed, "objective seed")
        ->capture_default_str();
    swp->add_option("--param", swp_param, "eta | delta")->capture_default_str();
    swp->add_option("--values", swp_values, "parameter values")->required()->expected(-1);
    swp->add_option("--seeds", swp_in.seeds, "number of controller seeds")
        ->capture_default_str();
    swp->add_option("--budget", swp_in.budget, "plant-step budget")->capture_default_str();
    swp->add_option("--stride", swp_in.stride, "record stride")->capture_default_str();
    swp->add_option("--eta", swp_in.eta_two_point, "base two-point stepsize")
        ->capture_default_str();
    swp->add_option("--delta", swp_in.delta, "base smoothing parameter")
        ->capture_default_str();
    swp->add_option("--out-csv", swp_in.out_csv, "CSV output path prefix");

    auto* val = app.add_subcommand("validate", "run the property suites");
    std::string val_suite = "lemmas";
    long val_samples = 100000;
    std::uint64_t val_seed = 0;
    val->add_option("--suite", val_suite, "lemmas | bounds | plant")->capture_default_str();
    val->add_option("--samples", val_samples, "Monte Carlo sample count")
        ->capture_default_str();
    val->add_option("--seed", val_seed, "validation seed")->capture_default_str();

    auto* plt = app.add_subcommand("plot", "render a CSV result as SVG");
    std::string plt_in, plt_out, plt_axis = "updates", plt_metric = "grad";
    bool plt_linear = false;
    plt->add_option("--in-csv", plt_in, "input CSV")->required();
    plt->add_option("--out", plt_out, "output SVG")->required();
    plt->add_option("--axis", plt_axis, "updates | plant-steps")->capture_default_str();
    plt->add_option("--metric", plt_metric, "grad | gap")->capture_default_str();
    plt->add_flag("--linear-y", plt_linear, "linear y axis (default log)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (gen_a_norm >= 1.0 || gen_a_norm < 0.0) {
                std::cerr << "gen-plant: --a-norm must lie in [0, 1)\n";
                return kExitUsage;
            }
            const zofo::PlantDims dims = parse_dims(gen_dims);
            const std::uint64_t obj_seed = gen_obj_seed_set ? gen_obj_seed : gen_seed;
            EchoTable echo;
            echo.add("command", "gen-plant");
            echo.add("seed", gen_seed);
            echo.add("objective_seed", obj_seed);
            echo.add("dims", gen_dims);
            echo.add("a_norm", gen_a_norm);
            echo.add("f_norm", gen_f_norm);
            echo.add("out", gen_out.empty() ? "(summary only)" : gen_out);
            echo.print();

            const zofo::InstanceConfig instance{
                zofo::generate_random_plant(gen_seed, dims, gen_a_norm, gen_f_norm),
                zofo::generate_random_objective(obj_seed, dims.p)};
            if (!gen_out.empty()) zofo::save_instance(instance, gen_out);
            const zofo::ReducedObjective reduced(instance.objective, instance.plant);
            std::printf("sensitivity norm ||G||_2 = %.12g\n",
                        zofo::spectral_norm(reduced.G()));
            std::printf("smoothness constant L = %.12g\n",
                        zofo::derived_constants(reduced).l_smooth);
            return kExitOk;
        }

        if (sel->parsed()) {
            if (sel_l <= 0 || sel_m <= 0 || sel_mu <= 0 || sel_p < 1 || sel_eps <= 0 ||
                sel_eps_phi <= 0) {
                std::cerr << "select-params: all constants must be positive\n";
                return kExitUsage;
            }
            EchoTable echo;
            echo.add("command", "select-params");
            echo.add("L", sel_l);
            echo.add("Mphi", sel_m);
            echo.add("mu", sel_mu);
            echo.add("p", sel_p);
            echo.add("eps", sel_eps);
            echo.add("eps_phi", sel_eps_phi);
            echo.add("phi_gap", sel_gap);
            echo.print();

            zofo::TheoryConstants tc;
            tc.l_smooth = sel_l;
            tc.m_phi = sel_m;
            tc.mu = sel_mu;
            tc.p = sel_p;
            tc.epsilon = sel_eps;
            tc.epsilon_phi = sel_eps_phi;
            tc.phi_low = 0.0;
            tc.phi_delta_u0 = sel_gap;
            const zofo::SelectedParameters out = zofo::select_parameters(tc);
            std::printf("eta    = %.12g\n", out.eta);
            std::printf("delta  = %.12g (delta^2 = %.12g)\n", out.delta, out.delta_sq);
            std::printf("mu1    = %.12g\n", out.mu1);
            std::printf("mu2    = %.12g\n", out.mu2);
            std::printf("c1     = %.12g\n", out.c1);
            std::printf("c2     = %.12g\n", out.c2);
            std::printf("c3     = %.12g\n", out.c3);
            std::printf("T_min  = %ld\n", out.t_min);
            if (out.feasible) {
                std::printf("verdict = feasible\n");
                return kExitOk;
            }
            std::printf("verdict = infeasible (mu exceeds %s%s%s)\n",
                        out.mu1_binds ? "mu1" : "",
                        out.mu1_binds && out.mu2_binds ? " and " : "",
                        out.mu2_binds ? "mu2" : "");
            return kExitInfeasible;
        }

        if (run->parsed()) {
            const auto method = zofo::method_from_name(run_method);
            if (!method) {
                std::cerr << "run: unknown method " << run_method << "\n";
                return kExitUsage;
            }
            run_in.seeds = 1;
            echo_inputs("run", run_in);
            const zofo::AggregateResult result = execute_runs(
                run_in, {{*method, run_eta, run_in.delta, run_seed}}, {run_seed});
            print_final_table(result);
            write_outputs(result, run_in);
            return kExitOk;
        }

        if (cmp->parsed()) {
            std::vector<zofo::ControllerConfig> methods = comparison_methods(cmp_in);
            if (!cmp_in.config.empty()) {
                // File-provided experiment settings; explicit flags win.
                const zofo::ExperimentSettings file =
                    zofo::experiment_settings_from_file(cmp_in.config);
                if (file.seeds && cmp->count("--seeds") == 0) cmp_in.seeds = *file.seeds;
                if (file.budget && cmp->count("--budget") == 0) cmp_in.budget = *file.budget;
                if (file.record_stride && cmp->count("--stride") == 0) {
                    cmp_in.stride = *file.record_stride;
                }
                const bool eta_flags =
                    cmp->count("--eta-two-point") + cmp->count("--eta-idealized") +
                        cmp->count("--eta-one-point") + cmp->count("--eta-exact") +
                        cmp->count("--delta") >
                    0;
                if (file.methods && !eta_flags) methods = *file.methods;
            }
            echo_inputs("compare", cmp_in);
            const zofo::AggregateResult result =
                execute_runs(cmp_in, methods, seed_range(cmp_in.seeds));
            print_final_table(result);
            write_outputs(result, cmp_in);
            return kExitOk;
        }

        if (swp->parsed()) {
            if (swp_param != "eta" && swp_param != "delta") {
                std::cerr << "sweep: --param must be eta or delta\n";
                return kExitUsage;
            }
            echo_inputs("sweep", swp_in);
            zofo::ExperimentConfig base;
            base.plant_seed = swp_in.plant_seed;
            base.objective_seed = swp_in.objective_seed;
            base.controller_seeds = seed_range(swp_in.seeds);
            base.plant_step_budget = swp_in.budget;
            base.record_stride = swp_in.stride;
            base.methods = {
                {zofo::Method::kTwoPointRgf, swp_in.eta_two_point, swp_in.delta, 0}};
            const auto results = zofo::sweep(swp_param == "eta"
                                                 ? zofo::SweepParameter::kEta
                                                 : zofo::SweepParameter::kDelta,
                                             swp_values, base);
            std::printf("%-14s %16s %16s\n", swp_param.c_str(), "final grad^2", "final gap");
            for (const auto& [value, result] : results) {
                std::printf("%-14.6g %16.6g %16.6g\n", value,
                            result.grad_norm_sq.front().mean.back(),
                            result.optimality_gap.front().mean.back());
                if (!swp_in.out_csv.empty()) {
                    std::ostringstream path;
                    path << swp_in.out_csv << "-" << swp_param << "=" << value << ".csv";
                    zofo::export_csv(result, path.str());
                    std::printf("wrote %s\n", path.str().c_str());
                }
            }
            return kExitOk;
        }

        if (val->parsed()) {
            if (val_samples < 1) {
                std::cerr << "validate: --samples must be >= 1\n";
                return kExitUsage;
            }
            if (val_suite != "lemmas" && val_suite != "bounds" && val_suite != "plant") {
                std::cerr << "validate: unknown suite " << val_suite << "\n";
                return kExitUsage;
            }
            EchoTable echo;
            echo.add("command", "validate");
            echo.add("suite", val_suite);
            echo.add("samples", val_samples);
            echo.add("seed", val_seed);
            echo.print();
            return print_suite(zofo::validation::run_suite(val_suite, val_samples, val_seed));
        }

        if (plt->parsed()) {
            zofo::PlotOptions options;
            options.log_y = !plt_linear;
            if (plt_axis == "plant-steps") {
                options.axis = zofo::PlotAxis::kPlantSteps;
            } else if (plt_axis != "updates") {
                std::cerr << "plot: --axis must be updates or plant-steps\n";
                return kExitUsage;
            }
            if (plt_metric == "gap") {
                options.metric = zofo::PlotMetric::kOptimalityGap;
            } else if (plt_metric != "grad") {
                std::cerr << "plot: --metric must be grad or gap\n";
                return kExitUsage;
            }
            const zofo::AggregateResult result =
                zofo::aggregate_runs(zofo::import_csv(plt_in));
            zofo::emit_plot(result, plt_out, options);
            std::printf("wrote %s\n", plt_out.c_str());
            return kExitOk;
        }
    } catch (const zofo::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
