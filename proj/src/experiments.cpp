#include "zofo/experiments.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zofo/errors.hpp"
#include "zofo/objective.hpp"

namespace zofo {

namespace {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

AggregateSeries aggregate_one(const std::string& method,
                              const std::vector<const MetricSeries*>& runs) {
    AggregateSeries agg;
    agg.method = method;
    const std::size_t len = runs.front()->update_index.size();
    for (const auto* run : runs) {
        if (run->update_index.size() != len) {
            throw ConfigError("aggregate: seed runs for one method have unequal lengths");
        }
    }
    agg.update_index = runs.front()->update_index;
    agg.plant_step = runs.front()->plant_step;
    agg.mean.resize(len);
    agg.lo.resize(len);
    agg.hi.resize(len);
    return agg;
}

void fill_aggregate(AggregateSeries& agg, const std::vector<const MetricSeries*>& runs,
                    const std::vector<double> MetricSeries::* field) {
    const std::size_t len = agg.update_index.size();
    for (std::size_t i = 0; i < len; ++i) {
        double sum = 0.0;
        double lo = (runs.front()->*field)[i];
        double hi = lo;
        for (const auto* run : runs) {
            const double v = (run->*field)[i];
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        // The exact mean lies in [lo, hi]; summation rounding can push it a
        // final ulp outside, so clamp to keep the envelope invariant exact.
        agg.mean[i] = std::clamp(sum / static_cast<double>(runs.size()), lo, hi);
        agg.lo[i] = lo;
        agg.hi[i] = hi;
    }
}

} // namespace

std::vector<ControllerConfig> default_method_set() {
    return {
        {Method::kTwoPointRgf, 40e-5, 5e-5, 0},
        {Method::kIdealizedTwoPoint, 40e-5, 5e-5, 0},
        {Method::kOnePointResidual, 2.5e-5, 5e-5, 0},
        {Method::kExactGradient, 100e-5, 5e-5, 0},
    };
}

const AggregateSeries& AggregateResult::grad_for(const std::string& method) const {
    for (const auto& s : grad_norm_sq) {
        if (s.method == method) return s;
    }
    throw ConfigError("aggregate: no series for method " + method);
}

const AggregateSeries& AggregateResult::gap_for(const std::string& method) const {
    for (const auto& s : optimality_gap) {
        if (s.method == method) return s;
    }
    throw ConfigError("aggregate: no series for method " + method);
}

AggregateResult run_comparison(const ExperimentConfig& cfg) {
    if (cfg.controller_seeds.empty()) throw ConfigError("run_comparison: need >= 1 seed");
    if (cfg.methods.empty()) throw ConfigError("run_comparison: need >= 1 method");
    if (cfg.plant_step_budget < 2) throw ConfigError("run_comparison: budget must be >= 2");

    const PlantModel plant =
        generate_random_plant(cfg.plant_seed, cfg.dims, cfg.a_norm, cfg.f_norm);
    const QuadraticObjective objective =
        generate_random_objective(cfg.objective_seed, cfg.dims.p);
    const ReducedObjective reduced(objective, plant);

    const Eigen::VectorXd u0 =
        cfg.u0.size() > 0 ? cfg.u0 : Eigen::VectorXd::Zero(cfg.dims.p);
    const Eigen::VectorXd x0 = steady_state_state(plant, u0);

    RunOptions options;
    options.record_stride = cfg.record_stride;
    options.record_inputs = cfg.record_inputs;
    options.record_details = cfg.record_details;

    std::vector<MetricSeries> runs;
    runs.reserve(cfg.methods.size() * cfg.controller_seeds.size());
    for (const auto& method_cfg : cfg.methods) {
        for (const std::uint64_t seed : cfg.controller_seeds) {
            ControllerConfig run_cfg = method_cfg;
            run_cfg.seed = seed;
            try {
                runs.push_back(run_closed_loop(run_cfg, plant, reduced, x0, u0,
                                               cfg.plant_step_budget, options));
            } catch (const std::exception& e) {
                std::ostringstream msg;
                msg << "run_comparison: method " << method_name(method_cfg.method) << ", seed "
                    << seed << ": " << e.what();
                throw ConfigError(msg.str());
            }
        }
    }

    AggregateResult result = aggregate_runs(std::move(runs));
    result.seeds_per_method = static_cast<long>(cfg.controller_seeds.size());
    return result;
}

AggregateResult aggregate_runs(std::vector<MetricSeries> runs) {
    AggregateResult result;
    result.runs = std::move(runs);

    std::vector<std::string> methods;
    for (const auto& run : result.runs) {
        if (std::find(methods.begin(), methods.end(), run.method) == methods.end()) {
            methods.push_back(run.method);
        }
    }
    long seeds = 0;
    for (const auto& method : methods) {
        std::vector<const MetricSeries*> group;
        for (const auto& run : result.runs) {
            if (run.method == method) group.push_back(&run);
        }
        seeds = std::max<long>(seeds, static_cast<long>(group.size()));
        AggregateSeries grad = aggregate_one(method, group);
        fill_aggregate(grad, group, &MetricSeries::grad_norm_sq);
        AggregateSeries gap = aggregate_one(method, group);
        fill_aggregate(gap, group, &MetricSeries::optimality_gap);
        result.grad_norm_sq.push_back(std::move(grad));
        result.optimality_gap.push_back(std::move(gap));
    }
    result.seeds_per_method = seeds;
    return result;
}

std::string csv_string(const std::vector<MetricSeries>& runs) {
    std::ostringstream out;
    out << "method,seed,update_index,plant_step,grad_norm_sq,optimality_gap\n";
    for (const auto& run : runs) {
        for (std::size_t i = 0; i < run.update_index.size(); ++i) {
            out << run.method << ',' << run.seed << ',' << run.update_index[i] << ','
                << run.plant_step[i] << ',' << format_double(run.grad_norm_sq[i]) << ','
                << format_double(run.optimality_gap[i]) << '\n';
        }
    }
    return out.str();
}

void export_csv(const std::vector<MetricSeries>& runs, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("export_csv: cannot open " + path);
    file << csv_string(runs);
    if (!file) throw IoError("export_csv: write failed for " + path);
}

void export_csv(const AggregateResult& result, const std::string& path) {
    export_csv(result.runs, path);
}

std::vector<MetricSeries> import_csv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("import_csv: cannot open " + path);

    std::string line;
    if (!std::getline(file, line)) throw IoError("import_csv: empty file " + path);
    if (line != "method,seed,update_index,plant_step,grad_norm_sq,optimality_gap") {
        throw ConfigError("import_csv: unexpected header in " + path);
    }

    std::vector<MetricSeries> runs;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        std::array<std::string, 6> fields;
        std::size_t start = 0;
        for (int i = 0; i < 6; ++i) {
            const std::size_t comma = line.find(',', start);
            if (i < 5 && comma == std::string::npos) {
                throw ConfigError("import_csv: malformed row in " + path);
            }
            fields[i] = line.substr(start, comma == std::string::npos
                                               ? std::string::npos
                                               : comma - start);
            start = comma + 1;
        }
        const std::uint64_t seed = std::stoull(fields[1]);
        if (runs.empty() || runs.back().method != fields[0] || runs.back().seed != seed) {
            MetricSeries s;
            s.method = fields[0];
            s.seed = seed;
            runs.push_back(std::move(s));
        }
        MetricSeries& s = runs.back();
        s.update_index.push_back(std::stol(fields[2]));
        s.plant_step.push_back(std::stol(fields[3]));
        s.grad_norm_sq.push_back(std::strtod(fields[4].c_str(), nullptr));
        s.optimality_gap.push_back(std::strtod(fields[5].c_str(), nullptr));
    }
    return runs;
}

std::map<double, AggregateResult> sweep(SweepParameter parameter,
                                        const std::vector<double>& values,
                                        const ExperimentConfig& base) {
    if (values.empty()) throw ConfigError("sweep: need at least one value");

    ControllerConfig two_point{Method::kTwoPointRgf, 40e-5, 5e-5, 0};
    for (const auto& m : base.methods) {
        if (m.method == Method::kTwoPointRgf) two_point = m;
    }

    std::map<double, AggregateResult> results;
    for (const double value : values) {
        ExperimentConfig cfg = base;
        ControllerConfig swept = two_point;
        if (parameter == SweepParameter::kEta) {
            swept.eta = value;
        } else {
            swept.delta = value;
        }
        cfg.methods = {swept};
        results.emplace(value, run_comparison(cfg));
    }
    return results;
}

} // namespace zofo
