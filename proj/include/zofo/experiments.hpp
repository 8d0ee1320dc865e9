#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "zofo/controllers.hpp"

namespace zofo {

struct ExperimentConfig {
    std::uint64_t plant_seed = 0;
    std::uint64_t objective_seed = 0;
    std::vector<std::uint64_t> controller_seeds;
    std::vector<ControllerConfig> methods; // per-method eta/delta; seed overridden per run
    long plant_step_budget = 10000;
    PlantDims dims{10, 5, 5, 5};
    double a_norm = 0.05;
    double f_norm = 0.01;
    long record_stride = 1;
    Eigen::VectorXd u0;          // empty means zeros(p)
    bool record_inputs = false;
    bool record_details = false;
};

// The four-method comparison at the stepsizes used throughout: two-point
// and idealized two-point at 40e-5, one-point residual at 2.5e-5, exact
// gradient at 100e-5, all with smoothing parameter 5e-5.
[[nodiscard]] std::vector<ControllerConfig> default_method_set();

struct AggregateSeries {
    std::string method;
    std::vector<long> update_index;
    std::vector<long> plant_step;
    std::vector<double> mean; // arithmetic mean across seeds
    std::vector<double> lo;   // pointwise min across seeds
    std::vector<double> hi;   // pointwise max across seeds
};

struct AggregateResult {
    std::vector<MetricSeries> runs; // ordered by (method, seed)
    std::vector<AggregateSeries> grad_norm_sq;
    std::vector<AggregateSeries> optimality_gap;
    long seeds_per_method = 0;

    [[nodiscard]] const AggregateSeries& grad_for(const std::string& method) const;
    [[nodiscard]] const AggregateSeries& gap_for(const std::string& method) const;
};

// Run every (method, seed) pair on the instance defined by the config and
// aggregate mean plus min/max envelopes per method. Deterministic; any
// sub-run failure is rethrown annotated with the offending method and seed.
[[nodiscard]] AggregateResult run_comparison(const ExperimentConfig& cfg);

// CSV schema: method,seed,update_index,plant_step,grad_norm_sq,optimality_gap
// with rows ordered by (method, seed, index). Values print with enough
// digits to round-trip exactly.
void export_csv(const std::vector<MetricSeries>& runs, const std::string& path);
void export_csv(const AggregateResult& result, const std::string& path);
[[nodiscard]] std::string csv_string(const std::vector<MetricSeries>& runs);
[[nodiscard]] std::vector<MetricSeries> import_csv(const std::string& path);

// Re-aggregate series (e.g. read back from CSV) per method.
[[nodiscard]] AggregateResult aggregate_runs(std::vector<MetricSeries> runs);

enum class SweepParameter { kEta, kDelta };

// Run the two-point controller comparison once per parameter value; results
// are keyed by value. Only the two-point method is swept.
[[nodiscard]] std::map<double, AggregateResult> sweep(SweepParameter parameter,
                                                      const std::vector<double>& values,
                                                      const ExperimentConfig& base);

} // namespace zofo
