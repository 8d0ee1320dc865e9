#pragma once

#include <string>

#include "zofo/experiments.hpp"

namespace zofo {

enum class PlotAxis { kUpdates, kPlantSteps };
enum class PlotMetric { kGradNormSq, kOptimalityGap };

struct PlotOptions {
    bool log_y = true;
    PlotAxis axis = PlotAxis::kUpdates;
    PlotMetric metric = PlotMetric::kGradNormSq;
    std::string title;
};

// Write a self-contained SVG: one mean polyline per method plus a shaded
// min/max envelope polygon whenever more than one seed contributed. With
// log_y, non-positive samples are clamped to the smallest positive value in
// the plotted data and the clamp count is noted in the file's <desc>.
void emit_plot(const AggregateResult& result, const std::string& path,
               const PlotOptions& options = {});

[[nodiscard]] std::string plot_string(const AggregateResult& result,
                                      const PlotOptions& options = {});

} // namespace zofo
