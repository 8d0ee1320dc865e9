#include "zofo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "zofo/errors.hpp"

namespace zofo {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 80.0;
constexpr double kMarginRight = 180.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Mapper {
    double x_min, x_max, y_min, y_max;
    bool log_y;

    [[nodiscard]] double x(double v) const {
        const double span = std::max(x_max - x_min, 1e-300);
        return kMarginLeft + (v - x_min) / span * (kWidth - kMarginLeft - kMarginRight);
    }
    [[nodiscard]] double y(double v) const {
        const double lo = log_y ? std::log10(y_min) : y_min;
        const double hi = log_y ? std::log10(y_max) : y_max;
        const double t = log_y ? std::log10(v) : v;
        const double span = std::max(hi - lo, 1e-300);
        return kHeight - kMarginBottom -
               (t - lo) / span * (kHeight - kMarginTop - kMarginBottom);
    }
};

} // namespace

std::string plot_string(const AggregateResult& result, const PlotOptions& options) {
    const auto& series =
        options.metric == PlotMetric::kGradNormSq ? result.grad_norm_sq : result.optimality_gap;
    if (series.empty() || series.front().update_index.empty()) {
        throw ConfigError("emit_plot: nothing to plot");
    }
    const bool envelopes = result.seeds_per_method > 1;

    // Data ranges; in log mode non-positive values are clamped to the
    // smallest positive value present.
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    double min_positive = std::numeric_limits<double>::infinity();
    long clamped = 0;
    const auto x_of = [&](const AggregateSeries& s, std::size_t i) {
        return options.axis == PlotAxis::kUpdates ? static_cast<double>(s.update_index[i])
                                                  : static_cast<double>(s.plant_step[i]);
    };
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.update_index.size(); ++i) {
            x_min = std::min(x_min, x_of(s, i));
            x_max = std::max(x_max, x_of(s, i));
            for (const double v : {s.mean[i], s.lo[i], s.hi[i]}) {
                if (std::isfinite(v)) {
                    y_min = std::min(y_min, v);
                    y_max = std::max(y_max, v);
                    if (v > 0.0) min_positive = std::min(min_positive, v);
                }
            }
        }
    }
    if (!std::isfinite(y_min) || !std::isfinite(y_max)) {
        y_min = 0.0;
        y_max = 1.0;
    }
    if (options.log_y) {
        if (!std::isfinite(min_positive)) min_positive = 1e-300;
        if (y_min <= 0.0) y_min = min_positive;
        if (y_max <= 0.0) y_max = 1.0;
    }
    if (y_max == y_min) y_max = y_min + (options.log_y ? y_min : 1.0);

    const Mapper map{x_min, x_max, y_min, y_max, options.log_y};
    const auto clamp_value = [&](double v) {
        if (!std::isfinite(v)) {
            ++clamped;
            return options.log_y ? y_max : y_max;
        }
        if (options.log_y && v <= 0.0) {
            ++clamped;
            return min_positive;
        }
        return v;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";

    // Axes and ticks.
    svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\""
        << kWidth - kMarginRight << "\" y2=\"" << kHeight - kMarginBottom
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kHeight - kMarginBottom << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tx = x_min + (x_max - x_min) * i / 5.0;
        svg << "<text x=\"" << map.x(tx) << "\" y=\"" << kHeight - kMarginBottom + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt(tx) << "</text>\n";
        double ty;
        if (options.log_y) {
            ty = std::pow(10.0, std::log10(y_min) +
                                    (std::log10(y_max) - std::log10(y_min)) * i / 5.0);
        } else {
            ty = y_min + (y_max - y_min) * i / 5.0;
        }
        svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << map.y(ty) + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << fmt(ty) << "</text>\n";
    }
    const std::string x_label =
        options.axis == PlotAxis::kUpdates ? "controller updates" : "plant steps";
    const std::string y_label = options.metric == PlotMetric::kGradNormSq
                                    ? "squared gradient norm"
                                    : "optimality gap";
    svg << "<text x=\"" << (kMarginLeft + kWidth - kMarginRight) / 2 << "\" y=\""
        << kHeight - 15 << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    svg << "<text x=\"20\" y=\"" << (kMarginTop + kHeight - kMarginBottom) / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << (kMarginTop + kHeight - kMarginBottom) / 2 << ")\">" << y_label << "</text>\n";
    if (!options.title.empty()) {
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" font-size=\"16\" "
            << "text-anchor=\"middle\">" << options.title << "</text>\n";
    }

    // Envelopes first so the mean curves draw on top.
    for (std::size_t m = 0; m < series.size(); ++m) {
        if (!envelopes) continue;
        const auto& s = series[m];
        svg << "<polygon fill=\"" << kPalette[m % 8] << "\" fill-opacity=\"0.15\" "
            << "stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.update_index.size(); ++i) {
            svg << fmt(map.x(x_of(s, i))) << ',' << fmt(map.y(clamp_value(s.lo[i]))) << ' ';
        }
        for (std::size_t i = s.update_index.size(); i-- > 0;) {
            svg << fmt(map.x(x_of(s, i))) << ',' << fmt(map.y(clamp_value(s.hi[i])));
            if (i != 0) svg << ' ';
        }
        svg << "\"/>\n";
    }
    for (std::size_t m = 0; m < series.size(); ++m) {
        const auto& s = series[m];
        svg << "<polyline fill=\"none\" stroke=\"" << kPalette[m % 8]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.update_index.size(); ++i) {
            svg << fmt(map.x(x_of(s, i))) << ',' << fmt(map.y(clamp_value(s.mean[i])));
            if (i + 1 != s.update_index.size()) svg << ' ';
        }
        svg << "\"/>\n";
        const double ly = kMarginTop + 18.0 * static_cast<double>(m);
        svg << "<line x1=\"" << kWidth - kMarginRight + 10 << "\" y1=\"" << ly << "\" x2=\""
            << kWidth - kMarginRight + 34 << "\" y2=\"" << ly << "\" stroke=\""
            << kPalette[m % 8] << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << kWidth - kMarginRight + 40 << "\" y=\"" << ly + 4
            << "\" font-size=\"12\">" << s.method << "</text>\n";
    }

    svg << "<desc>log_y=" << (options.log_y ? 1 : 0) << " clamped=" << clamped
        << " min_positive=" << fmt(min_positive) << "</desc>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const AggregateResult& result, const std::string& path,
               const PlotOptions& options) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("emit_plot: cannot open " + path);
    file << plot_string(result, options);
    if (!file) throw IoError("emit_plot: write failed for " + path);
}

} // namespace zofo
