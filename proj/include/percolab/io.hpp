#pragma once

#include <string>
#include <vector>

#include "percolab/estimator.hpp"
#include "percolab/manifest.hpp"
#include "percolab/stats.hpp"

namespace percolab {

/// Write via a temp file and rename so failures never leave partial output.
void write_text_atomic(const std::string& path, const std::string& content);

std::string records_to_csv(const ExperimentManifest& manifest,
                           const std::vector<EstimateRecord>& records);
std::string records_to_json(const ExperimentManifest& manifest,
                            const std::vector<EstimateRecord>& records);

std::string ratio_series_to_csv(const ExperimentManifest& manifest,
                                const std::vector<RatioSeries>& series);
std::string ratio_series_to_json(const ExperimentManifest& manifest,
                                 const std::vector<RatioSeries>& series);

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;
};

struct PlotSeries {
    std::string label;
    std::vector<PlotPoint> points;
};

/// Minimal log-log scatter plot with CI whiskers and optional fitted lines
/// y = amplitude * x^slope. Deterministic output.
std::string svg_loglog_plot(const std::string& title, const std::vector<PlotSeries>& series,
                            const std::vector<std::pair<double, double>>& fit_lines = {});

std::string format_double(double v);

}  // namespace percolab
