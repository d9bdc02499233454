#include "percolab/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace percolab {

WilsonInterval wilson(uint64_t hits, uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = phat + z2 / (2.0 * nn);
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    double lo = (centre - half) / denom;
    double hi = (centre + half) / denom;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

double EstimateRecord::stderr_est() const {
    if (trials == 0) return 0.0;
    double p_ = estimate();
    return std::sqrt(p_ * (1.0 - p_) / static_cast<double>(trials));
}

LineFit fit_line_weighted(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sd) {
    if (x.size() != y.size() || x.size() != sd.size() || x.size() < 2)
        throw std::invalid_argument("fit_line_weighted: need >= 2 matched points");
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double s = sd[i] > 0 ? sd[i] : 1e-12;
        double w = 1.0 / (s * s);
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
    }
    double delta = sw * swxx - swx * swx;
    if (delta <= 0) throw std::invalid_argument("fit_line_weighted: degenerate abscissae");
    LineFit f;
    f.slope = (sw * swxy - swx * swy) / delta;
    f.intercept = (swxx * swy - swx * swxy) / delta;
    f.slope_stderr = std::sqrt(sw / delta);
    return f;
}

PowerLawFit fit_power_law(const std::vector<FitPoint>& series) {
    std::vector<double> x, y, sd;
    PowerLawFit out;
    for (const auto& pt : series) {
        if (pt.estimate <= 0.0) {
            ++out.points_dropped;
            continue;
        }
        x.push_back(std::log(pt.n));
        y.push_back(std::log(pt.estimate));
        // delta method: sd(log p) = sd(p)/p; exact inputs get a tiny floor
        sd.push_back(pt.stderr_est > 0 ? pt.stderr_est / pt.estimate : 1e-12);
    }
    if (x.size() < 3) throw std::invalid_argument("fit_power_law: need >= 3 positive scales");
    LineFit f = fit_line_weighted(x, y, sd);
    out.exponent = -f.slope;
    out.amplitude = std::exp(f.intercept);
    out.exponent_stderr = f.slope_stderr;
    out.points_used = x.size();
    return out;
}

}  // namespace percolab
