#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace percolab {

enum class Ternary : uint8_t { False = 0, True = 1, Unknown = 2 };

inline Ternary to_ternary(bool b) { return b ? Ternary::True : Ternary::False; }

/// Wilson score interval for a binomial proportion.
struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};
WilsonInterval wilson(uint64_t hits, uint64_t trials, double z = 1.959963984540054);

/// One Monte Carlo estimate. Unknown-returning predicates land in `unknowns`,
/// giving the bracket [hits/trials, (hits+unknowns)/trials] around the point
/// estimate hits/trials.
struct EstimateRecord {
    std::string experiment;
    std::string event;
    std::string sigma;    // empty when not an arm event
    int64_t n = 0;
    int64_t m = 0;
    double p = -1.0;      // -1 = not applicable
    double q = -1.0;
    uint64_t trials = 0;
    uint64_t hits = 0;
    uint64_t unknowns = 0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    uint64_t seed = 0;

    double estimate() const { return trials ? static_cast<double>(hits) / trials : 0.0; }
    double bracket_lo() const { return estimate(); }
    double bracket_hi() const {
        return trials ? static_cast<double>(hits + unknowns) / trials : 0.0;
    }
    double unknown_rate() const {
        return trials ? static_cast<double>(unknowns) / trials : 0.0;
    }
    void finalize_ci(double z = 1.959963984540054) {
        auto w = wilson(hits, trials, z);
        ci_lo = w.lo;
        ci_hi = w.hi;
    }
    /// Standard error of the proportion.
    double stderr_est() const;
};

/// Weighted least squares of log(estimate) against log(n).
/// Weights are inverse variances of the log-estimates.
struct PowerLawFit {
    double exponent = 0.0;   // estimate ~ amplitude * n^(-exponent)
    double amplitude = 0.0;
    double exponent_stderr = 0.0;
    size_t points_used = 0;
    size_t points_dropped = 0;  // zero estimates are dropped with a warning flag
};

struct FitPoint {
    double n = 0.0;
    double estimate = 0.0;
    double stderr_est = 0.0;  // absolute standard error of the estimate
};

PowerLawFit fit_power_law(const std::vector<FitPoint>& series);

/// Straight-line WLS y = a + b x with per-point standard deviations.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
LineFit fit_line_weighted(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sd);

}  // namespace percolab
