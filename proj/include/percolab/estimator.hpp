#pragma once

#include <functional>
#include <string>
#include <vector>

#include "percolab/arms.hpp"
#include "percolab/color_sequence.hpp"
#include "percolab/invasion.hpp"
#include "percolab/percolation.hpp"
#include "percolab/stats.hpp"
#include "percolab/weights.hpp"

namespace percolab {

/// Frequency estimate of an arbitrary seeded event. Unknown verdicts land in
/// the unknown bucket and widen the reported bracket.
EstimateRecord estimate_event(const std::string& name,
                              const std::function<Ternary(uint64_t)>& pred, uint64_t trials,
                              Seed seed, int threads = 1);

/// P(A_sigma(m,n)) under Bernoulli weights, open arms at p and closed at q.
EstimateRecord arm_probability(const ColorSequence& sigma, int32_t n, int32_t m, double p,
                               double q, uint64_t trials, Seed seed, int threads = 1);

/// P(A_sigma(n)) in the invasion, through certified statuses on B(n).
/// Several sigmas are evaluated on the same certified runs.
std::vector<EstimateRecord> invasion_arm_probabilities(const std::vector<ColorSequence>& sigmas,
                                                       int32_t n, uint64_t trials, Seed seed,
                                                       const CertifyOptions& certify = {},
                                                       int threads = 1);

struct RatioPoint {
    int32_t n = 0;
    EstimateRecord numerator;
    EstimateRecord denominator;
    double ratio = 0.0;
    double ci_lo = 0.0;  // conservative: bracket/Wilson bounds propagated
    double ci_hi = 0.0;
};

struct RatioSeries {
    std::string experiment;
    std::string sigma;
    std::vector<RatioPoint> points;

    double max_ratio() const;
    double min_ratio() const;
    /// Flatness accounting for CIs: smallest max/min over per-point values
    /// drawn from the intervals, i.e. (max of lower bounds)/(min of upper).
    double flatness_with_ci() const;
};

RatioPoint make_ratio_point(int32_t n, const EstimateRecord& num, const EstimateRecord& den);

/// Theorem-style comparison: P(A_sigma(n) in invasion) / P_cr(A_reduced(n)),
/// numerator and denominator on independent seed streams.
RatioSeries invasion_vs_critical(const ColorSequence& sigma, const ColorSequence& critical_sigma,
                                 const std::vector<int32_t>& scales, uint64_t trials_invasion,
                                 uint64_t trials_critical, Seed seed,
                                 const CertifyOptions& certify = {}, int threads = 1);

RatioSeries theorem1_comparison(const ColorSequence& sigma, const std::vector<int32_t>& scales,
                                uint64_t trials_invasion, uint64_t trials_critical, Seed seed,
                                const CertifyOptions& certify = {}, int threads = 1);

struct SlopeSummary {
    double slope = 0.0;
    double stderr_val = 0.0;
    bool separated_from_zero(double k = 2.0) const {
        return std::abs(slope) > k * stderr_val;
    }
};

struct Theorem2Result {
    int k = 1;
    RatioSeries vs_reduced;  // expected to grow with n
    RatioSeries vs_hat;      // expected to decay with n
    SlopeSummary slope_reduced;
    SlopeSummary slope_hat;
};

Theorem2Result theorem2_comparison(int k, const std::vector<int32_t>& scales,
                                   uint64_t trials_invasion, uint64_t trials_critical, Seed seed,
                                   const CertifyOptions& certify = {}, int threads = 1);

SlopeSummary ratio_log_slope(const RatioSeries& series);

struct ScalingPoint {
    int32_t n = 0;
    PHatResult phat;
    EstimateRecord four_arm;
    double product = 0.0;  // n^2 * P_cr(A_OCOC(n)) * (p_hat - 1/2)
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct ScalingCheckResult {
    std::vector<ScalingPoint> points;
    double max_over_min = 0.0;
};

ScalingCheckResult scaling_relation_check(const std::vector<int32_t>& scales,
                                          uint64_t trials_arm, uint64_t trials_crossing,
                                          double eps, double phat_tolerance, Seed seed,
                                          int threads = 1);

struct QuasiMultResult {
    EstimateRecord whole;   // A_sigma(k, n)
    EstimateRecord inner;   // A_sigma(k, m)
    EstimateRecord outer;   // A_sigma(m, n)
    double ratio = 0.0;     // whole / (inner * outer)
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

/// Quasi-multiplicativity ratio with propagated CI; scales must satisfy
/// |sigma| <= k < m < n, and n <= L(p) when p > 1/2 (checked by measurement).
QuasiMultResult quasimultiplicativity_check(const ColorSequence& sigma, int32_t k, int32_t m,
                                            int32_t n, double p, uint64_t trials, Seed seed,
                                            double eps = 0.02, int threads = 1);

struct FiveArmResult {
    std::vector<EstimateRecord> series;
    PowerLawFit fit;
};

/// P_cr(A_(O,C,O,C,C)(n)) over the given scales plus its power-law fit.
FiveArmResult five_arm_exponent(const std::vector<int32_t>& scales, uint64_t trials, Seed seed,
                                int threads = 1);

}  // namespace percolab
