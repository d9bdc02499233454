#include "percolab/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "percolab/parallel.hpp"

namespace percolab {

EstimateRecord estimate_event(const std::string& name,
                              const std::function<Ternary(uint64_t)>& pred, uint64_t trials,
                              Seed seed, int threads) {
    if (trials < 1) throw std::invalid_argument("estimate_event: trials >= 1");
    TrialTally tally = run_trials(trials, threads, pred);
    EstimateRecord rec;
    rec.experiment = "event";
    rec.event = name;
    rec.trials = trials;
    rec.hits = tally.hits;
    rec.unknowns = tally.unknowns;
    rec.seed = seed.value;
    rec.finalize_ci();
    return rec;
}

EstimateRecord arm_probability(const ColorSequence& sigma, int32_t n, int32_t m, double p,
                               double q, uint64_t trials, Seed seed, int threads) {
    if (m < 1 || m >= n) throw std::invalid_argument("arm_probability: need 1 <= m < n");
    ArmEventSpec spec{sigma, m, n, p, q};
    const int32_t inner = spec.inner_effective();
    const AnnulusGeometry& g = AnnulusGeometry::get(inner, n);

    TrialTally tally = run_trials(trials, threads, [&](uint64_t t) {
        WeightField field(seed.derive(t));
        AnnulusSample sample;
        sample.fill(g, field);
        return to_ternary(detect_arms_sample(sample, sigma, p, q));
    });

    EstimateRecord rec;
    rec.experiment = "arm-prob";
    rec.event = "A_sigma";
    rec.sigma = sigma.str();
    rec.n = n;
    rec.m = inner;
    rec.p = p;
    rec.q = q;
    rec.trials = trials;
    rec.hits = tally.hits;
    rec.seed = seed.value;
    rec.finalize_ci();
    return rec;
}

std::vector<EstimateRecord> invasion_arm_probabilities(const std::vector<ColorSequence>& sigmas,
                                                       int32_t n, uint64_t trials, Seed seed,
                                                       const CertifyOptions& certify,
                                                       int threads) {
    if (sigmas.empty()) return {};
    auto tallies = run_trials_multi(
        trials, threads, sigmas.size(), [&](uint64_t t, std::vector<Ternary>& out) {
            WeightField field(seed.derive(t));
            CertifiedRun run = run_certified(field, n, certify);
            for (size_t s = 0; s < sigmas.size(); ++s)
                out[s] = detect_arms_invasion(run.statuses, sigmas[s], 1, n);
        });

    std::vector<EstimateRecord> records;
    for (size_t s = 0; s < sigmas.size(); ++s) {
        EstimateRecord rec;
        rec.experiment = "invasion-arm-prob";
        rec.event = "A_sigma_invasion";
        rec.sigma = sigmas[s].str();
        rec.n = n;
        rec.m = static_cast<int32_t>(sigmas[s].size());
        rec.trials = trials;
        rec.hits = tallies[s].hits;
        rec.unknowns = tallies[s].unknowns;
        rec.seed = seed.value;
        rec.finalize_ci();
        records.push_back(std::move(rec));
    }
    return records;
}

double RatioSeries::max_ratio() const {
    double v = 0.0;
    for (const auto& pt : points) v = std::max(v, pt.ratio);
    return v;
}

double RatioSeries::min_ratio() const {
    double v = points.empty() ? 0.0 : points.front().ratio;
    for (const auto& pt : points) v = std::min(v, pt.ratio);
    return v;
}

double RatioSeries::flatness_with_ci() const {
    if (points.empty()) return 0.0;
    double max_lo = 0.0, min_hi = std::numeric_limits<double>::infinity();
    for (const auto& pt : points) {
        max_lo = std::max(max_lo, pt.ci_lo);
        min_hi = std::min(min_hi, pt.ci_hi);
    }
    if (min_hi <= 0.0) return std::numeric_limits<double>::infinity();
    return max_lo / min_hi;
}

RatioPoint make_ratio_point(int32_t n, const EstimateRecord& num, const EstimateRecord& den) {
    RatioPoint pt;
    pt.n = n;
    pt.numerator = num;
    pt.denominator = den;
    const double num_est = num.estimate();
    const double den_est = den.estimate();
    pt.ratio = den_est > 0 ? num_est / den_est : 0.0;
    // conservative: unknowns widen the numerator to its bracket before Wilson
    auto wide = wilson(num.hits + num.unknowns, num.trials);
    auto narrow = wilson(num.hits, num.trials);
    pt.ci_lo = den.ci_hi > 0 ? narrow.lo / den.ci_hi : 0.0;
    pt.ci_hi = den.ci_lo > 0 ? wide.hi / den.ci_lo : std::numeric_limits<double>::infinity();
    return pt;
}

RatioSeries invasion_vs_critical(const ColorSequence& sigma, const ColorSequence& critical_sigma,
                                 const std::vector<int32_t>& scales, uint64_t trials_invasion,
                                 uint64_t trials_critical, Seed seed,
                                 const CertifyOptions& certify, int threads) {
    RatioSeries series;
    series.experiment = "invasion-vs-critical";
    series.sigma = sigma.str();
    Seed num_seed = seed.stream("invasion-numerator");
    Seed den_seed = seed.stream("critical-denominator");
    for (int32_t n : scales) {
        auto inv = invasion_arm_probabilities({sigma}, n, trials_invasion, num_seed.derive(n),
                                              certify, threads);
        EstimateRecord den = arm_probability(critical_sigma, n, 1, 0.5, 0.5, trials_critical,
                                             den_seed.derive(n), threads);
        series.points.push_back(make_ratio_point(n, inv[0], den));
    }
    return series;
}

RatioSeries theorem1_comparison(const ColorSequence& sigma, const std::vector<int32_t>& scales,
                                uint64_t trials_invasion, uint64_t trials_critical, Seed seed,
                                const CertifyOptions& certify, int threads) {
    if (sigma.count_open() < 2)
        throw std::invalid_argument("theorem1_comparison: need at least two open entries");
    RatioSeries series = invasion_vs_critical(sigma, reduce(sigma), scales, trials_invasion,
                                              trials_critical, seed, certify, threads);
    series.experiment = "thm1";
    return series;
}

SlopeSummary ratio_log_slope(const RatioSeries& series) {
    std::vector<double> x, y, sd;
    for (const auto& pt : series.points) {
        if (pt.ratio <= 0 || pt.numerator.estimate() <= 0 || pt.denominator.estimate() <= 0)
            continue;
        x.push_back(std::log(static_cast<double>(pt.n)));
        y.push_back(std::log(pt.ratio));
        double rn = pt.numerator.stderr_est() / pt.numerator.estimate();
        double rd = pt.denominator.stderr_est() / pt.denominator.estimate();
        sd.push_back(std::sqrt(rn * rn + rd * rd));
    }
    if (x.size() < 2) throw std::invalid_argument("ratio_log_slope: not enough positive points");
    LineFit f = fit_line_weighted(x, y, sd);
    return {f.slope, f.slope_stderr};
}

Theorem2Result theorem2_comparison(int k, const std::vector<int32_t>& scales,
                                   uint64_t trials_invasion, uint64_t trials_critical, Seed seed,
                                   const CertifyOptions& certify, int threads) {
    if (k < 1) throw std::invalid_argument("theorem2_comparison: k >= 1");
    Theorem2Result out;
    out.k = k;
    ColorSequence sk = sigma_k(static_cast<size_t>(k));
    ColorSequence sk_reduced = reduce(sk);
    ColorSequence sk_hat = sigma_hat_k(static_cast<size_t>(k));

    Seed num_seed = seed.stream("thm2-invasion");
    Seed den_seed = seed.stream("thm2-critical");

    out.vs_reduced.experiment = "thm2-vs-reduced";
    out.vs_reduced.sigma = sk.str();
    out.vs_hat.experiment = "thm2-vs-hat";
    out.vs_hat.sigma = sk.str();

    for (int32_t n : scales) {
        auto inv = invasion_arm_probabilities({sk}, n, trials_invasion, num_seed.derive(n),
                                              certify, threads);
        EstimateRecord den_red = arm_probability(sk_reduced, n, 1, 0.5, 0.5, trials_critical,
                                                 den_seed.derive(2 * n), threads);
        EstimateRecord den_hat = arm_probability(sk_hat, n, 1, 0.5, 0.5, trials_critical,
                                                 den_seed.derive(2 * n + 1), threads);
        out.vs_reduced.points.push_back(make_ratio_point(n, inv[0], den_red));
        out.vs_hat.points.push_back(make_ratio_point(n, inv[0], den_hat));
    }
    out.slope_reduced = ratio_log_slope(out.vs_reduced);
    out.slope_hat = ratio_log_slope(out.vs_hat);
    return out;
}

ScalingCheckResult scaling_relation_check(const std::vector<int32_t>& scales,
                                          uint64_t trials_arm, uint64_t trials_crossing,
                                          double eps, double phat_tolerance, Seed seed,
                                          int threads) {
    ScalingCheckResult out;
    ColorSequence tau = ColorSequence::parse("OCOC");
    Seed arm_seed = seed.stream("scaling-arm");
    Seed phat_seed = seed.stream("scaling-phat");
    for (int32_t n : scales) {
        ScalingPoint pt;
        pt.n = n;
        pt.phat = p_hat(n, eps, trials_crossing, phat_tolerance, phat_seed.derive(n), {},
                        threads);
        pt.four_arm = arm_probability(tau, n, 1, 0.5, 0.5, trials_arm, arm_seed.derive(n),
                                      threads);
        const double n2 = static_cast<double>(n) * n;
        pt.product = n2 * pt.four_arm.estimate() * (pt.phat.mid() - 0.5);
        pt.ci_lo = n2 * pt.four_arm.ci_lo * std::max(0.0, pt.phat.lo - 0.5);
        pt.ci_hi = n2 * pt.four_arm.ci_hi * (pt.phat.hi - 0.5);
        out.points.push_back(pt);
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& pt : out.points) {
        lo = std::min(lo, pt.product);
        hi = std::max(hi, pt.product);
    }
    out.max_over_min = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    return out;
}

QuasiMultResult quasimultiplicativity_check(const ColorSequence& sigma, int32_t k, int32_t m,
                                            int32_t n, double p, uint64_t trials, Seed seed,
                                            double eps, int threads) {
    if (!(static_cast<int32_t>(sigma.size()) <= k && k < m && m < n))
        throw std::invalid_argument("quasimultiplicativity_check: need |sigma| <= k < m < n");
    if (p > 0.5) {
        auto corr = correlation_length(p, eps, std::max<uint64_t>(trials / 4, 500), n,
                                       seed.stream("quasimult-L"), {}, threads);
        if (!corr.exceeded && corr.length < n)
            throw std::invalid_argument("quasimultiplicativity_check: n exceeds L(p)");
    }
    Seed s = seed.stream("quasimult");
    QuasiMultResult out;
    out.whole = arm_probability(sigma, n, k, p, p, trials, s.derive(1), threads);
    out.inner = arm_probability(sigma, m, k, p, p, trials, s.derive(2), threads);
    out.outer = arm_probability(sigma, n, m, p, p, trials, s.derive(3), threads);
    const double denom = out.inner.estimate() * out.outer.estimate();
    out.ratio = denom > 0 ? out.whole.estimate() / denom : 0.0;
    const double den_hi = out.inner.ci_hi * out.outer.ci_hi;
    const double den_lo = out.inner.ci_lo * out.outer.ci_lo;
    out.ci_lo = den_hi > 0 ? out.whole.ci_lo / den_hi : 0.0;
    out.ci_hi = den_lo > 0 ? out.whole.ci_hi / den_lo : std::numeric_limits<double>::infinity();
    return out;
}

FiveArmResult five_arm_exponent(const std::vector<int32_t>& scales, uint64_t trials, Seed seed,
                                int threads) {
    FiveArmResult out;
    ColorSequence five = ColorSequence::parse("OCOCC");
    Seed s = seed.stream("five-arm");
    std::vector<FitPoint> pts;
    for (int32_t n : scales) {
        EstimateRecord rec = arm_probability(five, n, 1, 0.5, 0.5, trials, s.derive(n), threads);
        pts.push_back({static_cast<double>(n), rec.estimate(), rec.stderr_est()});
        out.series.push_back(std::move(rec));
    }
    out.fit = fit_power_law(pts);
    return out;
}

}  // namespace percolab
