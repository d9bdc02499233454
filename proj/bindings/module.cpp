#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "percolab/estimator.hpp"
#include "percolab/io.hpp"
#include "percolab/verify.hpp"

namespace py = pybind11;
using namespace percolab;

namespace {

py::dict record_to_dict(const EstimateRecord& r) {
    py::dict d;
    d["experiment"] = r.experiment;
    d["event"] = r.event;
    d["sigma"] = r.sigma;
    d["n"] = r.n;
    d["m"] = r.m;
    d["p"] = r.p;
    d["q"] = r.q;
    d["trials"] = r.trials;
    d["hits"] = r.hits;
    d["unknowns"] = r.unknowns;
    d["estimate"] = r.estimate();
    d["bracket"] = py::make_tuple(r.bracket_lo(), r.bracket_hi());
    d["ci"] = py::make_tuple(r.ci_lo, r.ci_hi);
    d["seed"] = r.seed;
    return d;
}

py::dict ratio_series_to_dict(const RatioSeries& s) {
    py::dict d;
    d["experiment"] = s.experiment;
    d["sigma"] = s.sigma;
    py::list pts;
    for (const auto& pt : s.points) {
        py::dict p;
        p["n"] = pt.n;
        p["numerator"] = record_to_dict(pt.numerator);
        p["denominator"] = record_to_dict(pt.denominator);
        p["ratio"] = pt.ratio;
        p["ci"] = py::make_tuple(pt.ci_lo, pt.ci_hi);
        pts.append(p);
    }
    d["points"] = pts;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "invasion and critical bond percolation laboratory on Z^2";

    m.def(
        "edge_weight",
        [](uint64_t seed, int32_t ax, int32_t ay, int32_t bx, int32_t by) {
            return WeightField(Seed{seed}).weight(Edge::between({ax, ay}, {bx, by}));
        },
        py::arg("seed"), py::arg("ax"), py::arg("ay"), py::arg("bx"), py::arg("by"),
        "deterministic uniform weight of the edge between two adjacent vertices");

    m.def("reduce_sequence",
          [](const std::string& sigma) { return reduce(ColorSequence::parse(sigma)).str(); },
          py::arg("sigma"), "collapse every cyclic run of >= 2 closed entries to two");

    m.def(
        "detect_arms",
        [](uint64_t seed, const std::string& sigma, int32_t n, int32_t m, double p, double q) {
            return detect_arms(WeightField(Seed{seed}),
                               {ColorSequence::parse(sigma), m, n, p, q});
        },
        py::arg("seed"), py::arg("sigma"), py::arg("n"), py::arg("m") = 1, py::arg("p") = 0.5,
        py::arg("q") = 0.5, "exact sigma-arm detection on one sampled configuration");

    m.def(
        "brute_force_arms",
        [](uint64_t seed, const std::string& sigma, int32_t n, int32_t m, double p, double q) {
            return brute_force_arms(WeightField(Seed{seed}),
                                    {ColorSequence::parse(sigma), m, n, p, q});
        },
        py::arg("seed"), py::arg("sigma"), py::arg("n"), py::arg("m") = 1, py::arg("p") = 0.5,
        py::arg("q") = 0.5, "exhaustive tuple-enumeration oracle (tiny annuli only)");

    m.def(
        "arm_probability",
        [](const std::string& sigma, int32_t n, uint64_t trials, uint64_t seed, int32_t m,
           double p, double q, int threads) {
            return record_to_dict(arm_probability(ColorSequence::parse(sigma), n, m, p, q,
                                                  trials, Seed{seed}, threads));
        },
        py::arg("sigma"), py::arg("n"), py::arg("trials"), py::arg("seed") = 1,
        py::arg("m") = 1, py::arg("p") = 0.5, py::arg("q") = 0.5, py::arg("threads") = 1);

    m.def(
        "invasion_arm_probability",
        [](const std::string& sigma, int32_t n, uint64_t trials, uint64_t seed,
           int32_t horizon_multiplier, int threads) {
            CertifyOptions opts;
            opts.horizon_multiplier = horizon_multiplier;
            auto recs = invasion_arm_probabilities({ColorSequence::parse(sigma)}, n, trials,
                                                   Seed{seed}, opts, threads);
            return record_to_dict(recs[0]);
        },
        py::arg("sigma"), py::arg("n"), py::arg("trials"), py::arg("seed") = 1,
        py::arg("horizon_multiplier") = 8, py::arg("threads") = 1);

    m.def(
        "correlation_length",
        [](double p, double eps, uint64_t trials, int32_t n_max, uint64_t seed, int threads) {
            auto res = correlation_length(p, eps, trials, n_max, Seed{seed}, {}, threads);
            py::dict d;
            d["p"] = res.p;
            d["eps"] = res.eps;
            d["length"] = res.length;
            d["exceeded"] = res.exceeded;
            d["inconclusive"] = res.inconclusive;
            return d;
        },
        py::arg("p"), py::arg("eps") = 0.02, py::arg("trials") = 2000, py::arg("n_max") = 128,
        py::arg("seed") = 1, py::arg("threads") = 1);

    m.def(
        "p_hat",
        [](int32_t n, double eps, uint64_t trials, double tolerance, uint64_t seed,
           int threads) {
            auto res = p_hat(n, eps, trials, tolerance, Seed{seed}, {}, threads);
            py::dict d;
            d["n"] = res.n;
            d["lo"] = res.lo;
            d["hi"] = res.hi;
            d["mid"] = res.mid();
            d["inconclusive"] = res.inconclusive;
            return d;
        },
        py::arg("n"), py::arg("eps") = 0.02, py::arg("trials") = 2000,
        py::arg("tolerance") = 1e-3, py::arg("seed") = 1, py::arg("threads") = 1);

    m.def(
        "theorem1_comparison",
        [](const std::string& sigma, const std::vector<int32_t>& scales, uint64_t trials_inv,
           uint64_t trials_crit, uint64_t seed, int threads) {
            return ratio_series_to_dict(theorem1_comparison(ColorSequence::parse(sigma), scales,
                                                            trials_inv, trials_crit, Seed{seed},
                                                            {}, threads));
        },
        py::arg("sigma"), py::arg("scales"), py::arg("trials_invasion"),
        py::arg("trials_critical"), py::arg("seed") = 1, py::arg("threads") = 1);

    m.def(
        "theorem2_comparison",
        [](int k, const std::vector<int32_t>& scales, uint64_t trials_inv, uint64_t trials_crit,
           uint64_t seed, int threads) {
            auto res = theorem2_comparison(k, scales, trials_inv, trials_crit, Seed{seed}, {},
                                           threads);
            py::dict d;
            d["k"] = res.k;
            d["vs_reduced"] = ratio_series_to_dict(res.vs_reduced);
            d["vs_hat"] = ratio_series_to_dict(res.vs_hat);
            d["slope_reduced"] = py::make_tuple(res.slope_reduced.slope,
                                                res.slope_reduced.stderr_val);
            d["slope_hat"] = py::make_tuple(res.slope_hat.slope, res.slope_hat.stderr_val);
            return d;
        },
        py::arg("k"), py::arg("scales"), py::arg("trials_invasion"), py::arg("trials_critical"),
        py::arg("seed") = 1, py::arg("threads") = 1);

    m.def(
        "verify_duality",
        [](int32_t max_half_side, uint64_t trials, uint64_t seed, int threads) {
            auto rep = verify_duality(max_half_side, trials, Seed{seed}, threads);
            return py::make_tuple(rep.checked, rep.violations);
        },
        py::arg("max_half_side") = 8, py::arg("trials") = 10000, py::arg("seed") = 1,
        py::arg("threads") = 1);

    m.def(
        "verify_oracle_agreement",
        [](const std::vector<std::string>& sigmas, int32_t m, int32_t n, double p, double q,
           uint64_t trials, uint64_t seed, int threads) {
            std::vector<ColorSequence> parsed;
            for (const auto& s : sigmas) parsed.push_back(ColorSequence::parse(s));
            auto rep = verify_oracle_agreement(parsed, m, n, p, q, trials, Seed{seed}, threads);
            return py::make_tuple(rep.checked, rep.disagreements);
        },
        py::arg("sigmas"), py::arg("m") = 1, py::arg("n") = 3, py::arg("p") = 0.5,
        py::arg("q") = 0.5, py::arg("trials") = 1000, py::arg("seed") = 1,
        py::arg("threads") = 1);
}
