// percolab: invasion and critical bond percolation laboratory on Z^2.
//
// Subcommands estimate arm probabilities in critical percolation and in the
// invasion cluster, measure correlation lengths and near-critical parameters,
// and run the built-in verification suites. Every output embeds its manifest
// and is byte-identical under a fixed manifest and seed, whatever --threads.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "percolab/estimator.hpp"
#include "percolab/io.hpp"
#include "percolab/manifest.hpp"
#include "percolab/verify.hpp"

using namespace percolab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 2;
constexpr int kExitInconclusive = 3;

struct CliState {
    ExperimentManifest manifest;
    int threads = 0;
    bool inconclusive = false;
    std::vector<int32_t> ann_option;  // --ann m n
    std::string config_path;
};

void write_outputs(const CliState& st, const std::vector<EstimateRecord>& records,
                   const std::vector<RatioSeries>& series,
                   const std::vector<PlotSeries>& plots,
                   const std::vector<std::pair<double, double>>& fit_lines) {
    const ExperimentManifest& m = st.manifest;
    std::string csv = series.empty() ? records_to_csv(m, records) : ratio_series_to_csv(m, series);
    std::string json =
        series.empty() ? records_to_json(m, records) : ratio_series_to_json(m, series);
    std::string csv_path = m.out_csv.empty() ? m.experiment + ".csv" : m.out_csv;
    std::string json_path = m.out_json.empty() ? m.experiment + ".json" : m.out_json;
    write_text_atomic(csv_path, csv);
    write_text_atomic(json_path, json);
    if (!m.out_svg.empty()) write_text_atomic(m.out_svg, svg_loglog_plot(m.experiment, plots, fit_lines));
}

PlotSeries plot_from_records(const std::string& label, const std::vector<EstimateRecord>& recs) {
    PlotSeries s;
    s.label = label;
    for (const auto& r : recs)
        s.points.push_back({static_cast<double>(r.n), r.estimate(), r.ci_lo, r.ci_hi});
    return s;
}

PlotSeries plot_from_ratio(const RatioSeries& series) {
    PlotSeries s;
    s.label = series.experiment + " " + series.sigma;
    for (const auto& pt : series.points)
        s.points.push_back({static_cast<double>(pt.n), pt.ratio, pt.ci_lo, pt.ci_hi});
    return s;
}

void add_common(CLI::App* cmd, CliState& st) {
    auto& m = st.manifest;
    cmd->add_option("--config", st.config_path,
                    "manifest file (flat TOML or JSON); flags override its values");
    cmd->add_option("--seed", m.seed, "experiment seed, recorded in every output");
    cmd->add_option("--trials", m.trials, "Monte Carlo trials");
    cmd->add_option("--trials-critical", m.trials_critical,
                    "trials for critical-side denominators (default: --trials)");
    cmd->add_option("--threads", st.threads, "worker pool size (0 = hardware)");
    cmd->add_option("--out-csv", m.out_csv, "CSV output path");
    cmd->add_option("--out-json", m.out_json, "JSON output path");
    cmd->add_option("--out-svg", m.out_svg, "optional SVG log-log plot");
}

int run_command(CliState& st, const std::string& name) {
    auto& m = st.manifest;
    m.experiment = name;
    Seed seed{m.seed};
    const int threads = st.threads;

    if (name == "arm-prob") {
        ColorSequence sigma = ColorSequence::parse(m.sigma);
        auto rec = arm_probability(sigma, m.n, m.m, m.p, m.q, m.trials, seed, threads);
        write_outputs(st, {rec}, {}, {plot_from_records(m.sigma, {rec})}, {});
        std::printf("P(A_%s(%d,%d)) = %.6g  [%.6g, %.6g]  trials=%llu\n", m.sigma.c_str(),
                    static_cast<int>(rec.m), m.n, rec.estimate(), rec.ci_lo, rec.ci_hi,
                    static_cast<unsigned long long>(rec.trials));
        return kExitOk;
    }
    if (name == "invasion-arm-prob") {
        ColorSequence sigma = ColorSequence::parse(m.sigma);
        CertifyOptions certify;
        certify.horizon_multiplier = m.horizon_multiplier;
        if (m.horizon) certify.horizon_multiplier = std::max(1, m.horizon / m.n);
        auto recs = invasion_arm_probabilities({sigma}, m.n, m.trials, seed, certify, threads);
        write_outputs(st, recs, {}, {plot_from_records(m.sigma, recs)}, {});
        const auto& r = recs[0];
        std::printf("P(A_%s(%d) in invasion) = %.6g  bracket [%.6g, %.6g]  unknown-rate %.4f\n",
                    m.sigma.c_str(), m.n, r.estimate(), r.bracket_lo(), r.bracket_hi(),
                    r.unknown_rate());
        return kExitOk;
    }
    if (name == "correlation-length") {
        auto res = correlation_length(m.p, m.eps, m.trials, m.n, seed, {m.slack}, threads);
        write_outputs(st, res.probes, {}, {plot_from_records("square crossing", res.probes)},
                      {});
        if (res.exceeded)
            std::printf("L(%.4f, %.3f) exceeds n_max = %d\n", m.p, m.eps, m.n);
        else
            std::printf("L(%.4f, %.3f) = %d\n", m.p, m.eps, res.length);
        st.inconclusive = res.inconclusive;
        return res.inconclusive ? kExitInconclusive : kExitOk;
    }
    if (name == "p-n") {
        auto res = p_hat(m.n, m.eps, m.trials, m.tolerance, seed, {m.slack}, threads);
        EstimateRecord rec;
        rec.experiment = "p-n";
        rec.event = "p_hat";
        rec.n = m.n;
        rec.p = res.mid();
        rec.ci_lo = res.lo;
        rec.ci_hi = res.hi;
        rec.trials = m.trials;
        rec.seed = m.seed;
        write_outputs(st, {rec}, {}, {}, {});
        std::printf("p_hat(%d) in [%.6f, %.6f]%s\n", m.n, res.lo, res.hi,
                    res.inconclusive ? "  (inconclusive probes forced)" : "");
        st.inconclusive = res.inconclusive;
        return res.inconclusive ? kExitInconclusive : kExitOk;
    }
    if (name == "scaling-check") {
        auto res = scaling_relation_check(m.scales, m.trials, m.critical_trials(), m.eps,
                                          m.tolerance, seed, threads);
        std::vector<EstimateRecord> recs;
        PlotSeries plot;
        plot.label = "n^2 P_cr(A_OCOC(n)) (p_n - 1/2)";
        for (const auto& pt : res.points) {
            EstimateRecord rec = pt.four_arm;
            rec.experiment = "scaling-check";
            rec.event = "n2*four_arm*(p_hat-1/2)";
            rec.p = pt.phat.mid();
            rec.ci_lo = pt.ci_lo;
            rec.ci_hi = pt.ci_hi;
            recs.push_back(rec);
            plot.points.push_back({static_cast<double>(pt.n), pt.product, pt.ci_lo, pt.ci_hi});
            std::printf("n=%3d  p_hat=%.5f  P(OCOC)=%.5g  product=%.4f\n", pt.n, pt.phat.mid(),
                        pt.four_arm.estimate(), pt.product);
        }
        write_outputs(st, recs, {}, {plot}, {});
        std::printf("max/min = %.3f (tolerance %.1f)\n", res.max_over_min, m.ratio_tolerance);
        return res.max_over_min <= m.ratio_tolerance ? kExitOk : kExitInconclusive;
    }
    if (name == "five-arm") {
        auto res = five_arm_exponent(m.scales, m.trials, seed, threads);
        write_outputs(st, res.series, {}, {plot_from_records("P_cr(A_OCOCC(n))", res.series)},
                      {{-res.fit.exponent, res.fit.amplitude}});
        std::printf("five-arm exponent = %.4f +- %.4f (amplitude %.4g)\n", res.fit.exponent,
                    res.fit.exponent_stderr, res.fit.amplitude);
        return kExitOk;
    }
    if (name == "thm1") {
        ColorSequence sigma = ColorSequence::parse(m.sigma);
        CertifyOptions certify;
        certify.horizon_multiplier = m.horizon_multiplier;
        auto series = theorem1_comparison(sigma, m.scales, m.trials, m.critical_trials(), seed,
                                          certify, threads);
        write_outputs(st, {}, {series}, {plot_from_ratio(series)}, {});
        std::printf("P(A_%s IPC)/P_cr(A_%s): ratios ", series.sigma.c_str(),
                    reduce(sigma).str().c_str());
        for (const auto& pt : series.points) std::printf("%.3f ", pt.ratio);
        std::printf(" max/min=%.3f ci-flatness=%.3f\n",
                    series.max_ratio() / series.min_ratio(), series.flatness_with_ci());
        return kExitOk;
    }
    if (name == "thm2") {
        CertifyOptions certify;
        certify.horizon_multiplier = m.horizon_multiplier;
        auto res = theorem2_comparison(m.k, m.scales, m.trials, m.critical_trials(), seed,
                                       certify, threads);
        write_outputs(st, {}, {res.vs_reduced, res.vs_hat},
                      {plot_from_ratio(res.vs_reduced), plot_from_ratio(res.vs_hat)}, {});
        std::printf("k=%d  slope vs reduced = %.4f +- %.4f,  slope vs all-closed = %.4f +- %.4f\n",
                    m.k, res.slope_reduced.slope, res.slope_reduced.stderr_val,
                    res.slope_hat.slope, res.slope_hat.stderr_val);
        return kExitOk;
    }
    if (name == "trace-invasion") {
        WeightField field(seed);
        InvasionState state(field);
        state.run(StoppingRule::exit_box(m.n), 16ull * m.n * m.n);
        std::string out;
        size_t frontier_proxy = 1;
        for (size_t i = 0; i < state.steps(); ++i) {
            const auto& step = state.order()[i];
            char line[192];
            std::snprintf(line, sizeof(line),
                          "{\"step\":%zu,\"edge\":[[%d,%d],[%d,%d]],\"weight\":%.17g,"
                          "\"invaded_vertices\":%zu}\n",
                          i, step.edge.a.x, step.edge.a.y, step.edge.b.x, step.edge.b.y,
                          step.weight, frontier_proxy = state.invaded_vertices().size());
            out += line;
        }
        std::string path = m.out_json.empty() ? "trace-invasion.jsonl" : m.out_json;
        write_text_atomic(path, out);
        std::printf("traced %zu steps to %s\n", state.steps(), path.c_str());
        return kExitOk;
    }
    if (name == "verify") {
        Seed vseed{m.seed};
        if (m.suite == "oracle") {
            std::vector<ColorSequence> sigmas;
            for (const char* s : {"O", "C", "OC", "OCC", "OCOC", "CC"})
                sigmas.push_back(ColorSequence::parse(s));
            auto rep = verify_oracle_agreement(sigmas, m.ann_inner, m.ann_outer, m.p, m.q,
                                               m.trials, vseed, threads);
            std::printf("oracle agreement: %llu checks, %llu disagreements -> %s\n",
                        (unsigned long long)rep.checked, (unsigned long long)rep.disagreements,
                        rep.passed() ? "OK" : "FAIL");
            return rep.passed() ? kExitOk : 1;
        }
        if (m.suite == "inv-circuit") {
            int32_t horizon = m.horizon ? m.horizon : m.horizon_multiplier * m.ann_outer;
            auto rep = verify_inv_circuit(Annulus(m.ann_inner, m.ann_outer), horizon, m.trials,
                                          vseed, threads);
            std::printf(
                "invaded-circuit equivalence: %llu samples, %llu resolved, %llu agreed, "
                "unresolved %.4f -> %s\n",
                (unsigned long long)rep.samples, (unsigned long long)rep.resolved,
                (unsigned long long)rep.agreed, rep.unresolved_rate(),
                rep.passed() ? "OK" : "FAIL");
            return rep.passed() ? kExitOk : 1;
        }
        if (m.suite == "duality") {
            auto rep = verify_duality(m.n, m.trials, vseed, threads);
            std::printf("rectangle duality: %llu samples, %llu violations -> %s\n",
                        (unsigned long long)rep.checked, (unsigned long long)rep.violations,
                        rep.passed() ? "OK" : "FAIL");
            return rep.passed() ? kExitOk : 1;
        }
        if (m.suite == "sigma-reduction") {
            CertifyOptions certify;
            certify.horizon_multiplier = m.horizon_multiplier;
            auto rep = verify_sigma_reduction(ColorSequence::parse(m.sigma), m.n, m.trials,
                                              64 * m.trials, vseed, certify, threads);
            std::printf(
                "sigma reduction: %llu runs, %llu qualifying, %llu violations, %llu outlet-order "
                "violations -> %s\n",
                (unsigned long long)rep.runs, (unsigned long long)rep.qualifying,
                (unsigned long long)rep.violations, (unsigned long long)rep.outlet_order_violations,
                rep.passed(m.trials) ? "OK" : "FAIL");
            return rep.passed(m.trials) ? kExitOk : 1;
        }
        std::fprintf(stderr, "unknown verify suite '%s'\n", m.suite.c_str());
        return kExitBadConfig;
    }
    std::fprintf(stderr, "unknown command '%s'\n", name.c_str());
    return kExitBadConfig;
}

}  // namespace

int main(int argc, char** argv) {
    CliState st;

    // --config loads the manifest first; explicit flags then override it
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                st.manifest = ExperimentManifest::from_file(argv[i + 1]);
            } catch (const std::exception& ex) {
                std::fprintf(stderr, "error: %s\n", ex.what());
                return kExitBadConfig;
            }
        }
    }

    CLI::App app{"invasion and critical percolation laboratory"};
    app.require_subcommand(1);
    auto& m = st.manifest;

    CLI::App* arm = app.add_subcommand("arm-prob", "critical arm probability P(A_sigma(m,n))");
    arm->add_option("--sigma", m.sigma, "color sequence over {O,C}, e.g. OCC");
    arm->add_option("--n", m.n, "outer radius");
    arm->add_option("--m", m.m, "inner radius (raised to |sigma| when smaller)");
    arm->add_option("--p", m.p, "open-arm parameter");
    arm->add_option("--q", m.q, "closed-arm parameter");
    add_common(arm, st);

    CLI::App* inv = app.add_subcommand("invasion-arm-prob",
                                       "arm probability in the certified invasion cluster");
    inv->add_option("--sigma", m.sigma, "color sequence over {O,C}");
    inv->add_option("--n", m.n, "window radius");
    inv->add_option("--horizon", m.horizon, "explicit horizon radius (default multiplier*n)");
    inv->add_option("--horizon-multiplier", m.horizon_multiplier, "horizon/window ratio");
    add_common(inv, st);

    CLI::App* corr = app.add_subcommand("correlation-length", "L(p, eps) by dyadic probing");
    corr->add_option("--p", m.p, "percolation parameter, p > 1/2");
    corr->add_option("--eps", m.eps, "crossing-probability threshold offset");
    corr->add_option("--slack", m.slack, "CI slack for the threshold decision");
    corr->add_option("--n", m.n, "largest probed scale");
    add_common(corr, st);

    CLI::App* pn = app.add_subcommand("p-n", "smallest p with L(p) <= n, by bisection");
    pn->add_option("--n", m.n, "target scale");
    pn->add_option("--eps", m.eps, "threshold offset used by L");
    pn->add_option("--slack", m.slack, "CI slack");
    pn->add_option("--tolerance", m.tolerance, "bisection interval width");
    add_common(pn, st);

    CLI::App* sc = app.add_subcommand("scaling-check",
                                      "n^2 P_cr(A_OCOC(n)) (p_n - 1/2) across scales");
    sc->add_option("--scales", m.scales, "scales n");
    sc->add_option("--eps", m.eps, "threshold offset used by L");
    sc->add_option("--tolerance", m.tolerance, "p_n bisection width");
    sc->add_option("--ratio-tolerance", m.ratio_tolerance, "allowed max/min of the product");
    add_common(sc, st);

    CLI::App* fa = app.add_subcommand("five-arm", "five-arm exponent fit for OCOCC");
    fa->add_option("--scales", m.scales, "scales n");
    add_common(fa, st);

    CLI::App* t1 = app.add_subcommand("thm1",
                                      "invasion vs critical reduced-sequence ratio series");
    t1->add_option("--sigma", m.sigma, "sequence with at least two open entries");
    t1->add_option("--scales", m.scales, "scales n");
    t1->add_option("--horizon-multiplier", m.horizon_multiplier, "horizon/window ratio");
    add_common(t1, st);

    CLI::App* t2 = app.add_subcommand("thm2", "sigma_k separation: ratio series and slopes");
    t2->add_option("--k", m.k, "number of closed entries in sigma_k");
    t2->add_option("--scales", m.scales, "scales n");
    t2->add_option("--horizon-multiplier", m.horizon_multiplier, "horizon/window ratio");
    add_common(t2, st);

    CLI::App* tr = app.add_subcommand("trace-invasion", "dump one invasion as JSON lines");
    tr->add_option("--n", m.n, "stop after exiting B(n)");
    add_common(tr, st);

    CLI::App* ver = app.add_subcommand("verify", "exactness and equivalence suites");
    ver->add_option("--suite", m.suite,
                    "oracle | inv-circuit | duality | sigma-reduction");
    ver->add_option("--sigma", m.sigma, "sequence for sigma-reduction");
    ver->add_option("--n", m.n, "scale (window radius / rectangle bound)");
    ver->add_option("--ann", st.ann_option, "annulus radii m n")->expected(2);
    ver->add_option("--horizon", m.horizon, "horizon radius for inv-circuit");
    ver->add_option("--horizon-multiplier", m.horizon_multiplier, "horizon/window ratio");
    ver->add_option("--p", m.p, "open parameter");
    ver->add_option("--q", m.q, "closed parameter");
    add_common(ver, st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitBadConfig;
    }

    if (st.ann_option.size() == 2) {
        st.manifest.ann_inner = st.ann_option[0];
        st.manifest.ann_outer = st.ann_option[1];
    }

    try {
        for (CLI::App* sub : app.get_subcommands()) return run_command(st, sub->get_name());
        return kExitBadConfig;
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitBadConfig;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
}
