#include "percolab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "percolab/parallel.hpp"

namespace percolab {

namespace {

/// Open crossing of [-m,m] x [-n,n] on the primal lattice.
bool open_rect_crossing(const WeightField& field, double p, int32_t m, int32_t n, Axis axis) {
    const int32_t w = 2 * m + 1, h = 2 * n + 1;
    auto id = [&](int32_t x, int32_t y) { return (y + n) * w + (x + m); };
    detail::UnionFind uf(static_cast<size_t>(w) * h);
    for (int32_t y = -n; y <= n; ++y) {
        for (int32_t x = -m; x <= m; ++x) {
            if (x < m && field.weight(Edge::horizontal({x, y})) < p)
                uf.unite(id(x, y), id(x + 1, y));
            if (y < n && field.weight(Edge::vertical({x, y})) < p)
                uf.unite(id(x, y), id(x, y + 1));
        }
    }
    std::vector<uint8_t> flag(static_cast<size_t>(w) * h, 0);
    if (axis == Axis::LeftRight) {
        for (int32_t y = -n; y <= n; ++y) {
            int32_t ra = uf.find(id(-m, y));
            flag[ra] |= 1;
            if (flag[ra] == 3) return true;
            int32_t rb = uf.find(id(m, y));
            flag[rb] |= 2;
            if (flag[rb] == 3) return true;
        }
    } else {
        for (int32_t x = -m; x <= m; ++x) {
            int32_t ra = uf.find(id(x, n));
            flag[ra] |= 1;
            if (flag[ra] == 3) return true;
            int32_t rb = uf.find(id(x, -n));
            flag[rb] |= 2;
            if (flag[rb] == 3) return true;
        }
    }
    return false;
}

/// Closed dual crossing paired exactly with the open crossing of the other
/// axis. For a top-bottom cut the dual path runs from the face row just above
/// the rectangle to the row just below it (x in [-m, m-1], y in [-n-1, n]),
/// using only duals of rectangle edges: horizontal edges everywhere, vertical
/// edges only away from the two boundary columns. Left-right is the mirror.
bool closed_rect_crossing(const WeightField& field, double p, int32_t m, int32_t n, Axis axis) {
    auto closed = [&](Edge e) { return field.weight(e) >= p; };
    if (axis == Axis::TopBottom) {
        const int32_t w = 2 * m, h = 2 * n + 2;
        auto id = [&](int32_t fx, int32_t fy) { return (fy + n + 1) * w + (fx + m); };
        detail::UnionFind uf(static_cast<size_t>(w) * h);
        for (int32_t fy = -n - 1; fy <= n; ++fy) {
            for (int32_t fx = -m; fx < m; ++fx) {
                if (fy < n && closed(Edge::horizontal({fx, fy + 1})))
                    uf.unite(id(fx, fy), id(fx, fy + 1));
                if (fx + 1 < m && fy >= -n && fy < n && closed(Edge::vertical({fx + 1, fy})))
                    uf.unite(id(fx, fy), id(fx + 1, fy));
            }
        }
        std::vector<uint8_t> flag(static_cast<size_t>(w) * h, 0);
        for (int32_t fx = -m; fx < m; ++fx) {
            int32_t ra = uf.find(id(fx, n));
            flag[ra] |= 1;
            if (flag[ra] == 3) return true;
            int32_t rb = uf.find(id(fx, -n - 1));
            flag[rb] |= 2;
            if (flag[rb] == 3) return true;
        }
        return false;
    }
    const int32_t w = 2 * m + 2, h = 2 * n;
    auto id = [&](int32_t fx, int32_t fy) { return (fy + n) * w + (fx + m + 1); };
    detail::UnionFind uf(static_cast<size_t>(w) * h);
    for (int32_t fy = -n; fy < n; ++fy) {
        for (int32_t fx = -m - 1; fx <= m; ++fx) {
            if (fx < m && closed(Edge::vertical({fx + 1, fy})))
                uf.unite(id(fx, fy), id(fx + 1, fy));
            if (fy + 1 < n && fx >= -m && fx < m && closed(Edge::horizontal({fx, fy + 1})))
                uf.unite(id(fx, fy), id(fx, fy + 1));
        }
    }
    std::vector<uint8_t> flag(static_cast<size_t>(w) * h, 0);
    for (int32_t fy = -n; fy < n; ++fy) {
        int32_t ra = uf.find(id(-m - 1, fy));
        flag[ra] |= 1;
        if (flag[ra] == 3) return true;
        int32_t rb = uf.find(id(m, fy));
        flag[rb] |= 2;
        if (flag[rb] == 3) return true;
    }
    return false;
}

}  // namespace

bool has_crossing(const BernoulliView& view, int32_t m, int32_t n, CrossColor color, Axis axis) {
    if (m < 1 || n < 1) throw std::invalid_argument("has_crossing: need m, n >= 1");
    if (color == CrossColor::Open) return open_rect_crossing(view.field(), view.p(), m, n, axis);
    return closed_rect_crossing(view.field(), view.p(), m, n, axis);
}

bool has_circuit(const BernoulliView& view, Annulus ann, CrossColor color, int defects) {
    if (defects < 0) throw std::invalid_argument("has_circuit: defects must be >= 0");
    const AnnulusGeometry& g = AnnulusGeometry::get(ann.inner, ann.outer);
    AnnulusSample sample;
    sample.fill(g, view.field());
    const double p = view.p();
    if (color == CrossColor::Open) {
        return primal_circuit(g, [&](size_t i) { return sample.weight[i] < p; }, defects);
    }
    return dual_circuit(g, [&](size_t i) { return sample.weight[i] >= p; }, defects);
}

EstimateRecord crossing_probability(double p, int32_t m, int32_t n, CrossColor color,
                                    uint64_t trials, Seed seed, int threads) {
    if (trials < 1) throw std::invalid_argument("crossing_probability: trials >= 1");
    TrialTally tally = run_trials(trials, threads, [&](uint64_t t) {
        WeightField field(seed.derive(t));
        return to_ternary(has_crossing(BernoulliView(field, p), m, n, color));
    });
    EstimateRecord rec;
    rec.experiment = "crossing";
    rec.event = color == CrossColor::Open ? "open-lr" : "closed-lr";
    rec.n = n;
    rec.m = m;
    rec.p = p;
    rec.trials = trials;
    rec.hits = tally.hits;
    rec.seed = seed.value;
    rec.finalize_ci();
    return rec;
}

namespace {

enum class ProbeDecision { Accept, Reject };

/// CI-gated decision of "P_p(square crossing at n) > 1 - eps". Inconclusive
/// probes double the trial budget; at the cap the point estimate decides and
/// the result is flagged.
ProbeDecision decide_crossing_probe(double p, int32_t n, double eps, uint64_t trials,
                                    Seed probe_seed, const CorrLenOptions& opts, int threads,
                                    bool& forced, EstimateRecord& rec_out) {
    uint64_t budget = trials;
    for (int attempt = 0;; ++attempt) {
        Seed s = probe_seed.derive(attempt);
        TrialTally tally = run_trials(budget, threads, [&](uint64_t t) {
            WeightField field(s.derive(t));
            return to_ternary(has_crossing(BernoulliView(field, p), n, n, CrossColor::Open));
        });
        EstimateRecord rec;
        rec.experiment = "correlation-length";
        rec.event = "square-crossing";
        rec.n = n;
        rec.m = n;
        rec.p = p;
        rec.trials = budget;
        rec.hits = tally.hits;
        rec.seed = s.value;
        rec.finalize_ci();
        rec_out = rec;

        const double threshold = 1.0 - eps;
        double est = rec.estimate();
        if (est > threshold && rec.ci_lo > threshold - opts.slack) return ProbeDecision::Accept;
        if (est <= threshold && rec.ci_hi < threshold + opts.slack) return ProbeDecision::Reject;
        if (attempt >= opts.max_doublings) {
            forced = true;
            return est > threshold ? ProbeDecision::Accept : ProbeDecision::Reject;
        }
        budget *= 2;
    }
}

}  // namespace

CorrelationLengthResult correlation_length(double p, double eps, uint64_t trials, int32_t n_max,
                                           Seed seed, CorrLenOptions opts, int threads) {
    if (p <= 0.5)
        throw std::invalid_argument("correlation_length: undefined for p <= 1/2 (L diverges)");
    if (eps <= 0.0 || eps >= 0.5)
        throw std::invalid_argument("correlation_length: need 0 < eps < 1/2");
    CorrelationLengthResult out;
    out.p = p;
    out.eps = eps;
    Seed root = seed.stream("corrlen");

    auto decide = [&](int32_t n) {
        bool forced = false;
        EstimateRecord rec;
        ProbeDecision d =
            decide_crossing_probe(p, n, eps, trials, root.derive(n), opts, threads, forced, rec);
        if (forced) out.inconclusive = true;
        out.probes.push_back(rec);
        return d == ProbeDecision::Accept;
    };

    int32_t lo = 0, hi = -1;  // lo: largest rejected, hi: smallest known accept
    for (int32_t n = 1; n <= n_max; n = (n == n_max ? n_max + 1 : std::min(2 * n, n_max))) {
        if (decide(n)) {
            hi = n;
            break;
        }
        lo = n;
        if (n == n_max) break;
    }
    if (hi < 0) {
        out.exceeded = true;
        out.length = n_max;
        return out;
    }
    while (hi - lo > 1) {
        int32_t mid = lo + (hi - lo) / 2;
        if (decide(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.length = hi;
    return out;
}

PHatResult p_hat(int32_t n, double eps, uint64_t trials, double tolerance, Seed seed,
                 CorrLenOptions opts, int threads) {
    if (n < 1) throw std::invalid_argument("p_hat: need n >= 1");
    if (tolerance <= 0) throw std::invalid_argument("p_hat: tolerance must be positive");
    PHatResult out;
    out.n = n;
    out.eps = eps;
    Seed root = seed.stream("p-hat");

    // L(p) <= n iff the square-crossing probability at n clears 1 - eps;
    // monotone in p through the shared weights.
    int step = 0;
    while (out.hi - out.lo > tolerance) {
        double mid = 0.5 * (out.lo + out.hi);
        bool forced = false;
        EstimateRecord rec;
        ProbeDecision d = decide_crossing_probe(mid, n, eps, trials, root.derive(step++), opts,
                                                threads, forced, rec);
        if (forced) out.inconclusive = true;
        if (d == ProbeDecision::Accept)
            out.hi = mid;
        else
            out.lo = mid;
    }
    return out;
}

EstimateRecord closed_diameter_tail(double p, int32_t n, uint64_t trials, Seed seed,
                                    int threads) {
    if (p <= 0.5) throw std::invalid_argument("closed_diameter_tail: need p > 1/2");
    if (n < 1) throw std::invalid_argument("closed_diameter_tail: need n >= 1");
    const double threshold = n / 10.0;
    const int32_t w = 2 * n;

    auto trial = [&](uint64_t t) -> Ternary {
        WeightField field(seed.derive(t));
        auto id = [&](int32_t fx, int32_t fy) { return (fy + n) * w + (fx + n); };
        detail::UnionFind uf(static_cast<size_t>(w) * w);
        struct BBox {
            int32_t x0, x1, y0, y1;
        };
        std::vector<BBox> box(static_cast<size_t>(w) * w);
        for (int32_t fy = -n; fy < n; ++fy)
            for (int32_t fx = -n; fx < n; ++fx) box[id(fx, fy)] = {fx, fx, fy, fy};

        bool found = false;
        auto link = [&](int32_t a, int32_t b) {
            int32_t ra = uf.find(a), rb = uf.find(b);
            if (ra == rb) return;
            uf.unite(ra, rb);
            int32_t r = uf.find(ra);
            BBox merged{std::min(box[ra].x0, box[rb].x0), std::max(box[ra].x1, box[rb].x1),
                        std::min(box[ra].y0, box[rb].y0), std::max(box[ra].y1, box[rb].y1)};
            box[r] = merged;
            if (std::max(merged.x1 - merged.x0, merged.y1 - merged.y0) >= threshold) found = true;
        };
        for (int32_t fy = -n; fy < n && !found; ++fy) {
            for (int32_t fx = -n; fx < n; ++fx) {
                if (fy + 1 < n && field.weight(Edge::horizontal({fx, fy + 1})) >= p)
                    link(id(fx, fy), id(fx, fy + 1));
                if (fx + 1 < n && field.weight(Edge::vertical({fx + 1, fy})) >= p)
                    link(id(fx, fy), id(fx + 1, fy));
                if (found) break;
            }
        }
        return to_ternary(found);
    };

    TrialTally tally = run_trials(trials, threads, trial);
    EstimateRecord rec;
    rec.experiment = "closed-diameter-tail";
    rec.event = "closed-path-diameter>=n/10";
    rec.n = n;
    rec.p = p;
    rec.trials = trials;
    rec.hits = tally.hits;
    rec.seed = seed.value;
    rec.finalize_ci();
    return rec;
}

}  // namespace percolab
