#include "percolab/arms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace percolab {

ColorSequence reduce(const ColorSequence& sigma) {
    const auto& w = sigma.entries();
    const size_t len = w.size();
    size_t closed = sigma.count_closed();
    if (closed == len) {
        // single cyclic run wrapping the whole word
        return ColorSequence(std::vector<ArmColor>(std::min<size_t>(len, 2), ArmColor::Closed));
    }
    // rotate to start at an O so no C run wraps
    size_t start = 0;
    while (w[start] != ArmColor::Open) ++start;
    std::vector<ArmColor> out;
    out.reserve(len);
    size_t i = 0;
    while (i < len) {
        ArmColor c = w[(start + i) % len];
        if (c == ArmColor::Open) {
            out.push_back(c);
            ++i;
            continue;
        }
        size_t run = 0;
        while (i < len && w[(start + i) % len] == ArmColor::Closed) {
            ++run;
            ++i;
        }
        for (size_t k = 0; k < std::min<size_t>(run, 2); ++k) out.push_back(ArmColor::Closed);
    }
    // keep the representative aligned with the input when it already starts at O
    if (start == 0) return ColorSequence(std::move(out));
    return ColorSequence(std::move(out));
}

ColorSequence sigma_k(size_t k) {
    std::vector<ArmColor> w{ArmColor::Open};
    w.insert(w.end(), k, ArmColor::Closed);
    return ColorSequence(std::move(w));
}

ColorSequence sigma_hat_k(size_t k) {
    if (k == 0) throw std::invalid_argument("sigma_hat_k: k >= 1");
    return ColorSequence(std::vector<ArmColor>(k, ArmColor::Closed));
}

namespace {

struct ColorPredicates {
    EdgePredicate open;    // admissible for open arms (region flag included)
    EdgePredicate closed;  // admissible for closed arms
    bool exclusive = true;  // no edge is usable by both colors (p <= q case)
};

/// >= k edge-disjoint open crossings, by the defect-circuit duality: k open
/// arms exist iff there is no closed dual circuit with at most k-1 defects.
bool open_count_at_least(const AnnulusGeometry& g, const EdgePredicate& open, int k) {
    if (k <= 0) return true;
    if (k == 1) return open_crossing(g, open);
    return !dual_circuit(g, [&](size_t i) { return !open(i); }, k - 1);
}

/// >= k edge-disjoint closed dual crossings iff no open-side circuit (edges
/// passing the complement of `closed`) with at most k-1 defects exists.
bool closed_count_at_least(const AnnulusGeometry& g, const EdgePredicate& closed, int k) {
    if (k <= 0) return true;
    if (k == 1) return closed_crossing(g, closed);
    return !primal_circuit(g, [&](size_t i) { return !closed(i); }, k - 1);
}

std::vector<ColorSequence> rotations_starting_open(const ColorSequence& sigma) {
    std::vector<ColorSequence> out;
    std::set<std::string> seen;
    for (size_t k = 0; k < sigma.size(); ++k) {
        if (sigma.at(k) != ArmColor::Open) continue;
        ColorSequence rot = sigma.rotated(k);
        if (seen.insert(rot.str()).second) out.push_back(rot);
    }
    return out;
}

struct PeelContext {
    const AnnulusGeometry* g;
    const ColorPredicates* pred;
    std::vector<uint8_t> used_open;
    std::vector<uint8_t> used_closed;
    uint64_t dfs_budget = 200000;

    void charge() {
        if (dfs_budget-- == 0)
            throw std::runtime_error("arm detector: search budget exceeded");
    }
};

/// Anchor candidates of one color, ordered by cyclic rank relative to the
/// base anchor; only candidates strictly beyond `floor_rel` qualify.
std::vector<std::pair<int32_t, int32_t>> anchors_beyond(const AnnulusGeometry& g, ArmColor c,
                                                        int32_t base_rank, int32_t floor_rel) {
    const auto& ids = c == ArmColor::Open ? g.open_anchors : g.closed_anchors;
    const auto& rank = c == ArmColor::Open ? g.vertex_anchor_rank : g.face_anchor_rank;
    std::vector<std::pair<int32_t, int32_t>> out;  // (relative rank, id)
    for (int32_t id : ids) {
        int32_t rel = rank[id] - base_rank;
        if (rel < 0) rel += g.anchor_count;
        if (rel > floor_rel) out.emplace_back(rel, id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool peel_slots(PeelContext& ctx, const ColorSequence& word, size_t slot, int32_t base_rank,
                int32_t floor_rel) {
    if (slot == word.size()) return true;
    const AnnulusGeometry& g = *ctx.g;
    const ArmColor c = word.at(slot);

    for (auto [rel, id] : anchors_beyond(g, c, base_rank, floor_rel)) {
        ctx.charge();
        ArmPath path;
        bool found;
        if (c == ArmColor::Open) {
            found = extremal_crossing_from_vertex(
                g, id,
                [&](size_t i) { return ctx.pred->open(i) && !ctx.used_open[i]; }, path);
        } else {
            found = extremal_crossing_from_face(
                g, id,
                [&](size_t i) { return ctx.pred->closed(i) && !ctx.used_closed[i]; }, path);
        }
        if (!found) continue;
        auto& used = c == ArmColor::Open ? ctx.used_open : ctx.used_closed;
        for (int32_t e : path.edge_ids) used[e] = 1;
        if (peel_slots(ctx, word, slot + 1, base_rank, rel)) return true;
        for (int32_t e : path.edge_ids) used[e] = 0;
    }
    return false;
}

/// Unit-anchor-capacity maxflow on the dual: edge-disjoint closed crossings
/// with pairwise distinct anchors drawn from an admissible anchor set.
int closed_flow_from_anchors(const AnnulusGeometry& g, const EdgePredicate& closed,
                             const std::function<bool(int32_t)>& anchor_ok, int cap) {
    const size_t nodes = g.faces.size();
    std::vector<int8_t> flow(g.edges.size(), 0);
    std::vector<uint8_t> source_used(nodes, 0);
    std::vector<int32_t> prev_node(nodes), prev_edge(nodes);
    std::vector<uint8_t> seen(nodes);

    int total = 0;
    while (total < cap) {
        std::fill(seen.begin(), seen.end(), 0);
        std::deque<int32_t> q;
        for (size_t f = 0; f < nodes; ++f) {
            if (g.face_inner[f] && !source_used[f] && anchor_ok(static_cast<int32_t>(f))) {
                seen[f] = 1;
                prev_node[f] = -1;
                q.push_back(static_cast<int32_t>(f));
            }
        }
        int32_t reached = -1;
        while (!q.empty() && reached < 0) {
            int32_t v = q.front();
            q.pop_front();
            if (g.face_outer[v]) {
                reached = v;
                break;
            }
            for (int d = 0; d < 4 && reached < 0; ++d) {
                int32_t nb = g.face_nbr[v][d], ei = g.face_edge[v][d];
                if (nb < 0 || seen[nb]) continue;
                const auto& inf = g.info[ei];
                if (!(inf.flags & AnnulusGeometry::kDualRegion) || !closed(ei)) continue;
                bool forward = inf.fa == v;
                int8_t f = flow[ei];
                if ((forward && f >= 1) || (!forward && f <= -1)) continue;
                seen[nb] = 1;
                prev_node[nb] = v;
                prev_edge[nb] = ei;
                q.push_back(nb);
            }
        }
        if (reached < 0) break;
        int32_t v = reached;
        while (prev_node[v] != -1) {
            int32_t ei = prev_edge[v];
            bool forward = g.info[ei].fa == prev_node[v];
            flow[ei] += forward ? 1 : -1;
            v = prev_node[v];
        }
        source_used[v] = 1;
        ++total;
    }
    return total;
}

/// Two edge-disjoint open crossings anchored exactly at the two given ring
/// vertices.
bool open_pair_flow(const AnnulusGeometry& g, const EdgePredicate& open, int32_t va,
                    int32_t vb) {
    const size_t nodes = g.vertices.size();
    std::vector<int8_t> flow(g.edges.size(), 0);
    std::vector<uint8_t> source_used(nodes, 0);
    std::vector<int32_t> prev_node(nodes), prev_edge(nodes);
    std::vector<uint8_t> seen(nodes);

    for (int total = 0; total < 2; ++total) {
        std::fill(seen.begin(), seen.end(), 0);
        std::deque<int32_t> q;
        for (int32_t s : {va, vb}) {
            if (!source_used[s]) {
                seen[s] = 1;
                prev_node[s] = -1;
                q.push_back(s);
            }
        }
        int32_t reached = -1;
        while (!q.empty() && reached < 0) {
            int32_t v = q.front();
            q.pop_front();
            if (g.vertex_outer[v]) {
                reached = v;
                break;
            }
            for (int d = 0; d < 4 && reached < 0; ++d) {
                int32_t nb = g.vert_nbr[v][d], ei = g.vert_edge[v][d];
                if (nb < 0 || seen[nb]) continue;
                const auto& inf = g.info[ei];
                if (!(inf.flags & AnnulusGeometry::kOpenRegion) || !open(ei)) continue;
                bool forward = inf.va == v;
                int8_t f = flow[ei];
                if ((forward && f >= 1) || (!forward && f <= -1)) continue;
                seen[nb] = 1;
                prev_node[nb] = v;
                prev_edge[nb] = ei;
                q.push_back(nb);
            }
        }
        if (reached < 0) return false;
        int32_t v = reached;
        while (prev_node[v] != -1) {
            int32_t ei = prev_edge[v];
            bool forward = g.info[ei].va == prev_node[v];
            flow[ei] += forward ? 1 : -1;
            v = prev_node[v];
        }
        source_used[v] = 1;
    }
    return true;
}

/// Exact decision for sequences with exactly two open entries, cyclically
/// O C^a1 O C^a2. The two open arms cut the annulus into two lunes; closed
/// arms anchored in one inner arc can never cross the open arms, so they stay
/// inside their lune and the two closed groups are automatically disjoint.
/// The event therefore factorizes into an anchored open pair plus per-arc
/// closed counts, monotone in the arc, searched with threshold windows.
bool detect_two_open(const AnnulusGeometry& g, const ColorPredicates& pred,
                     const ColorSequence& sigma) {
    // split the closed entries around the two open ones
    size_t first_o = 0;
    while (sigma.at(first_o) != ArmColor::Open) ++first_o;
    ColorSequence rot = sigma.rotated(first_o);
    int a1 = 0;
    size_t i = 1;
    while (rot.at(i) == ArmColor::Closed) {
        ++a1;
        ++i;
    }
    int a2 = static_cast<int>(sigma.count_closed()) - a1;

    // open anchors whose component reaches the outer ring
    detail::UnionFind uf(g.vertices.size());
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const auto& inf = g.info[e];
        if ((inf.flags & AnnulusGeometry::kOpenRegion) && pred.open(e)) uf.unite(inf.va, inf.vb);
    }
    std::vector<uint8_t> root_out(g.vertices.size(), 0);
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (g.vertex_outer[v]) root_out[uf.find(static_cast<int32_t>(v))] = 1;
    std::vector<int32_t> candidates;  // rank-ordered open anchors in crossing components
    for (int32_t v : g.open_anchors)
        if (root_out[uf.find(v)]) candidates.push_back(v);
    if (candidates.size() < 2) return false;

    const int32_t A = g.anchor_count;
    auto arc_count = [&](int32_t base_rank, int32_t lo_rel, int32_t hi_rel, int cap) {
        // closed anchors with relative rank strictly inside (lo_rel, hi_rel)
        return closed_flow_from_anchors(
            g, pred.closed,
            [&](int32_t fid) {
                int32_t rel = g.face_anchor_rank[fid] - base_rank;
                if (rel < 0) rel += A;
                return rel > lo_rel && rel < hi_rel;
            },
            cap);
    };

    for (int32_t base : candidates) {
        const int32_t base_rank = g.vertex_anchor_rank[base];
        // other anchors ordered by relative rank
        std::vector<std::pair<int32_t, int32_t>> others;  // (rel, vid)
        for (int32_t v : candidates) {
            if (v == base) continue;
            int32_t rel = g.vertex_anchor_rank[v] - base_rank;
            if (rel < 0) rel += A;
            others.emplace_back(rel, v);
        }
        std::sort(others.begin(), others.end());

        // smallest index with >= a1 closed anchors strictly before `other`
        size_t lo = 0, hi = others.size();
        if (a1 > 0) {
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (arc_count(base_rank, 0, others[mid].first, a1) >= a1)
                    hi = mid;
                else
                    lo = mid + 1;
            }
        }
        size_t lo_idx = lo;
        // largest index with >= a2 closed anchors strictly after `other`
        size_t lo2 = lo_idx, hi2 = others.size();
        if (a2 > 0) {
            while (lo2 < hi2) {
                size_t mid = (lo2 + hi2) / 2;
                if (arc_count(base_rank, others[mid].first, A, a2) >= a2)
                    lo2 = mid + 1;
                else
                    hi2 = mid;
            }
        } else {
            lo2 = others.size();
        }
        size_t hi_idx = lo2;  // exclusive
        for (size_t k = lo_idx; k < hi_idx; ++k) {
            if (open_pair_flow(g, pred.open, base, others[k].second)) return true;
        }
    }
    return false;
}

/// Sequences with at least two arms of each color: cut the annulus at a base
/// open arm, then peel the residual linear word clockwise-extremally with
/// backtracking over anchors.
bool detect_ordered(const AnnulusGeometry& g, const ColorPredicates& pred,
                    const ColorSequence& sigma) {
    const int a = static_cast<int>(sigma.count_open());
    const int b = static_cast<int>(sigma.count_closed());
    if (count_disjoint_crossings_open(g, pred.open, a) < a) return false;
    if (count_disjoint_crossings_closed(g, pred.closed, b) < b) return false;
    if (a == 2) return detect_two_open(g, pred, sigma);

    for (const ColorSequence& rot : rotations_starting_open(sigma)) {
        ColorSequence tail(std::vector<ArmColor>(rot.entries().begin() + 1, rot.entries().end()));
        PeelContext ctx;
        ctx.g = &g;
        ctx.pred = &pred;
        ctx.used_open.assign(g.edges.size(), 0);
        ctx.used_closed.assign(g.edges.size(), 0);
        for (int32_t base : g.open_anchors) {
            ctx.charge();
            ArmPath base_path;
            if (!extremal_crossing_from_vertex(
                    g, base, [&](size_t i) { return pred.open(i); }, base_path))
                continue;
            for (int32_t e : base_path.edge_ids) ctx.used_open[e] = 1;
            bool ok = peel_slots(ctx, tail, 0, g.vertex_anchor_rank[base], 0);
            for (int32_t e : base_path.edge_ids) ctx.used_open[e] = 0;
            if (ok) return true;
        }
    }
    return false;
}

bool detect_core(const AnnulusGeometry& g, const ColorPredicates& pred,
                 const ColorSequence& sigma) {
    const int a = static_cast<int>(sigma.count_open());
    const int b = static_cast<int>(sigma.count_closed());
    if (a == 0) return closed_count_at_least(g, pred.closed, b);
    if (b == 0) return open_count_at_least(g, pred.open, a);
    if (a == 1 || b == 1) {
        // a lone entry of one color leaves the cyclic order unconstrained
        return open_count_at_least(g, pred.open, a) &&
               closed_count_at_least(g, pred.closed, b);
    }
    return detect_ordered(g, pred, sigma);
}

ColorPredicates weight_predicates(const AnnulusSample& sample, double p_open, double q_closed) {
    const AnnulusGeometry& g = *sample.geo;
    ColorPredicates pred;
    pred.open = [&g, &sample, p_open](size_t i) {
        return (g.info[i].flags & AnnulusGeometry::kOpenRegion) && sample.weight[i] < p_open;
    };
    pred.closed = [&g, &sample, q_closed](size_t i) {
        return (g.info[i].flags & AnnulusGeometry::kDualRegion) && sample.weight[i] >= q_closed;
    };
    pred.exclusive = p_open <= q_closed;
    return pred;
}

}  // namespace

bool detect_arms_sample(const AnnulusSample& sample, const ColorSequence& sigma, double p_open,
                        double q_closed) {
    const AnnulusGeometry& g = *sample.geo;
    ColorPredicates pred = weight_predicates(sample, p_open, q_closed);
    if (!pred.exclusive && sigma.count_open() >= 2 && sigma.count_closed() >= 2) {
        // ordered detection relies on open and closed arms never crossing;
        // with q < p that only holds for the brute-force search
        throw std::invalid_argument(
            "detect_arms: ordered sequences with q_closed < p_open are only decided by "
            "brute_force_arms on tiny annuli");
    }
    return detect_core(g, pred, sigma);
}

bool detect_arms(const WeightField& field, const ArmEventSpec& spec) {
    if (spec.m >= spec.n || spec.m < 1)
        throw std::invalid_argument("detect_arms: need 1 <= m < n");
    const int32_t m = spec.inner_effective();
    const AnnulusGeometry& g = AnnulusGeometry::get(m, spec.n);
    AnnulusSample sample;
    sample.fill(g, field);
    return detect_arms_sample(sample, spec.sigma, spec.p_open, spec.q_closed);
}

Ternary detect_arms_invasion(const EdgeStatusMap& statuses, const ColorSequence& sigma,
                             int32_t m, int32_t n) {
    int32_t inner =
        std::min<int32_t>(std::max<int32_t>(m, static_cast<int32_t>(sigma.size())), n - 1);
    if (inner < 1 || inner >= n)
        throw std::invalid_argument("detect_arms_invasion: need 1 <= inner < n");
    if (n > statuses.window)
        throw std::invalid_argument("detect_arms_invasion: annulus exceeds certified window");
    const AnnulusGeometry& g = AnnulusGeometry::get(inner, n);
    std::vector<EdgeStatus> st(g.edges.size());
    for (size_t i = 0; i < g.edges.size(); ++i) st[i] = statuses.status_of(g.edges[i]);

    auto run_with = [&](bool unresolved_open) {
        ColorPredicates pred;
        pred.open = [&, unresolved_open](size_t i) {
            if (!(g.info[i].flags & AnnulusGeometry::kOpenRegion)) return false;
            return unresolved_open ? st[i] != EdgeStatus::Never : st[i] == EdgeStatus::Invaded;
        };
        pred.closed = [&, unresolved_open](size_t i) {
            if (!(g.info[i].flags & AnnulusGeometry::kDualRegion)) return false;
            return unresolved_open ? st[i] == EdgeStatus::Never : st[i] != EdgeStatus::Invaded;
        };
        pred.exclusive = true;
        return detect_core(g, pred, sigma);
    };

    bool as_open = run_with(true);
    bool as_closed = run_with(false);
    if (as_open == as_closed) return to_ternary(as_open);
    return Ternary::Unknown;
}

// --- brute-force oracle ------------------------------------------------------

namespace {

struct OracleContext {
    const AnnulusGeometry* g;
    ColorPredicates pred;
    std::vector<uint8_t> used_open;
    std::vector<uint8_t> used_closed;
    uint64_t budget = 80'000'000;

    void charge() {
        if (budget-- == 0) throw std::runtime_error("brute_force_arms: search budget exceeded");
    }

    bool usable(size_t i, ArmColor c) const {
        if (c == ArmColor::Open)
            return pred.open(i) && !used_open[i] && !used_closed[i];
        return pred.closed(i) && !used_closed[i] && !used_open[i];
    }
};

/// Enumerate simple crossings of one color from a fixed anchor; `sink` gets
/// each path's edge set and returns true to stop the enumeration.
template <typename Sink>
bool enumerate_paths(OracleContext& ctx, ArmColor c, int32_t anchor, Sink&& sink) {
    const AnnulusGeometry& g = *ctx.g;
    const bool primal = c == ArmColor::Open;
    const auto& nbrs = primal ? g.vert_nbr : g.face_nbr;
    const auto& eids = primal ? g.vert_edge : g.face_edge;
    const auto& outer = primal ? g.vertex_outer : g.face_outer;
    const uint8_t region = primal ? AnnulusGeometry::kOpenRegion : AnnulusGeometry::kDualRegion;
    const size_t nodes = primal ? g.vertices.size() : g.faces.size();

    std::vector<uint8_t> visited(nodes, 0);
    std::vector<int32_t> path_edges;
    auto rec = [&](auto&& self, int32_t node) -> bool {
        ctx.charge();
        if (outer[node]) return sink(path_edges);  // arms end on first arrival
        visited[node] = 1;
        for (int d = 0; d < 4; ++d) {
            int32_t nb = nbrs[node][d], ei = eids[node][d];
            if (nb < 0 || visited[nb]) continue;
            if (!(g.info[ei].flags & region) || !ctx.usable(ei, c)) continue;
            path_edges.push_back(ei);
            auto& used = primal ? ctx.used_open : ctx.used_closed;
            used[ei] = 1;
            if (self(self, nb)) return true;
            used[ei] = 0;
            path_edges.pop_back();
        }
        visited[node] = 0;
        return false;
    };
    return rec(rec, anchor);
}

bool oracle_slots(OracleContext& ctx, const ColorSequence& word, size_t slot, int32_t min_rank,
                  bool ordered) {
    if (slot == word.size()) return true;
    const AnnulusGeometry& g = *ctx.g;
    const ArmColor c = word.at(slot);
    const auto& ids = c == ArmColor::Open ? g.open_anchors : g.closed_anchors;
    const auto& rank = c == ArmColor::Open ? g.vertex_anchor_rank : g.face_anchor_rank;

    for (int32_t id : ids) {
        if (ordered && rank[id] <= min_rank) continue;
        bool done = enumerate_paths(ctx, c, id, [&](const std::vector<int32_t>&) {
            return oracle_slots(ctx, word, slot + 1, ordered ? rank[id] : min_rank, ordered);
        });
        if (done) return true;
    }
    return false;
}

}  // namespace

bool brute_force_arms(const WeightField& field, const ArmEventSpec& spec) {
    if (spec.m >= spec.n || spec.m < 1)
        throw std::invalid_argument("brute_force_arms: need 1 <= m < n");
    const int32_t m = spec.inner_effective();
    const AnnulusGeometry& g = AnnulusGeometry::get(m, spec.n);
    size_t region_edges = 0;
    for (const auto& inf : g.info)
        if (inf.flags & AnnulusGeometry::kOpenRegion) ++region_edges;
    if (region_edges > 150)
        throw std::invalid_argument("brute_force_arms: region too large for exhaustive search");

    AnnulusSample sample;
    sample.fill(g, field);
    OracleContext ctx;
    ctx.g = &g;
    ctx.pred = weight_predicates(sample, spec.p_open, spec.q_closed);
    ctx.used_open.assign(g.edges.size(), 0);
    ctx.used_closed.assign(g.edges.size(), 0);

    const bool ordered = spec.sigma.count_open() >= 2 && spec.sigma.count_closed() >= 2;
    if (!ordered) {
        return oracle_slots(ctx, spec.sigma, 0, -1, false);
    }
    std::set<std::string> seen;
    for (size_t k = 0; k < spec.sigma.size(); ++k) {
        ColorSequence rot = spec.sigma.rotated(k);
        if (!seen.insert(rot.str()).second) continue;
        if (oracle_slots(ctx, rot, 0, -1, true)) return true;
    }
    return false;
}

}  // namespace percolab
