#include "percolab/invasion.hpp"

#include <algorithm>
#include <cmath>

#include "percolab/workspace.hpp"

namespace percolab {

InvasionState::InvasionState(const WeightField& field) : field_(field) {
    add_vertex(Vertex{0, 0});
}

void InvasionState::add_vertex(Vertex v) {
    if (!vertices_.insert(v).second) return;
    max_reach_ = std::max(max_reach_, sup_norm(v));
    const Vertex nbrs[4] = {{v.x + 1, v.y}, {v.x, v.y + 1}, {v.x - 1, v.y}, {v.x, v.y - 1}};
    for (Vertex u : nbrs) {
        Edge e = Edge::between(v, u);
        if (invaded_.count(e)) continue;
        frontier_.push({field_.weight(e), e.key(), e});
    }
}

double InvasionState::frontier_min() {
    while (!frontier_.empty() && invaded_.count(frontier_.top().edge)) frontier_.pop();
    return frontier_.empty() ? 1.0 : frontier_.top().weight;
}

void InvasionState::step_once() {
    while (!frontier_.empty() && invaded_.count(frontier_.top().edge)) frontier_.pop();
    if (frontier_.empty()) return;  // cannot happen on the full lattice
    HeapEntry top = frontier_.top();
    frontier_.pop();
    invaded_.insert(top.edge);
    order_.push_back({top.edge, top.weight});
    max_weight_ = std::max(max_weight_, top.weight);
    add_vertex(top.edge.a);
    add_vertex(top.edge.b);
}

bool InvasionState::run(const StoppingRule& rule, uint64_t max_steps) {
    auto met = [&]() {
        switch (rule.kind) {
            case StoppingRule::Kind::ExitBox:
                return max_reach_ > rule.radius;
            case StoppingRule::Kind::StepBudget:
                return order_.size() >= rule.steps;
            case StoppingRule::Kind::FrontierAbove:
                return frontier_min() > rule.threshold;
        }
        return true;
    };
    uint64_t taken = 0;
    while (!met()) {
        if (taken >= max_steps) return false;
        step_once();
        ++taken;
    }
    return true;
}

InvasionState invade_until(const WeightField& field, const StoppingRule& rule,
                           uint64_t max_steps) {
    InvasionState state(field);
    state.run(rule, max_steps);
    return state;
}

namespace {

/// One certification pass over B(M). Builds the p-open connectivity structure
/// incrementally along an ascending p-grid and reports the smallest p at
/// which the invaded set inside B(M/2) joins a cluster touching the horizon
/// boundary, together with reachability flags for the future-confinement
/// closure.
struct CertPass {
    double p_star = 1.0;
    // per vertex of B(M): root flagged if its t<p* component contains an
    // invaded vertex or touches the horizon boundary
    std::vector<uint8_t> reachable_flag;
    detail::UnionFind uf{0};
    int32_t horizon = 0;

    int32_t vid(Vertex v) const {
        return (v.y + horizon) * (2 * horizon + 1) + (v.x + horizon);
    }
};

CertPass certification_pass(const InvasionState& state, int32_t horizon,
                            const CertifyOptions& opts) {
    const int32_t M = horizon;
    const int32_t span = 2 * M + 1;
    const size_t nodes = static_cast<size_t>(span) * span;

    // ascending probe grid 1/2 < ... < 1, geometric toward 1/2
    std::vector<double> grid;
    for (double step = 0.5; step >= opts.grid_resolution; step *= opts.grid_factor)
        grid.push_back(0.5 + step);
    std::reverse(grid.begin(), grid.end());

    CertPass pass;
    pass.horizon = M;
    pass.uf = detail::UnionFind(nodes);

    // bits: 1 = invaded vertex inside B(M/2), 2 = horizon boundary, 4 = invaded anywhere
    std::vector<uint8_t> bits(nodes, 0);
    for (const Vertex& v : state.invaded_vertices()) {
        if (sup_norm(v) > M) continue;
        int32_t id = pass.vid(v);
        bits[id] |= 4;
        if (sup_norm(v) <= M / 2) bits[id] |= 1;
    }
    for (Vertex v : boundary_vertices(Box{M})) bits[pass.vid(v)] |= 2;

    // bucket the edges of B(M) by the first probe that opens them (counting sort)
    const size_t edge_count = static_cast<size_t>(2) * span * (span - 1);
    std::vector<int32_t> bucket_of(edge_count);
    std::vector<uint32_t> bucket_size(grid.size() + 1, 0);
    std::vector<int64_t> packed(edge_count);  // (a, b) vertex ids
    {
        size_t idx = 0;
        for (int32_t y = -M; y <= M; ++y) {
            for (int32_t x = -M; x <= M; ++x) {
                for (int h = 0; h < 2; ++h) {
                    if (h == 0 && x == M) continue;
                    if (h == 1 && y == M) continue;
                    Edge e = h == 0 ? Edge::horizontal({x, y}) : Edge::vertical({x, y});
                    double w = state.field().weight(e);
                    auto it = std::upper_bound(grid.begin(), grid.end(), w);
                    int32_t bucket = static_cast<int32_t>(it - grid.begin());
                    if (bucket >= static_cast<int32_t>(grid.size()))
                        bucket = static_cast<int32_t>(grid.size()) - 1;  // w < 1 always
                    Vertex other = h == 0 ? Vertex{x + 1, y} : Vertex{x, y + 1};
                    bucket_of[idx] = bucket;
                    packed[idx] =
                        (static_cast<int64_t>(pass.vid({x, y})) << 32) | pass.vid(other);
                    ++bucket_size[bucket];
                    ++idx;
                }
            }
        }
    }
    std::vector<uint32_t> bucket_at(grid.size() + 1, 0);
    for (size_t b = 1; b <= grid.size(); ++b) bucket_at[b] = bucket_at[b - 1] + bucket_size[b - 1];
    std::vector<int64_t> sorted(edge_count);
    {
        std::vector<uint32_t> cursor = bucket_at;
        for (size_t i = 0; i < edge_count; ++i) sorted[cursor[bucket_of[i]]++] = packed[i];
    }

    bool found = false;
    size_t pos = 0;
    for (size_t probe = 0; probe < grid.size() && !found; ++probe) {
        size_t end = probe + 1 < grid.size() ? bucket_at[probe + 1] : edge_count;
        while (pos < end) {
            int64_t pk = sorted[pos++];
            int32_t ra = pass.uf.find(static_cast<int32_t>(pk >> 32));
            int32_t rb = pass.uf.find(static_cast<int32_t>(pk & 0xffffffff));
            if (ra == rb) continue;
            uint8_t merged = bits[ra] | bits[rb];
            pass.uf.unite(ra, rb);
            bits[pass.uf.find(ra)] = merged;
            if ((merged & 1) && (merged & 2)) found = true;
        }
        if (found) pass.p_star = grid[probe];
    }
    if (!found) pass.p_star = 1.0;  // certifies nothing below weight 1

    pass.reachable_flag.assign(nodes, 0);
    for (size_t i = 0; i < nodes; ++i) {
        if (bits[i] & 6) pass.reachable_flag[pass.uf.find(static_cast<int32_t>(i))] = 1;
    }
    return pass;
}

EdgeStatusMap mark_window(const InvasionState& state, int32_t window, CertPass& pass) {
    EdgeStatusMap map;
    map.window = window;
    map.p_star = pass.p_star;
    for (Edge e : edges_in_region(Box{window})) {
        EdgeStatus st;
        if (state.edge_invaded(e)) {
            st = EdgeStatus::Invaded;
        } else if (state.field().weight(e) >= pass.p_star) {
            st = EdgeStatus::Never;
        } else {
            bool adjacent = pass.reachable_flag[pass.uf.find(pass.vid(e.a))] ||
                            pass.reachable_flag[pass.uf.find(pass.vid(e.b))];
            st = adjacent ? EdgeStatus::Unresolved : EdgeStatus::Never;
        }
        map.status.emplace(e, st);
        if (st == EdgeStatus::Invaded) ++map.invaded_count;
        else if (st == EdgeStatus::Never) ++map.never_count;
        else ++map.unresolved_count;
    }
    return map;
}

}  // namespace

EdgeStatusMap certify_statuses(InvasionState& state, int32_t window, int32_t horizon,
                               const CertifyOptions& opts) {
    if (window < 1 || horizon <= window)
        throw std::invalid_argument("certify_statuses: need 1 <= window < horizon");
    uint64_t budget = opts.step_budget ? opts.step_budget
                                       : static_cast<uint64_t>(4) * horizon * horizon;

    // grow past the horizon first
    state.run(StoppingRule::exit_box(horizon), budget);

    EdgeStatusMap best;
    for (int round = 0;; ++round) {
        CertPass pass = certification_pass(state, horizon, opts);
        best = mark_window(state, window, pass);
        if (best.unresolved_count == 0 || round + 1 >= opts.max_rounds) break;
        // eat the sub-p* halo; if nothing is left below p*, statuses are stable
        uint64_t before = state.steps();
        uint64_t chunk = std::max<uint64_t>(state.steps(), 50000);
        state.run(StoppingRule::frontier_above(pass.p_star), chunk);
        if (state.steps() == before) break;
    }
    return best;
}

CertifiedRun run_certified(const WeightField& field, int32_t window,
                           const CertifyOptions& opts) {
    CertifiedRun run{InvasionState(field), {}, window * opts.horizon_multiplier, false};
    uint64_t budget = opts.step_budget
                          ? opts.step_budget
                          : static_cast<uint64_t>(4) * run.horizon * run.horizon;
    run.budget_hit = !run.state.run(StoppingRule::exit_box(run.horizon), budget);
    run.statuses = certify_statuses(run.state, window, run.horizon, opts);
    return run;
}

std::vector<Outlet> outlets(const CertifiedRun& run) {
    const auto& order = run.state.order();
    std::vector<Outlet> out;
    double suffix_max = 0.0;
    std::vector<double> later_max(order.size(), 0.0);
    for (size_t i = order.size(); i-- > 0;) {
        later_max[i] = suffix_max;
        suffix_max = std::max(suffix_max, order[i].weight);
    }
    for (size_t i = 0; i < order.size(); ++i) {
        if (order[i].weight > later_max[i] && order[i].weight > run.statuses.p_star)
            out.push_back({order[i].edge, i, order[i].weight});
    }
    return out;
}

Ternary invaded_circuit(const CertifiedRun& run, Annulus ann) {
    if (ann.outer > run.statuses.window)
        throw std::invalid_argument("invaded_circuit: annulus exceeds certified window");
    const AnnulusGeometry& g = AnnulusGeometry::get(ann.inner, ann.outer);
    std::vector<EdgeStatus> st(g.edges.size());
    for (size_t i = 0; i < g.edges.size(); ++i) st[i] = run.statuses.status_of(g.edges[i]);

    bool pessimistic = primal_circuit(
        g, [&](size_t i) { return st[i] == EdgeStatus::Invaded; }, 0);
    if (pessimistic) return Ternary::True;  // invaded verdicts are final
    bool optimistic = primal_circuit(
        g, [&](size_t i) { return st[i] != EdgeStatus::Never; }, 0);
    return optimistic ? Ternary::Unknown : Ternary::False;
}

namespace {

/// Dual circuit around the origin in B(W) that encloses the innermost
/// admissible open circuit of the annulus: faces flooded from the hole
/// (crossing everything except open annulus edges) are banned, and the
/// circuit must wind, detected on the two-sheet lift.
bool enclosing_dual_circuit(const WeightField& field, Annulus ann, int32_t W, double wcand) {
    const int32_t span = 2 * W;  // faces (x, y), x and y in [-W, W-1]
    auto fid = [&](int32_t fx, int32_t fy) { return (fy + W) * span + (fx + W); };
    auto in_grid = [&](int32_t fx, int32_t fy) {
        return fx >= -W && fx < W && fy >= -W && fy < W;
    };
    auto face_ring2 = [&](int32_t fx, int32_t fy) {
        int64_t cx = std::abs(2 * static_cast<int64_t>(fx) + 1);
        int64_t cy = std::abs(2 * static_cast<int64_t>(fy) + 1);
        return static_cast<int32_t>(cx > cy ? cx : cy);
    };
    // blocking edges: open edges usable by circuits of B(n) \ B(m)
    auto blocked = [&](Edge e) {
        if (e.min_endpoint_norm() < ann.inner + 1 || e.max_endpoint_norm() > ann.outer)
            return false;
        return field.weight(e) <= wcand;
    };

    const size_t nfaces = static_cast<size_t>(span) * span;
    std::vector<uint8_t> territory(nfaces, 0);  // hole-side flood
    std::vector<int32_t> stack;
    for (int32_t fy = -W; fy < W; ++fy) {
        for (int32_t fx = -W; fx < W; ++fx) {
            if (face_ring2(fx, fy) <= 2 * ann.inner - 1) {
                territory[fid(fx, fy)] = 1;
                stack.push_back(fid(fx, fy));
            }
        }
    }
    while (!stack.empty()) {
        int32_t id = stack.back();
        stack.pop_back();
        int32_t fx = id % span - W, fy = id / span - W;
        struct Move {
            int32_t dx, dy;
            Edge crossed;
        };
        const Move moves[4] = {
            {1, 0, Edge::vertical({fx + 1, fy})},   // east
            {-1, 0, Edge::vertical({fx, fy})},      // west
            {0, 1, Edge::horizontal({fx, fy + 1})},  // north
            {0, -1, Edge::horizontal({fx, fy})},     // south
        };
        for (const Move& mv : moves) {
            int32_t gx = fx + mv.dx, gy = fy + mv.dy;
            if (!in_grid(gx, gy) || territory[fid(gx, gy)]) continue;
            if (blocked(mv.crossed)) continue;
            territory[fid(gx, gy)] = 1;
            stack.push_back(fid(gx, gy));
        }
    }

    // two-sheet lift over closed dual edges among non-territory faces
    detail::UnionFind uf(2 * nfaces);
    auto ray_cross = [](Edge e) { return e.is_horizontal() && e.a.y == 0 && e.a.x >= 0; };
    bool any = false;
    for (int32_t fy = -W; fy < W; ++fy) {
        for (int32_t fx = -W; fx < W; ++fx) {
            if (territory[fid(fx, fy)]) continue;
            const std::pair<std::pair<int32_t, int32_t>, Edge> steps[2] = {
                {{fx + 1, fy}, Edge::vertical({fx + 1, fy})},
                {{fx, fy + 1}, Edge::horizontal({fx, fy + 1})},
            };
            for (const auto& [to, crossed] : steps) {
                auto [gx, gy] = to;
                if (!in_grid(gx, gy) || territory[fid(gx, gy)]) continue;
                if (crossed.max_endpoint_norm() > W) continue;
                if (field.weight(crossed) <= wcand) continue;  // must be closed
                int32_t a = fid(fx, fy), b = fid(gx, gy);
                int32_t c = ray_cross(crossed) ? 1 : 0;
                uf.unite(2 * a, 2 * b + c);
                uf.unite(2 * a + 1, 2 * b + (1 - c));
                any = true;
            }
        }
    }
    if (!any) return false;
    for (size_t f = 0; f < nfaces; ++f) {
        if (territory[f]) continue;
        if (uf.same(static_cast<int32_t>(2 * f), static_cast<int32_t>(2 * f + 1))) return true;
    }
    return false;
}

}  // namespace

CircuitEquivalenceSample check_inv_circuit_equivalence(const WeightField& field, Annulus ann,
                                                       int32_t horizon,
                                                       const CertifyOptions& opts) {
    CertifyOptions local = opts;
    local.horizon_multiplier = std::max<int32_t>(1, horizon / ann.outer);
    InvasionState state(field);
    uint64_t budget = local.step_budget ? local.step_budget
                                        : static_cast<uint64_t>(4) * horizon * horizon;
    state.run(StoppingRule::exit_box(horizon), budget);
    EdgeStatusMap statuses = certify_statuses(state, ann.outer, horizon, local);
    CertifiedRun run{std::move(state), std::move(statuses), horizon, false};

    CircuitEquivalenceSample sample;
    sample.invaded_side = invaded_circuit(run, ann);
    sample.resolved = sample.invaded_side != Ternary::Unknown;

    const AnnulusGeometry& g = AnnulusGeometry::get(ann.inner, ann.outer);
    AnnulusSample annw;
    annw.fill(g, field);

    std::vector<double> candidates;
    for (size_t i = 0; i < g.edges.size(); ++i)
        if (g.info[i].flags & AnnulusGeometry::kPrimalCircuit)
            candidates.push_back(annw.weight[i]);
    std::sort(candidates.begin(), candidates.end());

    auto circuit_at = [&](double w) {
        return primal_circuit(g, [&](size_t i) { return annw.weight[i] <= w; }, 0);
    };
    // the open circuit is monotone in the sweep parameter: restrict to w >= first success
    size_t lo = 0, hi = candidates.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (circuit_at(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }

    const int32_t W = std::max(horizon, run.state.max_reach() + 2);
    sample.bernoulli_side = false;
    for (size_t i = lo; i < candidates.size(); ++i) {
        if (i > lo && candidates[i] == candidates[i - 1]) continue;
        if (enclosing_dual_circuit(field, ann, W, candidates[i])) {
            sample.bernoulli_side = true;
            break;
        }
    }

    sample.agree = sample.resolved &&
                   ((sample.invaded_side == Ternary::True) == sample.bernoulli_side);
    return sample;
}

}  // namespace percolab
