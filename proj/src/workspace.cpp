#include "percolab/workspace.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>

namespace percolab {

namespace {

// direction encoding: 0 = E(+x), 1 = N(+y), 2 = W(-x), 3 = S(-y)

uint8_t tangent_from_pos(int64_t px, int64_t py, int64_t r) {
    if (px == r && py >= 0) return 1;  // right side, ccw heads north
    if (py == r) return 2;             // top, ccw heads west
    if (px == -r) return 3;            // left, ccw heads south
    if (py == -r) return 0;            // bottom, ccw heads east
    return 1;                          // lower right side
}

struct GeometryCache {
    std::mutex mu;
    std::map<std::pair<int32_t, int32_t>, std::unique_ptr<AnnulusGeometry>> entries;
};

GeometryCache& cache() {
    static GeometryCache c;
    return c;
}

AnnulusGeometry build_geometry(int32_t m, int32_t n) {
    if (m < 1 || m >= n) throw std::invalid_argument("AnnulusGeometry: need 1 <= m < n");
    AnnulusGeometry g;
    g.m = m;
    g.n = n;

    const int32_t vspan = 2 * n + 1;
    std::vector<int32_t> vgrid(static_cast<size_t>(vspan) * vspan, -1);
    auto vslot = [&](Vertex v) -> int32_t& {
        return vgrid[static_cast<size_t>(v.y + n) * vspan + (v.x + n)];
    };
    for (int32_t y = -n; y <= n; ++y) {
        for (int32_t x = -n; x <= n; ++x) {
            Vertex v{x, y};
            int32_t s = sup_norm(v);
            if (s >= m && s <= n) {
                vslot(v) = static_cast<int32_t>(g.vertices.size());
                g.vertices.push_back(v);
            }
        }
    }

    const int32_t fspan = 2 * n + 2;  // face x,y in [-n-1, n]
    std::vector<int32_t> fgrid(static_cast<size_t>(fspan) * fspan, -1);
    auto fslot = [&](Face f) -> int32_t& {
        return fgrid[static_cast<size_t>(f.y + n + 1) * fspan + (f.x + n + 1)];
    };
    for (int32_t y = -n - 1; y <= n; ++y) {
        for (int32_t x = -n - 1; x <= n; ++x) {
            Face f{x, y};
            int32_t s2 = face_norm2(f);
            if (s2 >= 2 * m + 1 && s2 <= 2 * n + 1) {
                fslot(f) = static_cast<int32_t>(g.faces.size());
                g.faces.push_back(f);
            }
        }
    }

    auto vid_of = [&](Vertex v) -> int32_t {
        if (sup_norm(v) > n) return -1;
        return vslot(v);
    };
    auto fid_of = [&](Face f) -> int32_t {
        if (f.x < -n - 1 || f.x > n || f.y < -n - 1 || f.y > n) return -1;
        return fslot(f);
    };

    g.vert_nbr.assign(g.vertices.size(), {-1, -1, -1, -1});
    g.vert_edge.assign(g.vertices.size(), {-1, -1, -1, -1});
    g.face_nbr.assign(g.faces.size(), {-1, -1, -1, -1});
    g.face_edge.assign(g.faces.size(), {-1, -1, -1, -1});

    for (Edge e : edges_in_region(Box{n})) {
        if (e.min_endpoint_norm() < m) continue;
        AnnulusGeometry::EdgeInfo inf;
        inf.va = vid_of(e.a);
        inf.vb = vid_of(e.b);
        auto [f1, f2] = dual_of(e).faces();
        inf.fa = fid_of(f1);
        inf.fb = fid_of(f2);
        if (inf.va >= 0 && inf.vb >= 0) inf.flags |= AnnulusGeometry::kOpenRegion;
        if (e.min_endpoint_norm() >= m + 1) inf.flags |= AnnulusGeometry::kPrimalCircuit;
        if (inf.fa >= 0 && inf.fb >= 0) inf.flags |= AnnulusGeometry::kDualRegion;
        if (inf.fa >= 0 && inf.fb >= 0) {
            int32_t s1 = face_norm2(f1), s2 = face_norm2(f2);
            if (s1 >= 2 * m + 1 && s1 <= 2 * n - 1 && s2 >= 2 * m + 1 && s2 <= 2 * n - 1)
                inf.flags |= AnnulusGeometry::kDualCircuit;
        }
        if (!e.is_horizontal() && e.a.y == 0 && e.a.x >= 1) inf.flags |= AnnulusGeometry::kRayPrimal;
        if (e.is_horizontal() && e.a.y == 0 && e.a.x >= 0) inf.flags |= AnnulusGeometry::kRayDual;

        int32_t idx = static_cast<int32_t>(g.edges.size());
        g.edges.push_back(e);
        g.info.push_back(inf);

        if (inf.va >= 0 && inf.vb >= 0) {
            if (e.is_horizontal()) {
                g.vert_nbr[inf.va][0] = inf.vb;
                g.vert_edge[inf.va][0] = idx;
                g.vert_nbr[inf.vb][2] = inf.va;
                g.vert_edge[inf.vb][2] = idx;
            } else {
                g.vert_nbr[inf.va][1] = inf.vb;
                g.vert_edge[inf.va][1] = idx;
                g.vert_nbr[inf.vb][3] = inf.va;
                g.vert_edge[inf.vb][3] = idx;
            }
        }
        if (inf.fa >= 0 && inf.fb >= 0) {
            // horizontal primal edge: fa = (x, y-1) is south of fb = (x, y)
            // vertical primal edge:   fa = (x-1, y) is west of fb = (x, y)
            if (e.is_horizontal()) {
                g.face_nbr[inf.fa][1] = inf.fb;
                g.face_edge[inf.fa][1] = idx;
                g.face_nbr[inf.fb][3] = inf.fa;
                g.face_edge[inf.fb][3] = idx;
            } else {
                g.face_nbr[inf.fa][0] = inf.fb;
                g.face_edge[inf.fa][0] = idx;
                g.face_nbr[inf.fb][2] = inf.fa;
                g.face_edge[inf.fb][2] = idx;
            }
        }
    }

    g.vertex_inner.resize(g.vertices.size());
    g.vertex_outer.resize(g.vertices.size());
    g.vertex_tangent.assign(g.vertices.size(), 0);
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        int32_t s = sup_norm(g.vertices[i]);
        g.vertex_inner[i] = (s == m);
        g.vertex_outer[i] = (s == n);
        if (s == m)
            g.vertex_tangent[i] =
                tangent_from_pos(2 * g.vertices[i].x, 2 * g.vertices[i].y, 2 * m);
    }
    g.face_inner.resize(g.faces.size());
    g.face_outer.resize(g.faces.size());
    g.face_tangent.assign(g.faces.size(), 0);
    for (size_t i = 0; i < g.faces.size(); ++i) {
        int32_t s2 = face_norm2(g.faces[i]);
        g.face_inner[i] = (s2 == 2 * m + 1);
        g.face_outer[i] = (s2 == 2 * n + 1);
        if (s2 == 2 * m + 1)
            g.face_tangent[i] = tangent_from_pos(2 * g.faces[i].x + 1, 2 * g.faces[i].y + 1,
                                                 2 * m + 1);
    }

    // merged cyclic anchor order over the inner vertex ring and inner face ring
    struct AnchorRef {
        BoundaryPos pos;
        bool is_face;
        int32_t id;
    };
    std::vector<AnchorRef> anchors;
    for (size_t i = 0; i < g.vertices.size(); ++i)
        if (g.vertex_inner[i])
            anchors.push_back({boundary_pos(g.vertices[i]), false, static_cast<int32_t>(i)});
    for (size_t i = 0; i < g.faces.size(); ++i)
        if (g.face_inner[i])
            anchors.push_back({boundary_pos(g.faces[i]), true, static_cast<int32_t>(i)});
    std::sort(anchors.begin(), anchors.end(),
              [](const AnchorRef& a, const AnchorRef& b) { return a.pos < b.pos; });

    g.vertex_anchor_rank.assign(g.vertices.size(), -1);
    g.face_anchor_rank.assign(g.faces.size(), -1);
    g.anchor_count = static_cast<int32_t>(anchors.size());
    for (int32_t r = 0; r < g.anchor_count; ++r) {
        if (anchors[r].is_face) {
            g.face_anchor_rank[anchors[r].id] = r;
            g.closed_anchors.push_back(anchors[r].id);
        } else {
            g.vertex_anchor_rank[anchors[r].id] = r;
            g.open_anchors.push_back(anchors[r].id);
        }
    }
    return g;
}

}  // namespace

int32_t AnnulusGeometry::vertex_id(Vertex v) const {
    if (sup_norm(v) > n) return -1;
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == v) return static_cast<int32_t>(i);
    return -1;
}

int32_t AnnulusGeometry::face_id(Face f) const {
    for (size_t i = 0; i < faces.size(); ++i)
        if (faces[i] == f) return static_cast<int32_t>(i);
    return -1;
}

const AnnulusGeometry& AnnulusGeometry::get(int32_t m, int32_t n) {
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mu);
    auto key = std::make_pair(m, n);
    auto it = c.entries.find(key);
    if (it == c.entries.end())
        it = c.entries.emplace(key, std::make_unique<AnnulusGeometry>(build_geometry(m, n))).first;
    return *it->second;
}

namespace {

/// Component flags: does any admissible-edge component contain both rings?
bool rings_connected(const std::vector<uint8_t>& inner, const std::vector<uint8_t>& outer,
                     size_t count, detail::UnionFind& uf) {
    std::vector<uint8_t> flag(count, 0);
    for (size_t i = 0; i < count; ++i) {
        if (!inner[i] && !outer[i]) continue;
        int32_t root = uf.find(static_cast<int32_t>(i));
        flag[root] |= inner[i] ? 1 : 2;
        if (flag[root] == 3) return true;
    }
    return false;
}

}  // namespace

bool open_crossing(const AnnulusGeometry& g, const EdgePredicate& open) {
    detail::UnionFind uf(g.vertices.size());
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& inf = g.info[i];
        if ((inf.flags & AnnulusGeometry::kOpenRegion) && open(i)) uf.unite(inf.va, inf.vb);
    }
    return rings_connected(g.vertex_inner, g.vertex_outer, g.vertices.size(), uf);
}

bool closed_crossing(const AnnulusGeometry& g, const EdgePredicate& closed) {
    detail::UnionFind uf(g.faces.size());
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& inf = g.info[i];
        if ((inf.flags & AnnulusGeometry::kDualRegion) && closed(i)) uf.unite(inf.fa, inf.fb);
    }
    return rings_connected(g.face_inner, g.face_outer, g.faces.size(), uf);
}

namespace {

/// Shared engine for primal/dual circuits around the origin with a defect
/// budget, on the 2-sheet lift over the cut ray.
struct CircuitSpec {
    uint8_t region_flag;
    uint8_t ray_flag;
    bool primal;
};

bool circuit_with_defects(const AnnulusGeometry& g, const EdgePredicate& good, int defects,
                          const CircuitSpec& spec) {
    const size_t nodes = spec.primal ? g.vertices.size() : g.faces.size();
    auto end_a = [&](size_t i) { return spec.primal ? g.info[i].va : g.info[i].fa; };
    auto end_b = [&](size_t i) { return spec.primal ? g.info[i].vb : g.info[i].fb; };

    detail::UnionFind uf(2 * nodes);
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& inf = g.info[i];
        if (!(inf.flags & spec.region_flag) || !good(i)) continue;
        int32_t a = end_a(i), b = end_b(i);
        int32_t c = (inf.flags & spec.ray_flag) ? 1 : 0;
        uf.unite(2 * a, 2 * b + c);
        uf.unite(2 * a + 1, 2 * b + (1 - c));
    }
    for (size_t v = 0; v < nodes; ++v)
        if (uf.same(static_cast<int32_t>(2 * v), static_cast<int32_t>(2 * v + 1))) return true;
    if (defects == 0) return false;

    if (defects == 1) {
        for (size_t i = 0; i < g.edges.size(); ++i) {
            const auto& inf = g.info[i];
            if (!(inf.flags & spec.region_flag) || good(i)) continue;
            int32_t a = end_a(i), b = end_b(i);
            int32_t c = (inf.flags & spec.ray_flag) ? 1 : 0;
            if (uf.same(2 * a, 2 * b + (1 - c))) return true;
        }
        return false;
    }

    // general budget: 0/1-BFS on the lift from every ray-adjacent node
    std::vector<int32_t> ray_nodes;
    for (size_t i = 0; i < g.edges.size(); ++i) {
        const auto& inf = g.info[i];
        if ((inf.flags & spec.region_flag) && (inf.flags & spec.ray_flag)) {
            ray_nodes.push_back(end_a(i));
            ray_nodes.push_back(end_b(i));
        }
    }
    std::sort(ray_nodes.begin(), ray_nodes.end());
    ray_nodes.erase(std::unique(ray_nodes.begin(), ray_nodes.end()), ray_nodes.end());

    const auto& nbrs = spec.primal ? g.vert_nbr : g.face_nbr;
    const auto& eids = spec.primal ? g.vert_edge : g.face_edge;
    std::vector<int32_t> dist(2 * nodes);
    for (int32_t start : ray_nodes) {
        std::fill(dist.begin(), dist.end(), INT32_MAX);
        std::deque<int32_t> dq;
        dist[2 * start] = 0;
        dq.push_back(2 * start);
        while (!dq.empty()) {
            int32_t cur = dq.front();
            dq.pop_front();
            int32_t node = cur / 2, sheet = cur % 2;
            for (int d = 0; d < 4; ++d) {
                int32_t nb = nbrs[node][d], ei = eids[node][d];
                if (nb < 0) continue;
                const auto& inf = g.info[ei];
                if (!(inf.flags & spec.region_flag)) continue;
                int cost = good(ei) ? 0 : 1;
                int32_t nsheet = (inf.flags & spec.ray_flag) ? 1 - sheet : sheet;
                int32_t nxt = 2 * nb + nsheet;
                int32_t nd = dist[cur] + cost;
                if (nd < dist[nxt]) {
                    dist[nxt] = nd;
                    if (cost == 0)
                        dq.push_front(nxt);
                    else
                        dq.push_back(nxt);
                }
            }
        }
        if (dist[2 * start + 1] <= defects) return true;
    }
    return false;
}

}  // namespace

bool primal_circuit(const AnnulusGeometry& g, const EdgePredicate& open, int defects) {
    return circuit_with_defects(
        g, open, defects, {AnnulusGeometry::kPrimalCircuit, AnnulusGeometry::kRayPrimal, true});
}

bool dual_circuit(const AnnulusGeometry& g, const EdgePredicate& closed, int defects) {
    return circuit_with_defects(g, closed, defects,
                                {AnnulusGeometry::kDualCircuit, AnnulusGeometry::kRayDual, false});
}

namespace {

/// Unit-capacity undirected max flow between the two rings, capped.
/// Flow per edge is -1, 0 or +1 relative to (end_a -> end_b).
int ring_maxflow(const AnnulusGeometry& g, const EdgePredicate& usable, int cap, bool primal,
                 uint8_t region_flag) {
    const size_t nodes = primal ? g.vertices.size() : g.faces.size();
    const auto& nbrs = primal ? g.vert_nbr : g.face_nbr;
    const auto& eids = primal ? g.vert_edge : g.face_edge;
    const auto& inner = primal ? g.vertex_inner : g.face_inner;
    const auto& outer = primal ? g.vertex_outer : g.face_outer;

    std::vector<int8_t> flow(g.edges.size(), 0);
    std::vector<int32_t> prev_node(nodes), prev_edge(nodes);
    std::vector<uint8_t> seen(nodes);

    int total = 0;
    while (total < cap) {
        std::fill(seen.begin(), seen.end(), 0);
        std::deque<int32_t> q;
        for (size_t v = 0; v < nodes; ++v) {
            if (inner[v]) {
                seen[v] = 1;
                prev_node[v] = -1;
                q.push_back(static_cast<int32_t>(v));
            }
        }
        int32_t reached = -1;
        while (!q.empty() && reached < 0) {
            int32_t v = q.front();
            q.pop_front();
            if (outer[v]) {
                reached = v;
                break;
            }
            for (int d = 0; d < 4 && reached < 0; ++d) {
                int32_t nb = nbrs[v][d], ei = eids[v][d];
                if (nb < 0 || seen[nb]) continue;
                const auto& inf = g.info[ei];
                if (!(inf.flags & region_flag) || !usable(ei)) continue;
                bool forward = (primal ? inf.va : inf.fa) == v;
                int8_t f = flow[ei];
                if ((forward && f >= 1) || (!forward && f <= -1)) continue;
                seen[nb] = 1;
                prev_node[nb] = v;
                prev_edge[nb] = ei;
                q.push_back(nb);
            }
        }
        if (reached < 0) break;
        // trace back, flipping flow
        int32_t v = reached;
        while (prev_node[v] != -1) {
            int32_t ei = prev_edge[v];
            const auto& inf = g.info[ei];
            int32_t from = prev_node[v];
            bool forward = (primal ? inf.va : inf.fa) == from;
            flow[ei] += forward ? 1 : -1;
            v = from;
        }
        ++total;
    }
    return total;
}

}  // namespace

int count_disjoint_crossings_open(const AnnulusGeometry& g, const EdgePredicate& open, int cap) {
    return ring_maxflow(g, open, cap, true, AnnulusGeometry::kOpenRegion);
}

int count_disjoint_crossings_closed(const AnnulusGeometry& g, const EdgePredicate& closed,
                                    int cap) {
    return ring_maxflow(g, closed, cap, false, AnnulusGeometry::kDualRegion);
}

namespace {

/// Depth-first search preferring the rightmost turn (right, straight, left,
/// back) so the found crossing hugs the clockwise flank of whatever is
/// reachable. Plain visited marks; the stack is the path.
bool extremal_crossing(const AnnulusGeometry& g, int32_t start, uint8_t start_dir, bool primal,
                       uint8_t region_flag, const EdgePredicate& usable, ArmPath& out) {
    const size_t nodes = primal ? g.vertices.size() : g.faces.size();
    const auto& nbrs = primal ? g.vert_nbr : g.face_nbr;
    const auto& eids = primal ? g.vert_edge : g.face_edge;
    const auto& outer = primal ? g.vertex_outer : g.face_outer;

    struct Frame {
        int32_t node;
        uint8_t arrival;
        uint8_t next_pref;
        int32_t via_edge;
    };
    std::vector<Frame> stack;
    std::vector<uint8_t> visited(nodes, 0);
    stack.push_back({start, start_dir, 0, -1});
    visited[start] = 1;

    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_pref >= 4) {
            stack.pop_back();
            continue;
        }
        // preference order: right turn, straight, left turn, reverse
        int d = (f.arrival + 3 + f.next_pref) % 4;
        ++f.next_pref;
        int32_t nb = nbrs[f.node][d], ei = eids[f.node][d];
        if (nb < 0 || visited[nb]) continue;
        const auto& inf = g.info[ei];
        if (!(inf.flags & region_flag) || !usable(ei)) continue;
        visited[nb] = 1;
        stack.push_back({nb, static_cast<uint8_t>(d), 0, ei});
        if (outer[nb]) {
            out.edge_ids.clear();
            for (const Frame& fr : stack)
                if (fr.via_edge >= 0) out.edge_ids.push_back(fr.via_edge);
            return true;
        }
    }
    return false;
}

}  // namespace

bool extremal_crossing_from_vertex(const AnnulusGeometry& g, int32_t anchor_vid,
                                   const EdgePredicate& usable, ArmPath& out) {
    out.anchor_rank = g.vertex_anchor_rank[anchor_vid];
    return extremal_crossing(g, anchor_vid, g.vertex_tangent[anchor_vid], true,
                             AnnulusGeometry::kOpenRegion, usable, out);
}

bool extremal_crossing_from_face(const AnnulusGeometry& g, int32_t anchor_fid,
                                 const EdgePredicate& usable, ArmPath& out) {
    out.anchor_rank = g.face_anchor_rank[anchor_fid];
    return extremal_crossing(g, anchor_fid, g.face_tangent[anchor_fid], false,
                             AnnulusGeometry::kDualRegion, usable, out);
}

}  // namespace percolab
