#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/weights.hpp"

namespace percolab {

namespace detail {

class UnionFind {
  public:
    explicit UnionFind(size_t n) : parent_(n) {
        for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<int32_t>(i);
    }
    int32_t find(int32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(int32_t a, int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }
    bool same(int32_t a, int32_t b) { return find(a) == find(b); }

  private:
    std::vector<int32_t> parent_;
};

}  // namespace detail

/// Precomputed geometry of the closed annulus between |v| = m and |v| = n.
///
/// Conventions, used consistently by detectors, oracles and circuits:
///  - open (primal) paths live on vertices with m <= |v| <= n; open arms run
///    from the ring |v| = m to the ring |v| = n;
///  - closed (dual) paths live on faces with centre norm in [m+1/2, n+1/2];
///    closed arms run from the face ring m+1/2 to the face ring n+1/2. Every
///    dual step then crosses a primal edge with both endpoints in [m, n], so
///    open paths and closed paths can never cross at equal parameters;
///  - primal circuits around 0 use vertices of B(n) \ B(m), i.e. [m+1, n];
///  - dual circuits around 0 use faces with centre norm in [m+1/2, n-1/2].
///
/// Winding is detected by cutting along the ray {y = 1/4, x > 0}: a primal
/// edge crosses the cut iff it is the vertical edge {(x,0),(x,1)} with x >= 1,
/// a dual edge iff its primal edge is horizontal {(x,0),(x+1,0)} with x >= 0.
struct AnnulusGeometry {
    // edge flag bits
    static constexpr uint8_t kOpenRegion = 1;     // both endpoints in [m, n]
    static constexpr uint8_t kDualRegion = 2;     // both faces in [m+1/2, n+1/2]
    static constexpr uint8_t kDualCircuit = 4;    // both faces in [m+1/2, n-1/2]
    static constexpr uint8_t kRayPrimal = 8;      // primal edge crosses the cut
    static constexpr uint8_t kRayDual = 16;       // dual edge crosses the cut
    static constexpr uint8_t kPrimalCircuit = 32; // both endpoints in [m+1, n]

    int32_t m = 1, n = 2;

    std::vector<Edge> edges;  // every edge of B(n) with min endpoint norm >= m
    struct EdgeInfo {
        int32_t va = -1, vb = -1;  // vertex ids, -1 when outside the vertex region
        int32_t fa = -1, fb = -1;  // face ids, -1 when outside the face region
        uint8_t flags = 0;
    };
    std::vector<EdgeInfo> info;

    std::vector<Vertex> vertices;  // id -> vertex, norms in [m, n]
    std::vector<Face> faces;       // id -> face, centre norms in [m+1/2, n+1/2]

    // per-node neighbour/edge handles by direction 0=E,1=N,2=W,3=S (-1 = none)
    std::vector<std::array<int32_t, 4>> vert_nbr, vert_edge;
    std::vector<std::array<int32_t, 4>> face_nbr, face_edge;

    std::vector<uint8_t> vertex_inner, vertex_outer;  // |v| == m / |v| == n
    std::vector<uint8_t> face_inner, face_outer;      // norm m+1/2 / n+1/2

    // anchors on the inner rings, merged into one exact cyclic order
    std::vector<int32_t> open_anchors;        // vertex ids, ascending boundary order
    std::vector<int32_t> closed_anchors;      // face ids, ascending boundary order
    std::vector<int32_t> vertex_anchor_rank;  // per vertex id, -1 if not an anchor
    std::vector<int32_t> face_anchor_rank;
    int32_t anchor_count = 0;

    std::vector<uint8_t> vertex_tangent;  // ccw ring tangent direction at |v| == m
    std::vector<uint8_t> face_tangent;    // same for the inner face ring

    int32_t vertex_id(Vertex v) const;
    int32_t face_id(Face f) const;

    /// Shared, lazily built and cached; geometries are immutable once built.
    static const AnnulusGeometry& get(int32_t m, int32_t n);
};

/// One sampled configuration on an annulus: the weight of every region edge.
struct AnnulusSample {
    const AnnulusGeometry* geo = nullptr;
    std::vector<double> weight;

    void fill(const AnnulusGeometry& g, const WeightField& field) {
        geo = &g;
        weight.resize(g.edges.size());
        for (size_t i = 0; i < g.edges.size(); ++i) weight[i] = field.weight(g.edges[i]);
    }
};

/// Per-edge color predicate, indexed by position in AnnulusGeometry::edges.
using EdgePredicate = std::function<bool(size_t)>;

// --- connectivity primitives (exact, deterministic) -------------------------

/// Is there a path of admissible edges from the inner vertex ring to the outer?
bool open_crossing(const AnnulusGeometry& g, const EdgePredicate& open);

/// Is there a dual path of admissible edges from the inner face ring to the outer?
bool closed_crossing(const AnnulusGeometry& g, const EdgePredicate& closed);

/// Circuit around the origin through vertices of B(n) \ B(m), using at most
/// `defects` edges that fail the predicate.
bool primal_circuit(const AnnulusGeometry& g, const EdgePredicate& open, int defects);

/// Dual circuit around the origin through faces of [m+1/2, n-1/2], with defects.
bool dual_circuit(const AnnulusGeometry& g, const EdgePredicate& closed, int defects);

/// Maximum number of edge-disjoint inner-to-outer paths, capped at `cap`.
int count_disjoint_crossings_open(const AnnulusGeometry& g, const EdgePredicate& open, int cap);
int count_disjoint_crossings_closed(const AnnulusGeometry& g, const EdgePredicate& closed, int cap);

// --- extremal path search ----------------------------------------------------

/// A crossing found by the extremal search: the anchor's cyclic rank plus the
/// region edges it occupies.
struct ArmPath {
    int32_t anchor_rank = -1;
    std::vector<int32_t> edge_ids;
};

/// Clockwise-extremal crossing from one anchor: depth-first search preferring
/// the rightmost turn, so the path hugs the clockwise side of the annulus.
/// `usable(e)` must already account for color, region and consumed edges.
/// Returns false if no crossing starts at this anchor.
bool extremal_crossing_from_vertex(const AnnulusGeometry& g, int32_t anchor_vid,
                                   const EdgePredicate& usable, ArmPath& out);
bool extremal_crossing_from_face(const AnnulusGeometry& g, int32_t anchor_fid,
                                 const EdgePredicate& usable, ArmPath& out);

}  // namespace percolab
