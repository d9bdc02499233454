#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <vector>

namespace percolab {

/// Vertex of the square lattice Z^2.
struct Vertex {
    int32_t x = 0;
    int32_t y = 0;

    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Sup-norm distance from the origin; boxes and annuli are defined in this norm.
inline int32_t sup_norm(Vertex v) {
    int32_t ax = std::abs(v.x), ay = std::abs(v.y);
    return ax > ay ? ax : ay;
}

/// Nearest-neighbour bond, stored canonically: `a` is the lexicographically
/// smaller endpoint, so {u,v} and {v,u} construct the identical object.
/// A lattice edge is either horizontal (b = a + e1) or vertical (b = a + e2).
struct Edge {
    Vertex a, b;

    Edge() = default;

    static Edge between(Vertex u, Vertex v) {
        int32_t dx = v.x - u.x, dy = v.y - u.y;
        if (std::abs(dx) + std::abs(dy) != 1)
            throw std::invalid_argument("Edge::between: endpoints are not nearest neighbours");
        Edge e;
        if (v < u) std::swap(u, v);
        e.a = u;
        e.b = v;
        return e;
    }

    static Edge horizontal(Vertex left) { return between(left, {left.x + 1, left.y}); }
    static Edge vertical(Vertex bottom) { return between(bottom, {bottom.x, bottom.y + 1}); }

    bool is_horizontal() const { return b.y == a.y; }

    /// Stable 64-bit identifier; also the key for the weight function.
    /// Coordinates are zig-zag encoded into 30 bits each plus an orientation
    /// bit; coordinates are assumed below 2^29 in magnitude.
    uint64_t key() const {
        auto zig = [](int32_t v) -> uint64_t {
            return (static_cast<uint32_t>(v) << 1) ^ static_cast<uint32_t>(v >> 31);
        };
        return (zig(a.x) << 31) | (zig(a.y) << 1) | (is_horizontal() ? 1u : 0u);
    }

    int32_t min_endpoint_norm() const {
        int32_t na = sup_norm(a), nb = sup_norm(b);
        return na < nb ? na : nb;
    }
    int32_t max_endpoint_norm() const {
        int32_t na = sup_norm(a), nb = sup_norm(b);
        return na > nb ? na : nb;
    }

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Face of the lattice, identified by its lower-left corner. The centre sits
/// at (x + 1/2, y + 1/2); dual vertices are faces, the half-integer offset is
/// implicit so all arithmetic stays integral.
struct Face {
    int32_t x = 0;
    int32_t y = 0;

    friend bool operator==(const Face&, const Face&) = default;
    friend auto operator<=>(const Face&, const Face&) = default;
};

/// Twice the sup-norm distance of the face centre from the origin (odd integer).
inline int32_t face_norm2(Face f) {
    int64_t cx = 2 * static_cast<int64_t>(f.x) + 1;
    int64_t cy = 2 * static_cast<int64_t>(f.y) + 1;
    int64_t ax = std::abs(cx), ay = std::abs(cy);
    return static_cast<int32_t>(ax > ay ? ax : ay);
}

/// Dual bond: bisects exactly one primal edge and inherits its weight.
struct DualEdge {
    Edge primal;

    /// The two faces joined by this dual edge.
    /// Horizontal primal edge {(x,y),(x+1,y)} -> faces (x,y-1) and (x,y).
    /// Vertical primal edge {(x,y),(x,y+1)} -> faces (x-1,y) and (x,y).
    std::pair<Face, Face> faces() const {
        if (primal.is_horizontal())
            return {Face{primal.a.x, primal.a.y - 1}, Face{primal.a.x, primal.a.y}};
        return {Face{primal.a.x - 1, primal.a.y}, Face{primal.a.x, primal.a.y}};
    }

    friend bool operator==(const DualEdge&, const DualEdge&) = default;
};

inline DualEdge dual_of(Edge e) { return DualEdge{e}; }
inline Edge primal_of(DualEdge d) { return d.primal; }

/// The box B(n) = [-n,n]^2.
struct Box {
    int32_t radius = 0;

    explicit Box(int32_t n) : radius(n) {
        if (n < 0) throw std::invalid_argument("Box: radius must be nonnegative");
    }
    bool contains(Vertex v) const { return sup_norm(v) <= radius; }
};

/// Ann(m,n) = B(n) \ B(m). Strict membership: m < |v| <= n.
struct Annulus {
    int32_t inner = 1;
    int32_t outer = 2;

    Annulus(int32_t m, int32_t n) : inner(m), outer(n) {
        if (m < 1 || m >= n) throw std::invalid_argument("Annulus: need 1 <= m < n");
    }
    bool contains(Vertex v) const {
        int32_t s = sup_norm(v);
        return s > inner && s <= outer;
    }
    /// Closed membership m <= |v| <= n; arm paths may start on the inner boundary.
    bool contains_closed(Vertex v) const {
        int32_t s = sup_norm(v);
        return s >= inner && s <= outer;
    }
};

/// Vertices of B(n) adjacent to its complement: the ring |v| = n (just {0} for n = 0).
std::vector<Vertex> boundary_vertices(Box box);

/// Every edge with both endpoints in the region, in a fixed deterministic order.
std::vector<Edge> edges_in_region(Box box);
std::vector<Edge> edges_in_region(Annulus ann);

// --- boundary cyclic order -------------------------------------------------
//
// Arm anchors live on two concentric square rings: lattice vertices on the
// ring |v| = m and faces on the ring of centre norm m - 1/2. Their cyclic
// order around the origin is compared exactly: each point is mapped to its
// counterclockwise arc-length along its own ring (starting from the positive
// x-axis) and positions are compared as exact fractions of the perimeters.
// A vertex and a face can be exactly collinear with the origin (the diagonal
// corners); the fixed convention is that the face precedes the vertex.

struct BoundaryPos {
    int64_t t = 0;     // arc length along the ring, doubled coordinates
    int64_t ring = 0;  // ring "radius" in doubled coordinates (perimeter = 8*ring)
    bool is_face = false;

    friend bool operator==(const BoundaryPos& p, const BoundaryPos& q) {
        return p.t * q.ring == q.t * p.ring && p.is_face == q.is_face;
    }
    friend bool operator<(const BoundaryPos& p, const BoundaryPos& q) {
        int64_t lhs = p.t * q.ring, rhs = q.t * p.ring;
        if (lhs != rhs) return lhs < rhs;
        return p.is_face && !q.is_face;
    }
};

BoundaryPos boundary_pos(Vertex v);
BoundaryPos boundary_pos(Face f);

}  // namespace percolab

template <>
struct std::hash<percolab::Vertex> {
    size_t operator()(const percolab::Vertex& v) const {
        uint64_t h = (static_cast<uint64_t>(static_cast<uint32_t>(v.x)) << 32) |
                     static_cast<uint32_t>(v.y);
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 33;
        return static_cast<size_t>(h);
    }
};

template <>
struct std::hash<percolab::Edge> {
    size_t operator()(const percolab::Edge& e) const {
        uint64_t h = e.key();
        h ^= h >> 33;
        h *= 0xc4ceb9fe1a85ec53ULL;
        h ^= h >> 33;
        return static_cast<size_t>(h);
    }
};
