#include "percolab/lattice.hpp"

namespace percolab {

std::vector<Vertex> boundary_vertices(Box box) {
    const int32_t n = box.radius;
    if (n == 0) return {Vertex{0, 0}};
    std::vector<Vertex> out;
    out.reserve(static_cast<size_t>(8) * n);
    for (int32_t x = -n; x <= n; ++x) {
        for (int32_t y = -n; y <= n; ++y) {
            if (std::abs(x) == n || std::abs(y) == n) out.push_back(Vertex{x, y});
        }
    }
    return out;
}

std::vector<Edge> edges_in_region(Box box) {
    const int32_t n = box.radius;
    std::vector<Edge> out;
    if (n == 0) return out;
    out.reserve(static_cast<size_t>(2) * (2 * n + 1) * (2 * n));
    for (int32_t y = -n; y <= n; ++y) {
        for (int32_t x = -n; x <= n; ++x) {
            if (x < n) out.push_back(Edge::horizontal({x, y}));
            if (y < n) out.push_back(Edge::vertical({x, y}));
        }
    }
    return out;
}

std::vector<Edge> edges_in_region(Annulus ann) {
    std::vector<Edge> out;
    for (Edge e : edges_in_region(Box{ann.outer})) {
        if (ann.contains(e.a) && ann.contains(e.b)) out.push_back(e);
    }
    return out;
}

namespace {

// Arc length along the square ring of doubled radius r, counterclockwise from (r, 0).
int64_t ring_walk(int64_t px, int64_t py, int64_t r) {
    if (px == r && py >= 0) return py;
    if (py == r) return 2 * r - px;
    if (px == -r) return 4 * r - py;
    if (py == -r) return 6 * r + px;
    return 8 * r + py;  // px == r, py < 0
}

}  // namespace

BoundaryPos boundary_pos(Vertex v) {
    int64_t r = 2 * static_cast<int64_t>(sup_norm(v));
    if (r == 0) throw std::invalid_argument("boundary_pos: origin has no ring position");
    return BoundaryPos{ring_walk(2 * v.x, 2 * v.y, r), r, false};
}

BoundaryPos boundary_pos(Face f) {
    int64_t cx = 2 * static_cast<int64_t>(f.x) + 1;
    int64_t cy = 2 * static_cast<int64_t>(f.y) + 1;
    int64_t r = face_norm2(f);
    return BoundaryPos{ring_walk(cx, cy, r), r, true};
}

}  // namespace percolab
