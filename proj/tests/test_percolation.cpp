#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "percolab/percolation.hpp"

using namespace percolab;

namespace {

/// Independent reachability by recursive search (no union-find).
bool brute_open_lr(const WeightField& field, double p, int32_t m, int32_t n) {
    std::vector<Vertex> stack;
    std::set<std::pair<int32_t, int32_t>> seen;
    for (int32_t y = -n; y <= n; ++y) {
        stack.push_back({-m, y});
        seen.insert({-m, y});
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        if (v.x == m) return true;
        const Vertex nbrs[4] = {{v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
        for (Vertex u : nbrs) {
            if (std::abs(u.x) > m || std::abs(u.y) > n) continue;
            if (seen.count({u.x, u.y})) continue;
            if (field.weight(Edge::between(v, u)) >= p) continue;
            seen.insert({u.x, u.y});
            stack.push_back(u);
        }
    }
    return false;
}

/// Independent circuit-with-defects search: enumerate simple cycles in the
/// closed annulus [m, n] and test winding by ray-crossing parity.
bool brute_circuit(const WeightField& field, double p, Annulus ann, CrossColor color,
                   int defects) {
    auto in_region = [&](Vertex v) {
        int32_t s = sup_norm(v);
        return s >= ann.inner && s <= ann.outer;
    };
    auto wrong_color = [&](Edge e) {
        double w = field.weight(e);
        return color == CrossColor::Open ? w >= p : w < p;
    };
    // primal circuits only (the dual case is exercised through the arms oracle)
    std::vector<Vertex> verts;
    for (int32_t y = -ann.outer; y <= ann.outer; ++y)
        for (int32_t x = -ann.outer; x <= ann.outer; ++x)
            if (in_region({x, y})) verts.push_back({x, y});

    std::function<bool(Vertex, Vertex, int, int, std::set<Vertex>&)> walk =
        [&](Vertex start, Vertex cur, int bad, int parity, std::set<Vertex>& on_path) -> bool {
        const Vertex nbrs[4] = {{cur.x + 1, cur.y}, {cur.x - 1, cur.y}, {cur.x, cur.y + 1},
                                {cur.x, cur.y - 1}};
        for (Vertex u : nbrs) {
            if (!in_region(u)) continue;
            Edge e = Edge::between(cur, u);
            int nbad = bad + (wrong_color(e) ? 1 : 0);
            if (nbad > defects) continue;
            bool crosses = !e.is_horizontal() && e.a.y == 0 && e.a.x >= 1;
            int nparity = parity ^ (crosses ? 1 : 0);
            if (u == start) {
                if (nparity == 1) return true;
                continue;
            }
            if (on_path.count(u)) continue;
            if (u < start) continue;  // canonical: cycle's minimal vertex is the start
            on_path.insert(u);
            if (walk(start, u, nbad, nparity, on_path)) return true;
            on_path.erase(u);
        }
        return false;
    };

    for (Vertex s : verts) {
        std::set<Vertex> on_path{s};
        if (walk(s, s, 0, 0, on_path)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("crossing trivial parameters") {
    WeightField field(Seed{1});
    CHECK(has_crossing(BernoulliView(field, 1.0), 4, 4, CrossColor::Open));
    CHECK(!has_crossing(BernoulliView(field, 1.0), 4, 4, CrossColor::ClosedDual));
    CHECK(!has_crossing(BernoulliView(field, 0.0), 4, 4, CrossColor::Open));
    CHECK(has_crossing(BernoulliView(field, 0.0), 4, 4, CrossColor::ClosedDual));
}

TEST_CASE("open crossings agree with brute-force path search on 1e4 samples") {
    Seed base{404};
    for (int t = 0; t < 10000; ++t) {
        WeightField field(base.derive(t));
        double p = 0.2 + 0.6 * ((t % 7) / 6.0);
        bool fast = has_crossing(BernoulliView(field, p), 2, 2, CrossColor::Open);
        CHECK(fast == brute_open_lr(field, p, 2, 2));
    }
}

TEST_CASE("rectangle duality: open LR xor closed-dual TB") {
    Seed base{2718};
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int32_t> side(1, 8);
    for (int t = 0; t < 20000; ++t) {
        WeightField field(base.derive(t));
        int32_t m = side(rng), n = side(rng);
        double p = (t % 2) ? 0.5 : 0.3 + 0.4 * ((t % 11) / 10.0);
        BernoulliView view(field, p);
        bool open_lr = has_crossing(view, m, n, CrossColor::Open, Axis::LeftRight);
        bool closed_tb = has_crossing(view, m, n, CrossColor::ClosedDual, Axis::TopBottom);
        REQUIRE(open_lr != closed_tb);
    }
}

TEST_CASE("circuit trivial cases") {
    WeightField field(Seed{11});
    Annulus ann(1, 3);
    CHECK(has_circuit(BernoulliView(field, 1.0), ann, CrossColor::Open, 0));
    CHECK(!has_circuit(BernoulliView(field, 0.0), ann, CrossColor::Open, 0));
    CHECK(has_circuit(BernoulliView(field, 0.0), ann, CrossColor::ClosedDual, 0));
    // with a defect budget covering a full inner circuit, anything passes
    CHECK(has_circuit(BernoulliView(field, 0.0), ann, CrossColor::Open, 8));
}

TEST_CASE("open circuits with defects agree with cycle enumeration on Ann(1,3)") {
    Seed base{909};
    for (int t = 0; t < 4000; ++t) {
        WeightField field(base.derive(t));
        double p = (t % 2) ? 0.5 : 0.35 + 0.3 * ((t % 5) / 4.0);
        BernoulliView view(field, p);
        Annulus ann(1, 3);
        for (int d : {0, 1}) {
            bool fast = has_circuit(view, ann, CrossColor::Open, d);
            bool slow = brute_circuit(field, p, ann, CrossColor::Open, d);
            REQUIRE(fast == slow);
        }
    }
}

TEST_CASE("has_circuit monotonicity in p and in defects") {
    Seed base{31};
    Annulus ann(2, 5);
    for (int t = 0; t < 300; ++t) {
        WeightField field(base.derive(t));
        for (double p : {0.3, 0.5, 0.7}) {
            BernoulliView lo(field, p), hi(field, p + 0.25);
            if (has_circuit(lo, ann, CrossColor::Open, 0))
                CHECK(has_circuit(hi, ann, CrossColor::Open, 0));
            for (int d = 0; d < 3; ++d)
                if (has_circuit(lo, ann, CrossColor::Open, d))
                    CHECK(has_circuit(lo, ann, CrossColor::Open, d + 1));
        }
    }
}

TEST_CASE("crossing probability estimates") {
    EstimateRecord sure = crossing_probability(1.0, 8, 8, CrossColor::Open, 500, Seed{1});
    CHECK(sure.estimate() == 1.0);

    EstimateRecord crit = crossing_probability(0.5, 24, 24, CrossColor::Open, 6000, Seed{2});
    CHECK(std::abs(crit.estimate() - 0.5) < 3.0 * crit.stderr_est() + 0.02);

    EstimateRecord super = crossing_probability(0.6, 32, 32, CrossColor::Open, 3000, Seed{3});
    CHECK(super.ci_lo > crit.ci_hi);
}

TEST_CASE("correlation length basics") {
    CHECK_THROWS_AS(correlation_length(0.5, 0.02, 100, 64, Seed{1}), std::invalid_argument);
    CHECK_THROWS_AS(correlation_length(0.4, 0.02, 100, 64, Seed{1}), std::invalid_argument);

    auto near_one = correlation_length(0.99, 0.02, 3000, 16, Seed{7});
    CHECK(near_one.length == 1);
    CHECK(!near_one.exceeded);

    auto strong = correlation_length(0.9, 0.02, 1500, 64, Seed{8});
    auto weak = correlation_length(0.6, 0.02, 1500, 64, Seed{8});
    CHECK(strong.length <= weak.length);
}

TEST_CASE("p_hat is reproducible and decreasing in n") {
    PHatResult a = p_hat(1, 0.02, 800, 0.01, Seed{55});
    PHatResult b = p_hat(1, 0.02, 800, 0.01, Seed{55});
    CHECK(a.lo == b.lo);
    CHECK(a.hi == b.hi);
    CHECK(a.mid() > 0.5);
    CHECK(a.hi - a.lo <= 0.01);

    PHatResult small_n = p_hat(2, 0.02, 1200, 0.01, Seed{56});
    PHatResult large_n = p_hat(16, 0.02, 1200, 0.01, Seed{57});
    CHECK(large_n.mid() <= small_n.mid() + 0.02);
    CHECK(large_n.mid() > 0.5);
}

TEST_CASE("closed diameter tail behaviour") {
    EstimateRecord none = closed_diameter_tail(1.0, 16, 400, Seed{3});
    CHECK(none.estimate() == 0.0);

    // the exponential decay in n needs n/10 well past the closed correlation
    // length; at p = 0.9 the desk scales already separate cleanly
    EstimateRecord big16 = closed_diameter_tail(0.9, 16, 1500, Seed{4});
    EstimateRecord big64 = closed_diameter_tail(0.9, 64, 1500, Seed{5});
    CHECK(big64.ci_hi < big16.ci_lo);

    EstimateRecord lower_p = closed_diameter_tail(0.55, 32, 1500, Seed{6});
    EstimateRecord higher_p = closed_diameter_tail(0.75, 32, 1500, Seed{6});
    CHECK(higher_p.estimate() <= lower_p.estimate());
}
