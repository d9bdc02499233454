#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "percolab/arms.hpp"
#include "percolab/percolation.hpp"

using namespace percolab;

namespace {

ColorSequence cs(const char* s) { return ColorSequence::parse(s); }

}  // namespace

TEST_CASE("reduction collapses long closed runs to two") {
    CHECK(reduce(cs("OCCCOC")).equals_cyclically(cs("OCCOC")));
    CHECK(reduce(cs("OCOC")) == cs("OCOC"));
    CHECK(reduce(cs("O")) == cs("O"));
    CHECK(reduce(cs("OCCCCC")).equals_cyclically(cs("OCC")));  // sigma_5
    CHECK(reduce(cs("C")) == cs("C"));
    CHECK(reduce(cs("CC")) == cs("CC"));
    CHECK(reduce(cs("CCCC")).equals_cyclically(cs("CC")));
    // a run wrapping the end of the word is one run
    CHECK(reduce(cs("CCOCC")).equals_cyclically(cs("OCC")));
    CHECK(reduce(cs("COC")).equals_cyclically(cs("COC")));
    CHECK(reduce(sigma_k(5)).equals_cyclically(cs("OCC")));
    CHECK(sigma_hat_k(2) == cs("CC"));
}

TEST_CASE("color sequence parsing and rotation") {
    CHECK(cs("OCC").count_open() == 1);
    CHECK(cs("OCC").count_closed() == 2);
    CHECK_THROWS_AS(ColorSequence::parse("OXC"), std::invalid_argument);
    CHECK_THROWS_AS(ColorSequence::parse(""), std::invalid_argument);
    CHECK(cs("OCOCC").equals_cyclically(cs("COCCO")));
    CHECK(!cs("OCOCC").equals_cyclically(cs("OOCCC")));
}

TEST_CASE("trivial saturated configurations") {
    WeightField field(Seed{3});
    // all edges open at p = 1
    CHECK(detect_arms(field, {cs("OOOO"), 1, 8, 1.0, 1.0}));
    CHECK(!detect_arms(field, {cs("OC"), 1, 8, 1.0, 1.0}));
    // all closed at p = 0
    CHECK(detect_arms(field, {cs("CC"), 1, 8, 0.0, 0.0}));
    CHECK(!detect_arms(field, {cs("O"), 1, 8, 0.0, 0.0}));
    CHECK_THROWS_AS(detect_arms(field, {cs("OC"), 4, 2, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("oracle gate: detector equals brute force on Ann(1,3)") {
    const std::vector<ColorSequence> sigmas = {cs("O"), cs("C"),  cs("OC"),
                                               cs("OCC"), cs("OCOC"), cs("CC")};
    Seed base{60601};
    int positives = 0;
    for (int t = 0; t < 3000; ++t) {
        WeightField field(base.derive(t));
        for (const auto& sigma : sigmas) {
            ArmEventSpec spec{sigma, 1, 3, 0.5, 0.5};
            bool fast = detect_arms(field, spec);
            bool slow = brute_force_arms(field, spec);
            if (fast) ++positives;
            REQUIRE(fast == slow);
        }
    }
    CHECK(positives > 0);
}

TEST_CASE("oracle gate at other equal parameters and wider annuli") {
    const std::vector<ColorSequence> sigmas = {cs("OO"), cs("OCOC"), cs("OCC"), cs("CCO"),
                                               cs("OCOCC")};
    Seed base{70707};
    for (int t = 0; t < 500; ++t) {
        WeightField field(base.derive(t));
        double pq = 0.35 + 0.3 * ((t % 7) / 6.0);
        for (const auto& sigma : sigmas) {
            ArmEventSpec spec{sigma, 1, 4, pq, pq};
            REQUIRE(detect_arms(field, spec) == brute_force_arms(field, spec));
        }
    }
}

TEST_CASE("oracle gate: adjacent same-color pairs and denser annuli") {
    // OOCC and OCOC are distinct cyclic classes; both must track the oracle
    const std::vector<ColorSequence> sigmas = {cs("OOCC"), cs("OCOC"), cs("OCOCC"), cs("OOC"),
                                               cs("CCC")};
    Seed base{515151};
    for (int t = 0; t < 400; ++t) {
        WeightField field(base.derive(t));
        double pq = 0.4 + 0.2 * ((t % 5) / 4.0);
        for (const auto& sigma : sigmas) {
            ArmEventSpec spec{sigma, 2, 4, pq, pq};
            REQUIRE(detect_arms(field, spec) == brute_force_arms(field, spec));
        }
    }
}

TEST_CASE("cyclic invariance of the detector") {
    Seed base{12};
    for (int t = 0; t < 400; ++t) {
        WeightField field(base.derive(t));
        for (const char* word : {"OCOC", "OCC", "OCOCC"}) {
            ColorSequence sigma = cs(word);
            bool ref = detect_arms(field, {sigma, 1, 5, 0.5, 0.5});
            for (size_t k = 1; k < sigma.size(); ++k)
                CHECK(detect_arms(field, {sigma.rotated(k), 1, 5, 0.5, 0.5}) == ref);
        }
    }
}

TEST_CASE("subsequence monotonicity, in particular A_sigma implies A_reduced") {
    Seed base{900};
    for (int t = 0; t < 400; ++t) {
        WeightField field(base.derive(t));
        // sigma = OCCC reduces to OCC; also check dropping an O from OCOC
        if (detect_arms(field, {cs("OCCC"), 1, 5, 0.5, 0.5}))
            CHECK(detect_arms(field, {cs("OCC"), 1, 5, 0.5, 0.5}));
        if (detect_arms(field, {cs("OCOC"), 1, 5, 0.5, 0.5}))
            CHECK(detect_arms(field, {cs("OCC"), 1, 5, 0.5, 0.5}));
        if (detect_arms(field, {cs("OCOCC"), 1, 6, 0.5, 0.5}))
            CHECK(detect_arms(field, {cs("OCOC"), 1, 6, 0.5, 0.5}));
    }
}

TEST_CASE("parameter monotonicity of detection") {
    Seed base{4242};
    for (int t = 0; t < 300; ++t) {
        WeightField field(base.derive(t));
        for (const char* word : {"OC", "OCC", "O", "C"}) {
            ColorSequence sigma = cs(word);
            if (detect_arms(field, {sigma, 1, 4, 0.5, 0.5})) {
                CHECK(detect_arms(field, {sigma, 1, 4, 0.55, 0.5}));
                CHECK(detect_arms(field, {sigma, 1, 4, 0.5, 0.45}));
            }
        }
    }
}

TEST_CASE("degenerate duality: one closed arm iff no open circuit") {
    Seed base{3131};
    for (int t = 0; t < 4000; ++t) {
        WeightField field(base.derive(t));
        BernoulliView view(field, 0.5);
        bool arm = detect_arms(field, {cs("C"), 1, 4, 0.5, 0.5});
        bool circuit = has_circuit(view, Annulus(1, 4), CrossColor::Open, 0);
        REQUIRE(arm == !circuit);
    }
}

TEST_CASE("defect-circuit identities match direct flow counts") {
    Seed base{818};
    for (int t = 0; t < 1500; ++t) {
        WeightField field(base.derive(t));
        const AnnulusGeometry& g = AnnulusGeometry::get(2, 6);
        AnnulusSample sample;
        sample.fill(g, field);
        double p = 0.5;
        auto open_pred = [&](size_t i) {
            return (g.info[i].flags & AnnulusGeometry::kOpenRegion) && sample.weight[i] < p;
        };
        auto closed_pred = [&](size_t i) {
            return (g.info[i].flags & AnnulusGeometry::kDualRegion) && sample.weight[i] >= p;
        };
        for (int k = 1; k <= 3; ++k) {
            bool open_by_circuit =
                k == 1 ? open_crossing(g, open_pred)
                       : !dual_circuit(g, [&](size_t i) { return !open_pred(i); }, k - 1);
            bool open_by_flow = count_disjoint_crossings_open(g, open_pred, k) >= k;
            REQUIRE(open_by_circuit == open_by_flow);
            bool closed_by_circuit =
                k == 1 ? closed_crossing(g, closed_pred)
                       : !primal_circuit(g, [&](size_t i) { return !closed_pred(i); }, k - 1);
            bool closed_by_flow = count_disjoint_crossings_closed(g, closed_pred, k) >= k;
            REQUIRE(closed_by_circuit == closed_by_flow);
        }
    }
}

TEST_CASE("invasion-status detector distinguishes definite and unknown") {
    // build a status map by hand on B(4): a bare invaded radial path
    EdgeStatusMap map;
    map.window = 4;
    map.p_star = 0.6;
    for (Edge e : edges_in_region(Box{4})) {
        bool on_path = e.is_horizontal() && e.a.y == 0 && e.a.x >= 0;
        map.status[e] = on_path ? EdgeStatus::Invaded : EdgeStatus::Never;
        if (on_path) ++map.invaded_count;
        else ++map.never_count;
    }
    CHECK(detect_arms_invasion(map, cs("O"), 1, 4) == Ternary::True);
    CHECK(detect_arms_invasion(map, cs("OO"), 1, 4) == Ternary::False);
    CHECK(detect_arms_invasion(map, cs("OC"), 1, 4) == Ternary::True);

    // unresolved edges that decide the second open arm produce Unknown
    for (Edge e : edges_in_region(Box{4})) {
        if (e.is_horizontal() && e.a.y == 2) {
            auto& st = map.status[e];
            if (st == EdgeStatus::Never) {
                st = EdgeStatus::Unresolved;
                --map.never_count;
                ++map.unresolved_count;
            }
        }
    }
    CHECK(detect_arms_invasion(map, cs("OO"), 1, 4) == Ternary::Unknown);
}
