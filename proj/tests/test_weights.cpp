#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "percolab/lattice.hpp"
#include "percolab/weights.hpp"

using namespace percolab;

TEST_CASE("weights are deterministic and in (0,1)") {
    WeightField field(Seed{12345});
    for (Edge e : edges_in_region(Box{20})) {
        double w = field.weight(e);
        CHECK(w > 0.0);
        CHECK(w < 1.0);
        CHECK(field.weight(e) == w);
    }
    WeightField same(Seed{12345}), other(Seed{12346});
    Edge probe = Edge::horizontal({3, -7});
    CHECK(same.weight(probe) == field.weight(probe));
    CHECK(other.weight(probe) != field.weight(probe));
}

TEST_CASE("evaluation order never changes values") {
    WeightField field(Seed{99});
    auto edges = edges_in_region(Box{15});
    std::vector<double> forward;
    for (const Edge& e : edges) forward.push_back(field.weight(e));
    std::vector<double> reversed;
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) reversed.push_back(field.weight(*it));
    std::reverse(reversed.begin(), reversed.end());
    CHECK(forward == reversed);
}

TEST_CASE("empirical mean of 1e6 weights is 1/2 within 0.002") {
    WeightField field(Seed{2024});
    double sum = 0.0;
    size_t count = 0;
    for (Edge e : edges_in_region(Box{354})) {  // > 1e6 edges
        sum += field.weight(e);
        ++count;
    }
    CHECK(count >= 1000000);
    CHECK(std::abs(sum / count - 0.5) < 0.002);
}

TEST_CASE("chi-square uniformity on 1e5 weights at significance 0.001") {
    WeightField field(Seed{31337});
    constexpr int kBins = 100;
    constexpr int kSamples = 100000;
    int bins[kBins] = {0};
    int seen = 0;
    for (Edge e : edges_in_region(Box{120})) {
        if (seen == kSamples) break;
        ++bins[static_cast<int>(field.weight(e) * kBins)];
        ++seen;
    }
    REQUIRE(seen == kSamples);
    double expected = static_cast<double>(kSamples) / kBins;
    double chi2 = 0.0;
    for (int b : bins) chi2 += (b - expected) * (b - expected) / expected;
    // chi-square 99 dof, upper 0.001 quantile
    CHECK(chi2 < 148.230);
}

TEST_CASE("pairwise correlation between distinct edges is null") {
    // correlation across edge pairs under a sliding seed, 3 sigma
    constexpr int kTrials = 20000;
    Edge e1 = Edge::horizontal({0, 0});
    Edge e2 = Edge::vertical({5, 3});
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int t = 0; t < kTrials; ++t) {
        WeightField field(Seed{777}.derive(t));
        double x = field.weight(e1), y = field.weight(e2);
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    double n = kTrials;
    double cov = sxy / n - (sx / n) * (sy / n);
    double vx = sxx / n - (sx / n) * (sx / n);
    double vy = syy / n - (sy / n) * (sy / n);
    double corr = cov / std::sqrt(vx * vy);
    CHECK(std::abs(corr) < 3.0 / std::sqrt(n));
}

TEST_CASE("monotone coupling: p-open set grows with p") {
    WeightField field(Seed{5});
    for (Edge e : edges_in_region(Box{30})) {
        for (double p = 0.1; p < 1.0; p += 0.2) {
            BernoulliView lo(field, p), hi(field, p + 0.2);
            if (lo.is_open(e)) CHECK(hi.is_open(e));
        }
        CHECK(BernoulliView(field, 1.0).is_open(e));
        CHECK(!BernoulliView(field, 0.0).is_open(e));
    }
}

TEST_CASE("derived trial seeds differ") {
    Seed base{42};
    CHECK(base.derive(0).value != base.derive(1).value);
    CHECK(base.derive(0).value == base.derive(0).value);
    CHECK(base.stream("a").value != base.stream("b").value);
}
