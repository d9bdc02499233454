#pragma once

#include <cstdint>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/stats.hpp"
#include "percolab/weights.hpp"
#include "percolab/workspace.hpp"

namespace percolab {

enum class CrossColor : uint8_t { Open, ClosedDual };
enum class Axis : uint8_t { LeftRight, TopBottom };

/// Crossing of the rectangle [-m,m] x [-n,n]. Open crossings run on lattice
/// vertices inside the rectangle. Closed crossings run on the dual: faces
/// with centres inside the rectangle, joined through closed rectangle edges.
/// Exactly one of {open left-right, closed top-bottom} holds per sample.
bool has_crossing(const BernoulliView& view, int32_t m, int32_t n, CrossColor color,
                  Axis axis = Axis::LeftRight);

/// Circuit around the origin inside Ann(m,n) with at most `defects` edges of
/// the wrong color. Open circuits use vertices with m <= |v| <= n; closed
/// dual circuits use faces with centre norm in [m+1/2, n-1/2]. Winding is
/// decided on the two-sheet lift over a fixed radial cut.
bool has_circuit(const BernoulliView& view, Annulus ann, CrossColor color, int defects);

EstimateRecord crossing_probability(double p, int32_t m, int32_t n, CrossColor color,
                                    uint64_t trials, Seed seed, int threads = 1);

struct CorrLenOptions {
    double slack = 0.005;   // CI lower bound must clear 1 - eps - slack
    int max_doublings = 3;  // trial doublings before a probe is forced
};

struct CorrelationLengthResult {
    double p = 0.0;
    double eps = 0.0;
    int32_t length = 0;       // smallest probed n with crossing prob > 1 - eps
    bool exceeded = false;    // no n <= n_max qualified
    bool inconclusive = false;  // some probe was forced at the trial cap
    std::vector<EstimateRecord> probes;
};

/// L(p, eps): smallest n with the square-crossing probability above 1 - eps.
/// Probes dyadic scales then refines by bisection; requires p > 1/2.
CorrelationLengthResult correlation_length(double p, double eps, uint64_t trials, int32_t n_max,
                                           Seed seed, CorrLenOptions opts = {}, int threads = 1);

struct PHatResult {
    int32_t n = 0;
    double eps = 0.0;
    double lo = 0.5;  // L(lo) > n
    double hi = 1.0;  // L(hi) <= n
    bool inconclusive = false;
    double mid() const { return 0.5 * (lo + hi); }
};

/// Smallest p > 1/2 with L(p) <= n, bracketed by bisection to `tolerance`.
PHatResult p_hat(int32_t n, double eps, uint64_t trials, double tolerance, Seed seed,
                 CorrLenOptions opts = {}, int threads = 1);

/// P(some p-closed dual path of sup-norm diameter >= n/10 inside B(n)).
EstimateRecord closed_diameter_tail(double p, int32_t n, uint64_t trials, Seed seed,
                                    int threads = 1);

}  // namespace percolab
