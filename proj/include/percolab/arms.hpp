#pragma once

#include <cstdint>

#include "percolab/color_sequence.hpp"
#include "percolab/invasion.hpp"
#include "percolab/lattice.hpp"
#include "percolab/stats.hpp"
#include "percolab/weights.hpp"
#include "percolab/workspace.hpp"

namespace percolab {

/// Arm event between the rings of Ann(m, n): |sigma| arms crossing the
/// annulus, |sigma|_O of them p-open primal paths from |v| = m to |v| = n,
/// |sigma|_C of them q-closed dual paths between the face rings m - 1/2 and
/// n + 1/2. When m < |sigma| the inner ring is pushed out to |sigma|,
/// capped at n - 1 so a requested annulus never degenerates.
///
/// Conventions (shared by detector and oracle, and made testable by the
/// oracle rather than left implicit):
///  - same-color arms are edge-disjoint; an open arm and a closed arm may
///    not use a primal edge together with its dual;
///  - each arm is anchored at its starting vertex/face on the inner ring;
///    anchors are ordered cyclically by exact ring position, faces before
///    vertices at the rare collinear corner ties;
///  - sequences with at least two arms of each color require strictly
///    cyclically ordered anchors realizing sigma; all other sequences
///    constrain only the number of arms of each color (a lone color entry
///    cannot constrain a cyclic order).
struct ArmEventSpec {
    ColorSequence sigma;
    int32_t m = 1;               // inner radius before the |sigma| floor
    int32_t n = 8;
    double p_open = 0.5;
    double q_closed = 0.5;

    int32_t inner_effective() const {
        int32_t pushed = std::max<int32_t>(m, static_cast<int32_t>(sigma.size()));
        return std::min(pushed, n - 1);
    }
};

bool detect_arms(const WeightField& field, const ArmEventSpec& spec);

/// Same detector on a prefilled annulus sample (geometry must match the spec).
bool detect_arms_sample(const AnnulusSample& sample, const ColorSequence& sigma, double p_open,
                        double q_closed);

/// Arm event in the invasion: open means invaded, closed means certified
/// never invaded. Unknown when flipping the unresolved edges flips the
/// verdict (both completions are evaluated).
Ternary detect_arms_invasion(const EdgeStatusMap& statuses, const ColorSequence& sigma,
                             int32_t m, int32_t n);

/// Exhaustive oracle: enumerates tuples of disjoint arms with the cyclic
/// anchor-order check. Exponential; refuses regions beyond a small size.
/// Kept independent of the detector's search so the two can arbitrate each
/// other on random configurations.
bool brute_force_arms(const WeightField& field, const ArmEventSpec& spec);

}  // namespace percolab
