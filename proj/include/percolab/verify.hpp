#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percolab/color_sequence.hpp"
#include "percolab/invasion.hpp"
#include "percolab/lattice.hpp"
#include "percolab/weights.hpp"

namespace percolab {

/// Detector versus exhaustive oracle on random configurations.
struct OracleAgreementReport {
    uint64_t checked = 0;
    uint64_t disagreements = 0;
    bool passed() const { return checked > 0 && disagreements == 0; }
};
OracleAgreementReport verify_oracle_agreement(const std::vector<ColorSequence>& sigmas,
                                              int32_t m, int32_t n, double p, double q,
                                              uint64_t trials, Seed seed, int threads = 1);

/// Per-sample agreement of the invaded-circuit characterization.
struct InvCircuitReport {
    uint64_t samples = 0;
    uint64_t resolved = 0;
    uint64_t agreed = 0;
    uint64_t invaded_true = 0;
    double unresolved_rate() const {
        return samples ? 1.0 - static_cast<double>(resolved) / samples : 0.0;
    }
    bool passed(double max_unresolved = 0.02) const {
        return samples > 0 && agreed == resolved && unresolved_rate() < max_unresolved;
    }
};
InvCircuitReport verify_inv_circuit(Annulus ann, int32_t horizon, uint64_t trials, Seed seed,
                                    int threads = 1);

/// Open left-right crossing xor closed dual top-bottom crossing, per sample.
struct DualityReport {
    uint64_t checked = 0;
    uint64_t violations = 0;
    bool passed() const { return checked > 0 && violations == 0; }
};
DualityReport verify_duality(int32_t max_half_side, uint64_t trials, Seed seed, int threads = 1);

/// Invasion structure on certified runs: the first outlet carries the maximum
/// invaded weight, outlet weights decrease, and on qualifying samples (the
/// sigma arm event holds in the invasion with the first outlet inside B(n/2))
/// the Bernoulli detector confirms the reduced-sequence arms: open arms at
/// the first-outlet weight, closed dual arms at 1/2, in the order of the
/// reduced sequence, from B(|sigma|) to B(n/2).
struct SigmaReductionReport {
    uint64_t runs = 0;
    uint64_t certified = 0;
    uint64_t qualifying = 0;
    uint64_t violations = 0;
    uint64_t outlet_order_violations = 0;
    bool passed(uint64_t min_qualifying) const {
        return qualifying >= min_qualifying && violations == 0 &&
               outlet_order_violations == 0;
    }
};
SigmaReductionReport verify_sigma_reduction(const ColorSequence& sigma, int32_t n,
                                            uint64_t qualifying_target, uint64_t max_runs,
                                            Seed seed, const CertifyOptions& opts = {},
                                            int threads = 1);

}  // namespace percolab
