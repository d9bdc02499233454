#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "percolab/stats.hpp"

namespace percolab {

/// Hit/unknown counts from a batch of trials. Merging is associative and
/// commutative, so results are independent of worker count and scheduling.
struct TrialTally {
    uint64_t hits = 0;
    uint64_t unknowns = 0;
    void add(Ternary t) {
        if (t == Ternary::True) ++hits;
        else if (t == Ternary::Unknown) ++unknowns;
    }
    void merge(const TrialTally& o) {
        hits += o.hits;
        unknowns += o.unknowns;
    }
};

int resolve_threads(int requested);

/// Evaluate `pred` for trials 0..trials-1 across a worker pool. The per-trial
/// seed schedule is the caller's responsibility; only counts are aggregated.
TrialTally run_trials(uint64_t trials, int threads,
                      const std::function<Ternary(uint64_t)>& pred);

/// Same, with `events` verdicts per trial (written into a caller-sized span).
std::vector<TrialTally> run_trials_multi(
    uint64_t trials, int threads, size_t events,
    const std::function<void(uint64_t, std::vector<Ternary>&)>& eval);

}  // namespace percolab
