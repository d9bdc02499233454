#include "percolab/verify.hpp"

#include <atomic>
#include <cmath>

#include "percolab/arms.hpp"
#include "percolab/parallel.hpp"
#include "percolab/percolation.hpp"

namespace percolab {

OracleAgreementReport verify_oracle_agreement(const std::vector<ColorSequence>& sigmas,
                                              int32_t m, int32_t n, double p, double q,
                                              uint64_t trials, Seed seed, int threads) {
    std::atomic<uint64_t> checked{0}, bad{0};
    run_trials(trials, threads, [&](uint64_t t) {
        WeightField field(seed.derive(t));
        for (const auto& sigma : sigmas) {
            ArmEventSpec spec{sigma, m, n, p, q};
            bool fast = detect_arms(field, spec);
            bool slow = brute_force_arms(field, spec);
            checked.fetch_add(1, std::memory_order_relaxed);
            if (fast != slow) bad.fetch_add(1, std::memory_order_relaxed);
        }
        return Ternary::False;
    });
    return {checked.load(), bad.load()};
}

InvCircuitReport verify_inv_circuit(Annulus ann, int32_t horizon, uint64_t trials, Seed seed,
                                    int threads) {
    std::atomic<uint64_t> resolved{0}, agreed{0}, invaded_true{0};
    run_trials(trials, threads, [&](uint64_t t) {
        auto sample = check_inv_circuit_equivalence(WeightField(seed.derive(t)), ann, horizon);
        if (sample.resolved) {
            resolved.fetch_add(1, std::memory_order_relaxed);
            if (sample.agree) agreed.fetch_add(1, std::memory_order_relaxed);
            if (sample.invaded_side == Ternary::True)
                invaded_true.fetch_add(1, std::memory_order_relaxed);
        }
        return Ternary::False;
    });
    return {trials, resolved.load(), agreed.load(), invaded_true.load()};
}

DualityReport verify_duality(int32_t max_half_side, uint64_t trials, Seed seed, int threads) {
    std::atomic<uint64_t> violations{0};
    run_trials(trials, threads, [&](uint64_t t) {
        Seed s = seed.derive(t);
        WeightField field(s);
        // deterministic pseudo-random rectangle shape and parameter per trial
        uint64_t h = detail::mix64(s.value);
        int32_t m = 1 + static_cast<int32_t>(h % max_half_side);
        int32_t n = 1 + static_cast<int32_t>((h >> 8) % max_half_side);
        double p = 0.25 + 0.5 * detail::to_unit(detail::mix64(h));
        if ((h >> 16) % 2 == 0) p = 0.5;
        BernoulliView view(field, p);
        bool open_lr = has_crossing(view, m, n, CrossColor::Open, Axis::LeftRight);
        bool closed_tb = has_crossing(view, m, n, CrossColor::ClosedDual, Axis::TopBottom);
        if (open_lr == closed_tb) violations.fetch_add(1, std::memory_order_relaxed);
        return Ternary::False;
    });
    return {trials, violations.load()};
}

SigmaReductionReport verify_sigma_reduction(const ColorSequence& sigma, int32_t n,
                                            uint64_t qualifying_target, uint64_t max_runs,
                                            Seed seed, const CertifyOptions& opts, int threads) {
    ColorSequence reduced = reduce(sigma);
    std::atomic<uint64_t> runs{0}, certified{0}, qualifying{0}, violations{0}, order_bad{0};
    std::atomic<bool> done{false};

    run_trials(max_runs, threads, [&](uint64_t t) {
        if (done.load(std::memory_order_relaxed)) return Ternary::False;
        runs.fetch_add(1, std::memory_order_relaxed);
        WeightField field(seed.derive(t));
        CertifiedRun run = run_certified(field, n, opts);
        auto outs = outlets(run);
        if (outs.empty()) return Ternary::False;
        certified.fetch_add(1, std::memory_order_relaxed);

        // structural invariants on every certified run with outlets
        if (outs.front().weight != run.state.max_invaded_weight())
            order_bad.fetch_add(1, std::memory_order_relaxed);
        for (size_t i = 0; i + 1 < outs.size(); ++i)
            if (outs[i].weight <= outs[i + 1].weight)
                order_bad.fetch_add(1, std::memory_order_relaxed);

        if (outs.front().edge.max_endpoint_norm() > n / 2) return Ternary::False;
        if (detect_arms_invasion(run.statuses, sigma, 1, n) != Ternary::True)
            return Ternary::False;

        uint64_t q = qualifying.fetch_add(1, std::memory_order_relaxed) + 1;
        double tau1 = outs.front().weight;
        ArmEventSpec spec{reduced, static_cast<int32_t>(sigma.size()), n / 2,
                         std::nextafter(tau1, 2.0), 0.5};
        if (!detect_arms(field, spec)) violations.fetch_add(1, std::memory_order_relaxed);
        if (q >= qualifying_target) done.store(true, std::memory_order_relaxed);
        return Ternary::False;
    });
    return {runs.load(), certified.load(), qualifying.load(), violations.load(),
            order_bad.load()};
}

}  // namespace percolab
