#include "percolab/parallel.hpp"

namespace percolab {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

constexpr uint64_t kChunk = 64;

}  // namespace

std::vector<TrialTally> run_trials_multi(
    uint64_t trials, int threads, size_t events,
    const std::function<void(uint64_t, std::vector<Ternary>&)>& eval) {
    threads = resolve_threads(threads);
    if (trials == 0) return std::vector<TrialTally>(events);

    auto worker_body = [&](std::vector<TrialTally>& local, uint64_t begin, uint64_t end) {
        std::vector<Ternary> verdicts(events);
        for (uint64_t t = begin; t < end; ++t) {
            eval(t, verdicts);
            for (size_t e = 0; e < events; ++e) local[e].add(verdicts[e]);
        }
    };

    if (threads == 1 || trials < 2 * kChunk) {
        std::vector<TrialTally> tally(events);
        worker_body(tally, 0, trials);
        return tally;
    }

    std::atomic<uint64_t> next{0};
    std::vector<std::vector<TrialTally>> per_thread(threads,
                                                    std::vector<TrialTally>(events));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            for (;;) {
                uint64_t begin = next.fetch_add(kChunk);
                if (begin >= trials) break;
                uint64_t end = begin + kChunk < trials ? begin + kChunk : trials;
                worker_body(per_thread[w], begin, end);
            }
        });
    }
    for (auto& th : pool) th.join();

    std::vector<TrialTally> tally(events);
    for (const auto& local : per_thread)
        for (size_t e = 0; e < events; ++e) tally[e].merge(local[e]);
    return tally;
}

TrialTally run_trials(uint64_t trials, int threads,
                      const std::function<Ternary(uint64_t)>& pred) {
    auto tallies = run_trials_multi(trials, threads, 1,
                                    [&](uint64_t t, std::vector<Ternary>& out) {
                                        out[0] = pred(t);
                                    });
    return tallies[0];
}

}  // namespace percolab
