#pragma once

#include <cstdint>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "percolab/lattice.hpp"
#include "percolab/stats.hpp"
#include "percolab/weights.hpp"

namespace percolab {

/// Stopping rules for the greedy growth. A run can be resumed with a new rule.
struct StoppingRule {
    enum class Kind : uint8_t { ExitBox, StepBudget, FrontierAbove };
    Kind kind = Kind::StepBudget;
    int32_t radius = 0;
    uint64_t steps = 0;
    double threshold = 1.0;

    static StoppingRule exit_box(int32_t radius) {
        return {Kind::ExitBox, radius, 0, 1.0};
    }
    static StoppingRule step_budget(uint64_t steps) {
        return {Kind::StepBudget, 0, steps, 1.0};
    }
    static StoppingRule frontier_above(double threshold) {
        return {Kind::FrontierAbove, 0, 0, threshold};
    }
};

struct InvasionStep {
    Edge edge;
    double weight;
};

/// The invasion growth process: starting from the origin, each step invades
/// the minimum-weight boundary edge of the current graph. Boundary edges with
/// both endpoints already invaded stay eligible until taken. Ties (which the
/// weight construction makes essentially impossible) break by edge key.
class InvasionState {
  public:
    explicit InvasionState(const WeightField& field);

    /// Grow until the rule is met or `max_steps` further steps were taken.
    /// Returns true when the rule was met; false flags an exhausted budget.
    bool run(const StoppingRule& rule, uint64_t max_steps = UINT64_MAX);

    const WeightField& field() const { return field_; }
    const std::vector<InvasionStep>& order() const { return order_; }
    size_t steps() const { return order_.size(); }
    bool edge_invaded(Edge e) const { return invaded_.count(e) > 0; }
    bool vertex_invaded(Vertex v) const { return vertices_.count(v) > 0; }
    const std::unordered_set<Vertex>& invaded_vertices() const { return vertices_; }
    int32_t max_reach() const { return max_reach_; }
    double max_invaded_weight() const { return max_weight_; }

    /// Weight of the current minimum frontier edge.
    double frontier_min();

  private:
    struct HeapEntry {
        double weight;
        uint64_t key;
        Edge edge;
        bool operator>(const HeapEntry& o) const {
            if (weight != o.weight) return weight > o.weight;
            return key > o.key;
        }
    };

    void add_vertex(Vertex v);
    void step_once();

    WeightField field_;
    std::vector<InvasionStep> order_;
    std::unordered_set<Vertex> vertices_;
    std::unordered_set<Edge> invaded_;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> frontier_;
    int32_t max_reach_ = 0;
    double max_weight_ = 0.0;
};

InvasionState invade_until(const WeightField& field, const StoppingRule& rule,
                           uint64_t max_steps = UINT64_MAX);

enum class EdgeStatus : uint8_t { Invaded, Never, Unresolved };

/// Final-status verdicts for every edge of the window B(n). `Invaded` is
/// final by construction. `Never` is certified: either the weight is at
/// least p*, or the edge is not adjacent to anything the post-certification
/// invasion can still reach. Everything else stays `Unresolved` and is
/// reported, never hidden.
struct EdgeStatusMap {
    int32_t window = 0;
    double p_star = 1.0;
    std::unordered_map<Edge, EdgeStatus> status;
    uint64_t invaded_count = 0, never_count = 0, unresolved_count = 0;

    EdgeStatus status_of(Edge e) const {
        auto it = status.find(e);
        if (it == status.end())
            throw std::out_of_range("EdgeStatusMap: edge outside certified window");
        return it->second;
    }
    double unresolved_fraction() const {
        uint64_t total = invaded_count + never_count + unresolved_count;
        return total ? static_cast<double>(unresolved_count) / total : 0.0;
    }
};

struct CertifyOptions {
    int32_t horizon_multiplier = 8;
    uint64_t step_budget = 0;  // 0: 4 * horizon^2
    int max_rounds = 4;
    double grid_resolution = 1e-4;  // p-grid floor above 1/2
    double grid_factor = 0.8;       // geometric refinement of the p-grid
};

/// Certify final edge statuses on B(window). The certification parameter p*
/// is the smallest probed p > 1/2 at which the invaded set inside B(M/2)
/// joins a p-open cluster reaching the horizon boundary; from then on the
/// frontier minimum stays below p*, so the p-open reachable set bounds every
/// future invasion. Rounds of further growth shrink what stays unresolved.
EdgeStatusMap certify_statuses(InvasionState& state, int32_t window, int32_t horizon,
                               const CertifyOptions& opts = {});

struct CertifiedRun {
    InvasionState state;
    EdgeStatusMap statuses;
    int32_t horizon = 0;
    bool budget_hit = false;
};

CertifiedRun run_certified(const WeightField& field, int32_t window,
                           const CertifyOptions& opts = {});

struct Outlet {
    Edge edge;
    size_t step_index;
    double weight;
};

/// Invaded edges whose weight beats every later invaded weight and exceeds
/// p*, in invasion order. The first entry is the first outlet, the unique
/// maximum-weight invaded edge. Requires a certified run: outlet-hood is a
/// statement about the infinite future, bounded here by p*.
std::vector<Outlet> outlets(const CertifiedRun& run);

/// Does the invaded edge set contain a circuit around 0 inside `ann`?
/// Unknown when unresolved edges could change the verdict (decided by
/// evaluating both completions of the unresolved set).
Ternary invaded_circuit(const CertifiedRun& run, Annulus ann);

struct CircuitEquivalenceSample {
    Ternary invaded_side = Ternary::Unknown;
    bool bernoulli_side = false;
    bool resolved = false;
    bool agree = false;
};

/// Per-sample check of the invaded-circuit characterization: an invaded
/// circuit around 0 in Ann(m,n) exists iff for some p there is a p-open
/// circuit around 0 in the annulus and a p-closed dual circuit around it.
/// The parameter sweep runs over the annulus edge weights (the predicate is
/// piecewise constant between them); the enclosing dual circuit is searched
/// in the window the invasion actually explored.
CircuitEquivalenceSample check_inv_circuit_equivalence(const WeightField& field, Annulus ann,
                                                       int32_t horizon,
                                                       const CertifyOptions& opts = {});

}  // namespace percolab
