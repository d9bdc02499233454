#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "percolab/lattice.hpp"

namespace percolab {

namespace detail {

/// splitmix64 finalizer; statistically strong for counter-style inputs.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Map 64 bits to (0,1) exclusive with 53-bit resolution.
inline double to_unit(uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1p-53;
}

}  // namespace detail

/// Experiment seed. Identical seeds give identical weight fields; derived
/// streams keep trials and experiment roles statistically independent.
struct Seed {
    uint64_t value = 0;

    /// Stream for the i-th trial (counter-style, order independent).
    Seed derive(uint64_t index) const {
        return Seed{detail::mix64(value ^ detail::mix64(index + 0x51ed2701a9e30d4bULL))};
    }
    /// Stream for a named experiment role, e.g. to keep ratio numerators and
    /// denominators on independent randomness.
    Seed stream(const char* role) const {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (const char* p = role; *p; ++p) {
            h ^= static_cast<unsigned char>(*p);
            h *= 0x100000001b3ULL;
        }
        return Seed{detail::mix64(value ^ h)};
    }
};

/// I.i.d. uniform (0,1) edge weights, evaluated lazily as a pure function of
/// (seed, canonical edge key). No state, no preallocation: evaluation order
/// can never change a value, and concurrent reads are race-free.
class WeightField {
  public:
    WeightField() = default;
    explicit WeightField(Seed seed) : seed_(seed) {}

    /// Field with planted values on selected edges (fixtures and hand-built
    /// configurations); everything else falls back to the seeded function.
    WeightField(Seed seed, const std::vector<std::pair<Edge, double>>& planted) : seed_(seed) {
        auto table = std::make_shared<std::unordered_map<Edge, double>>();
        for (const auto& [e, w] : planted) {
            if (w <= 0.0 || w >= 1.0)
                throw std::invalid_argument("WeightField: planted weights must be in (0,1)");
            (*table)[e] = w;
        }
        planted_ = std::move(table);
    }

    Seed seed() const { return seed_; }

    double weight(Edge e) const {
        if (planted_) {
            auto it = planted_->find(e);
            if (it != planted_->end()) return it->second;
        }
        return detail::to_unit(detail::mix64(seed_.value ^ detail::mix64(e.key())));
    }
    double operator()(Edge e) const { return weight(e); }

  private:
    Seed seed_;
    std::shared_ptr<const std::unordered_map<Edge, double>> planted_;
};

/// Fixed-parameter Bernoulli view of a weight field: e is p-open iff t_e < p,
/// and its dual edge is p-closed iff t_e >= p. Shared weights couple all
/// parameters monotonically.
class BernoulliView {
  public:
    BernoulliView(const WeightField& field, double p) : field_(&field), p_(p) {}

    double p() const { return p_; }
    const WeightField& field() const { return *field_; }

    bool is_open(Edge e) const { return field_->weight(e) < p_; }
    bool is_closed_dual(DualEdge d) const { return !is_open(d.primal); }

  private:
    const WeightField* field_;
    double p_;
};

}  // namespace percolab
