#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace percolab {

enum class ArmColor : uint8_t { Open, Closed };

/// Cyclic word over {O, C}. Equality is up to cyclic rotation.
class ColorSequence {
  public:
    ColorSequence() = default;
    explicit ColorSequence(std::vector<ArmColor> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw std::invalid_argument("ColorSequence: empty word");
    }

    /// Parse a string such as "OCC". Anything outside {O,C} is rejected.
    static ColorSequence parse(const std::string& s) {
        std::vector<ArmColor> w;
        w.reserve(s.size());
        for (char c : s) {
            if (c == 'O' || c == 'o')
                w.push_back(ArmColor::Open);
            else if (c == 'C' || c == 'c')
                w.push_back(ArmColor::Closed);
            else
                throw std::invalid_argument("color sequence must use only 'O' and 'C'");
        }
        return ColorSequence(std::move(w));
    }

    size_t size() const { return entries_.size(); }
    ArmColor at(size_t i) const { return entries_[i]; }
    const std::vector<ArmColor>& entries() const { return entries_; }

    size_t count_open() const {
        size_t n = 0;
        for (auto c : entries_)
            if (c == ArmColor::Open) ++n;
        return n;
    }
    size_t count_closed() const { return size() - count_open(); }

    std::string str() const {
        std::string s;
        for (auto c : entries_) s.push_back(c == ArmColor::Open ? 'O' : 'C');
        return s;
    }

    ColorSequence rotated(size_t k) const {
        std::vector<ArmColor> w(entries_.size());
        for (size_t i = 0; i < entries_.size(); ++i) w[i] = entries_[(i + k) % entries_.size()];
        return ColorSequence(std::move(w));
    }

    bool equals_cyclically(const ColorSequence& other) const {
        if (size() != other.size()) return false;
        for (size_t k = 0; k < size(); ++k)
            if (rotated(k).entries_ == other.entries_) return true;
        return false;
    }

    friend bool operator==(const ColorSequence&, const ColorSequence&) = default;

  private:
    std::vector<ArmColor> entries_;
};

/// Reduction: every maximal cyclic run of l >= 2 consecutive C entries
/// becomes exactly two; length-1 runs and all O entries survive in order.
/// Runs wrapping the end of the word count as one run.
ColorSequence reduce(const ColorSequence& sigma);

/// (O, C, ..., C) with k closed entries.
ColorSequence sigma_k(size_t k);
/// (C, ..., C) with k closed entries.
ColorSequence sigma_hat_k(size_t k);

}  // namespace percolab
