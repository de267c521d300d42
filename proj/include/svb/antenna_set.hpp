#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace svb {

// Set of transmit-antenna indices (0-based), backed by a bitmask.
// All antenna counts in this codebase are small (<= 8), so a 32-bit mask is
// more than enough and keeps subset enumeration cheap.
class AntennaSet {
 public:
  constexpr AntennaSet() = default;
  constexpr explicit AntennaSet(std::uint32_t bits) : bits_(bits) {}

  // The set {0, 1, ..., n-1}.
  static constexpr AntennaSet full(int n) {
    return AntennaSet(n >= 32 ? ~0u : ((1u << n) - 1u));
  }

  static AntennaSet of(std::initializer_list<int> idx) {
    AntennaSet s;
    for (int i : idx) s.insert(i);
    return s;
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int t) const { return ((bits_ >> t) & 1u) != 0; }
  void insert(int t) { bits_ |= (1u << t); }
  void erase(int t) { bits_ &= ~(1u << t); }

  constexpr AntennaSet operator|(AntennaSet o) const { return AntennaSet(bits_ | o.bits_); }
  constexpr AntennaSet operator&(AntennaSet o) const { return AntennaSet(bits_ & o.bits_); }
  constexpr AntennaSet without(AntennaSet o) const { return AntennaSet(bits_ & ~o.bits_); }
  constexpr bool intersects(AntennaSet o) const { return (bits_ & o.bits_) != 0; }
  constexpr bool contains_all(AntennaSet o) const { return (bits_ & o.bits_) == o.bits_; }
  constexpr bool operator==(const AntennaSet&) const = default;

  // Lexicographic order on the sorted index sequences, e.g. {0,2} < {0,3},
  // {0} < {0,2}, {0,3} < {1}.  Used as the deterministic tie-break when two
  // candidate groups have (numerically) equal margins.
  constexpr bool lex_less(AntennaSet o) const {
    const std::uint32_t d = bits_ ^ o.bits_;
    if (d == 0) return false;
    const std::uint32_t low = d & (0u - d);        // lowest differing index
    const std::uint32_t above = ~(low | (low - 1));  // indices strictly above it
    // Sorted sequences agree below the lowest differing index.  The set
    // holding that index compares smaller, unless the other set ends there
    // (a strict prefix comes first).
    if ((bits_ & low) != 0) return (o.bits_ & above) != 0;
    return (bits_ & above) == 0;
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint32_t b = bits_; b != 0; b &= b - 1)
      out.push_back(std::countr_zero(b));
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint32_t bits_ = 0;
};

// Calls f(subset) for every non-empty subset of s.
template <typename F>
void for_each_nonempty_subset(AntennaSet s, F&& f) {
  const std::uint32_t m = s.bits();
  for (std::uint32_t sub = m; sub != 0; sub = (sub - 1) & m) f(AntennaSet(sub));
}

}  // namespace svb
