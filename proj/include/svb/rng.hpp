#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace svb {

// Counter-based random stream.  A stream is identified by a short key tuple
// (seed, purpose tag, trial, resource block, user, ...); output i is a pure
// function of (key, i).  This makes every draw independent of scheduling:
// any worker can regenerate any stream from its key, which is what keeps
// multi-threaded Monte Carlo runs bit-identical to serial ones.
//
// The generator is the splitmix64 finalizer over a Weyl sequence seeded by a
// mixed key -- statistically solid for simulation use and exactly
// reproducible everywhere.
class CounterRng {
 public:
  explicit CounterRng(std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = 0x243f6a8885a308d3ull;  // arbitrary non-zero start
    for (std::uint64_t k : key) h = mix(h ^ mix(k + 0x9e3779b97f4a7c15ull));
    base_ = h;
  }

  std::uint64_t next_u64() { return mix(base_ + (++n_) * 0x9e3779b97f4a7c15ull); }

  // Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; draws come in pairs, the second is cached.
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so log() is safe.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t base_ = 0;
  std::uint64_t n_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Purpose tags keeping unrelated streams disjoint even for equal key tuples.
inline constexpr std::uint64_t kRngTagChannel = 0x6368616e6e656cull;  // "channel"
inline constexpr std::uint64_t kRngTagBler = 0x626c6572ull;           // "bler"

}  // namespace svb
