#pragma once

#include <array>
#include <vector>

#include "svb/group_decoder.hpp"
#include "svb/matrix.hpp"

namespace svb {

// Linear MMSE receive filter G = (H^H H + noise_var I)^-1 H^H; row t recovers
// the stream of transmit antenna t.
CMat mmse_filter(const CMat& h, double noise_var);

// Per-antenna achievable rates of the MMSE filter: row t against column t is
// signal, filtered noise plus every other column is interference,
//   rate_t = log2(1 + |g_t h_t|^2 / (|g_t|^2 noise_var + sum_{q != t} |g_t h_q|^2)).
RateVector mmse_rates(const CMat& h, double noise_var);

enum class DecoderChoice { kMmse, kSgd };

// Linear decoding is preferred only when it clears every desired antenna's
// target with at least `threshold` bits/use to spare; with an empty desired
// set that holds vacuously.
DecoderChoice choose_decoder(const RateVector& mmse, const RateVector& targets,
                             AntennaSet desired, double threshold);

enum class Modulation : int { kQpsk = 2, k16Qam = 4, k64Qam = 6 };

inline int bits_per_symbol(Modulation m) { return static_cast<int>(m); }
const char* modulation_name(Modulation m);

// Available channel code rates, ascending.
inline constexpr std::array<double, 6> kCodeRates = {1.0 / 4, 1.0 / 3, 1.0 / 2,
                                                     2.0 / 3, 3.0 / 4, 7.0 / 8};

// Rate backoff protecting a layer: margin per modulation bit, clamped at 0.
double uep_backoff(double rate, double uep_margin, int bits_per_symbol);

struct McsEntry {
  Modulation modulation = Modulation::kQpsk;
  double code_rate = 0.0;      // one of kCodeRates, 0 when unusable
  double spectral_rate = 0.0;  // code_rate * bits_per_symbol, bits per channel use
  bool usable = false;         // false when even the lowest code rate is too fast
};

// Modulation-and-coding choice for a supported rate `rate` under per-layer
// protection margin `uep_margin`.  Each modulation is scored by its own
// backed-off rate; a candidate is consistent when that rate falls in the
// modulation's operating band (<= 1.0 QPSK, (1.0, 2.0] 16QAM, > 2.0 64QAM).
// At most one candidate can be consistent; if none is (backoff gaps), QPSK is
// used.  The code rate is the largest available not exceeding
// backed_off / bits_per_symbol; below the smallest code rate the resource is
// unusable and carries nothing.
McsEntry select_mcs(double rate, double uep_margin);

// Per-layer unequal error protection profile (index 0 = base layer).
struct UepProfile {
  std::vector<double> margin;       // rate backoff per modulation bit
  std::vector<double> target_bler;  // residual block error rate after decoding

  int layers() const { return static_cast<int>(margin.size()); }
  void validate() const;
};

}  // namespace svb
