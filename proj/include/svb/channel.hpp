#pragma once

#include <cstdint>
#include <vector>

#include "svb/matrix.hpp"

namespace svb {

// Static description of the broadcast downlink: one multi-antenna transmitter,
// num_users receivers, num_rbs independently fading resource blocks per
// transmission interval.
struct SystemConfig {
  int num_users = 2;
  int num_tx_antennas = 4;
  std::vector<int> rx_antennas = {4, 4};  // per user
  int num_rbs = 6;
  int subcarriers_per_rb = 12;
  // Channel uses carried by one resource block in one transmission interval
  // (subcarriers x OFDM symbols); converts spectral rates to payload bits.
  double channel_uses_per_rb = 168.0;
  double snr_db = 10.0;

  void validate() const;  // throws std::invalid_argument on bad values
};

// One block-fading draw: an independent matrix per (resource block, user).
// SNR is folded into the channel scale: entries are i.i.d. circularly
// symmetric complex Gaussian with per-entry variance 10^(snr_db/10), and the
// receiver noise is unit variance.
struct ChannelRealization {
  int n_rb = 0;
  int n_users = 0;
  double noise_var = 1.0;
  std::vector<CMat> h;  // indexed rb * n_users + user

  const CMat& at(int rb, int user) const { return h[static_cast<size_t>(rb) * n_users + user]; }
  CMat& at(int rb, int user) { return h[static_cast<size_t>(rb) * n_users + user]; }
};

// Draws the fading for one trial.  Streams are keyed by
// (seed, trial, rb, user), so the same tuple always produces the same
// matrix regardless of evaluation order, and different SNRs reuse the same
// underlying unit-variance draws (only the scale changes).
ChannelRealization generate_block_fading(const SystemConfig& cfg, std::uint64_t seed,
                                         std::uint64_t trial = 0);

}  // namespace svb
