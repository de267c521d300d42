#include "svb/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "svb/rng.hpp"

namespace svb {

void SystemConfig::validate() const {
  if (num_users < 1) throw std::invalid_argument("system: num_users must be >= 1");
  if (num_tx_antennas < 1 || num_tx_antennas > 8)
    throw std::invalid_argument("system: num_tx_antennas must be in [1, 8]");
  if (static_cast<int>(rx_antennas.size()) != num_users)
    throw std::invalid_argument("system: rx_antennas must list one count per user");
  for (int m : rx_antennas)
    if (m < 1 || m > 8) throw std::invalid_argument("system: rx antenna counts must be in [1, 8]");
  if (num_rbs < 1) throw std::invalid_argument("system: num_rbs must be >= 1");
  if (subcarriers_per_rb < 1) throw std::invalid_argument("system: subcarriers_per_rb must be >= 1");
  if (!(channel_uses_per_rb > 0.0))
    throw std::invalid_argument("system: channel_uses_per_rb must be > 0");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("system: snr_db must be finite");
}

ChannelRealization generate_block_fading(const SystemConfig& cfg, std::uint64_t seed,
                                         std::uint64_t trial) {
  cfg.validate();
  ChannelRealization out;
  out.n_rb = cfg.num_rbs;
  out.n_users = cfg.num_users;
  out.noise_var = 1.0;
  out.h.resize(static_cast<size_t>(cfg.num_rbs) * cfg.num_users);

  // Per-entry amplitude: sqrt(linear SNR / 2) on each of the two quadratures.
  const double scale = std::sqrt(std::pow(10.0, cfg.snr_db / 10.0) / 2.0);
  for (int rb = 0; rb < cfg.num_rbs; ++rb) {
    for (int u = 0; u < cfg.num_users; ++u) {
      CounterRng rng{seed, kRngTagChannel, trial, static_cast<std::uint64_t>(rb),
                     static_cast<std::uint64_t>(u)};
      CMat m(cfg.rx_antennas[u], cfg.num_tx_antennas);
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
          m(r, c) = cxd(scale * rng.next_gaussian(), scale * rng.next_gaussian());
      out.at(rb, u) = std::move(m);
    }
  }
  return out;
}

}  // namespace svb
