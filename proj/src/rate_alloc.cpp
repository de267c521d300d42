#include "svb/rate_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svb {

RateVector allocate_rates(const std::vector<CMat>& channels, const RateVector& targets,
                          const DecoderConfig& cfg, const std::vector<AntennaSet>& desired) {
  cfg.validate();
  if (channels.empty()) throw std::invalid_argument("allocate_rates: no receivers");
  if (desired.size() != channels.size())
    throw std::invalid_argument("allocate_rates: need one desired set per receiver");
  const int n_ant = channels.front().cols();
  for (const CMat& h : channels)
    if (h.cols() != n_ant)
      throw std::invalid_argument("allocate_rates: receivers disagree on antenna count");
  if (static_cast<int>(targets.size()) != n_ant)
    throw std::invalid_argument("allocate_rates: need one target per antenna");
  for (double r : targets)
    if (!std::isfinite(r) || r < 0.0)
      throw std::invalid_argument("allocate_rates: targets must be finite and >= 0");

  RateVector final_rates(n_ant, kUnboundedRate);
  for (size_t k = 0; k < channels.size(); ++k) {
    const CMat& h = channels[k];
    if (!AntennaSet::full(n_ant).contains_all(desired[k]))
      throw std::invalid_argument("allocate_rates: desired antenna out of range");

    AntennaSet unconsumed = AntennaSet::full(n_ant);
    RateVector granted(n_ant, kUnboundedRate);
    while (desired[k].intersects(unconsumed)) {
      const GroupChoice gc = select_best_group(h, unconsumed, targets, cfg.max_group_size);
      for (int t : gc.group.indices()) granted[t] = targets[t] + gc.margin;
      unconsumed = unconsumed.without(gc.group);
    }
    for (int t = 0; t < n_ant; ++t)
      if (is_bounded_rate(granted[t]))
        final_rates[t] = is_bounded_rate(final_rates[t]) ? std::min(final_rates[t], granted[t])
                                                         : granted[t];
  }
  for (double& r : final_rates)
    if (is_bounded_rate(r)) r = std::max(0.0, r);
  return final_rates;
}

}  // namespace svb
