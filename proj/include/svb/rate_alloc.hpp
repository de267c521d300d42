#pragma once

#include <vector>

#include "svb/group_decoder.hpp"

namespace svb {

// Broadcast rate selection for one resource block.  For every receiver
// independently, antennas are consumed in best-group-first order: each step
// picks the group with the maximum group_margin against the receiver's still
// unconsumed antennas (evaluated at the target rates), grants every antenna
// in it `target + margin`, and removes it; the loop stops once the receiver's
// desired set is covered.  Antennas a receiver never needed stay unbounded
// for that receiver.  The final per-antenna rate is the minimum of the
// per-receiver grants over receivers that bounded it (unbounded if none),
// clamped at zero from below.  Negative margins simply shrink the grant below
// the target; they are legitimate.
//
// channels: one matrix per receiver (same transmit antenna count).
// targets:  desired per-antenna rates, all finite and >= 0.
// desired:  per receiver, the antennas it must decode.
RateVector allocate_rates(const std::vector<CMat>& channels, const RateVector& targets,
                          const DecoderConfig& cfg, const std::vector<AntennaSet>& desired);

}  // namespace svb
