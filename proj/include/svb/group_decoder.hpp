#pragma once

#include <limits>
#include <vector>

#include "svb/matrix.hpp"

namespace svb {

// Per-antenna transmission rates in bits per channel use.  An entry may be
// kUnboundedRate, meaning "this antenna carries no rate constraint" (used for
// antennas a receiver is not required to decode); unbounded entries never
// constrain a margin and are skipped by minimizations over decode subsets.
using RateVector = std::vector<double>;
inline constexpr double kUnboundedRate = std::numeric_limits<double>::infinity();

inline bool is_bounded_rate(double r) { return r != kUnboundedRate; }

// Margins that differ by no more than this are treated as ties and resolved
// towards the lexicographically smallest antenna set.
inline constexpr double kMarginTieTol = 1e-12;

struct DecoderConfig {
  int max_group_size = 2;      // largest antenna group decoded jointly
  double hybrid_threshold = 0.2;  // spare rate (bits/use) required to prefer the linear decoder

  void validate() const;
};

// Staged decode order: groups are decoded and cancelled front to back; the
// remainder is never decoded and acts as noise throughout.
struct OrderedPartition {
  std::vector<AntennaSet> stages;
  AntennaSet remainder;

  AntennaSet decoded() const {
    AntennaSet d;
    for (AntennaSet g : stages) d = d | g;
    return d;
  }
};

struct GroupChoice {
  AntennaSet group;
  double margin = 0.0;
};

struct PartitionResult {
  bool outage = false;
  // On outage, `partition` holds the stages chosen before decoding became
  // infeasible and `remainder` the antennas left undecoded.
  OrderedPartition partition;
  std::vector<double> stage_margins;  // aligned with partition.stages
};

// Raw decode margin of jointly decoding `decode_set` while `interference`
// remains uncancelled:
//   log2 det(I + H_D^H (I + H_B H_B^H)^-1 H_D) - sum of rates over D.
// Nonnegative means the set is jointly decodable at those rates.
double decode_margin(const CMat& h, AntennaSet decode_set, AntennaSet interference,
                     const RateVector& rates);

// Worst-case normalized margin of a candidate group: the minimum of
// decode_margin over all non-empty subsets of `group`, each divided by its
// size.  Zero for an empty group.  Subsets containing an unbounded-rate
// antenna are skipped.  Nonnegative iff every subset of the group is
// decodable, i.e. the group survives joint decoding.
double group_margin(const CMat& h, AntennaSet group, AntennaSet interference,
                    const RateVector& rates);

// Minimum stage margin of an ordered partition, where stage m sees every
// antenna not yet decoded through stage m as interference.  +inf for a
// partition with no stages.
double partition_margin(const CMat& h, const OrderedPartition& p, const RateVector& rates);

// Effective noise covariance seen while `undecoded` antennas remain:
// noise_var * I + sum over undecoded columns h_q h_q^H.
CMat noise_covariance(const CMat& h, AntennaSet undecoded, double noise_var);

// Best decode group among non-empty subsets of `undecoded` with at most
// max_group_size antennas: maximizes group_margin, ties broken towards the
// lexicographically smallest antenna set.  Dispatches to the exhaustive
// reference for small instances and the shrinking search otherwise.
GroupChoice select_best_group(const CMat& h, AntennaSet undecoded, const RateVector& rates,
                              int max_group_size);

// Reference path: enumerate all eligible groups.
GroupChoice select_best_group_exhaustive(const CMat& h, AntennaSet undecoded,
                                         const RateVector& rates, int max_group_size);

// Fast path: start from each maximum-size candidate (and the full undecoded
// set) and repeatedly strip the weakest subset -- the non-empty subset with
// the smallest decode margin per antenna, smallest cardinality among ties.
// Candidate groups met along the way compete on group_margin under the same
// tie-break as the exhaustive path; a visited-set memo stops repeated chains.
GroupChoice select_best_group_fast(const CMat& h, AntennaSet undecoded, const RateVector& rates,
                                   int max_group_size);

// Greedy staged decoding: repeatedly select the best group among the
// undecoded antennas, stopping as soon as `desired` is fully decoded.
// Declares outage if the best available group's margin falls below
// -kMarginTieTol first (rates at the exact decodability boundary count as
// decodable despite evaluation jitter).
PartitionResult greedy_partition(const CMat& h, const RateVector& rates, const DecoderConfig& cfg,
                                 AntennaSet desired);

}  // namespace svb
