#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svb/channel.hpp"
#include "svb/group_decoder.hpp"
#include "svb/link_adapt.hpp"
#include "svb/resource_alloc.hpp"
#include "svb/video_model.hpp"

namespace svb {

enum class DecoderMode { kMmse, kSgd, kHybrid };
enum class BlerMode { kOutageOnly, kBernoulli };

const char* decoder_mode_name(DecoderMode m);

struct SimulationSpec {
  SystemConfig system;
  DecoderMode decoder = DecoderMode::kHybrid;
  DecoderConfig decoder_cfg;
  UepProfile uep;
  std::vector<QualityModel> models;  // one per user
  std::vector<double> snr_sweep_db;
  int trials = 200;
  std::uint64_t seed = 1;
  BlerMode bler_mode = BlerMode::kBernoulli;
  // When set, every trial cross-checks the fast decoder search against the
  // exhaustive reference (and the resource solver against enumeration when
  // small enough); mismatches are counted and reported.
  bool oracle_checks = false;

  void validate() const;
};

struct TrialResult {
  std::vector<double> user_rate_bits;  // received cumulative rate per user
  std::vector<double> user_psnr_db;
  int decode_attempts = 0;   // (rb, user) pairs that had anything to decode
  int decode_failures = 0;   // attempts with at least one lost block
  int hybrid_mmse_rbs = 0;   // attempts served by the linear decoder
  bool base_layer_infeasible = false;
  long oracle_mismatches = 0;
};

// One Monte Carlo trial at one SNR point: draw fading, pick broadcast rates
// per resource block, map to modulation-and-coding, allocate resources to
// video layers, simulate decoding per receiver, and score received quality.
// A pure function of (spec, snr_db, trial) -- reruns are bit-identical.
TrialResult run_trial(const SimulationSpec& spec, double snr_db, int trial);

struct SweepRow {
  double snr_db = 0.0;
  std::string decoder;
  double mean_psnr_db = 0.0;
  double stderr_db = 0.0;
  double outage_rate = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  long oracle_mismatches = 0;
};

// Full SNR sweep.  num_threads > 1 runs trials under OpenMP; results are
// stored in per-trial slots and reduced in trial order, so output is
// byte-identical for any worker count.
SweepResult run_sweep(const SimulationSpec& spec, int num_threads = 1);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace svb
