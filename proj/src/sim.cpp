#include "svb/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "svb/rate_alloc.hpp"
#include "svb/rng.hpp"

namespace svb {

const char* decoder_mode_name(DecoderMode m) {
  switch (m) {
    case DecoderMode::kMmse: return "mmse";
    case DecoderMode::kSgd: return "sgd";
    case DecoderMode::kHybrid: return "hybrid";
  }
  return "?";
}

void SimulationSpec::validate() const {
  system.validate();
  decoder_cfg.validate();
  uep.validate();
  if (static_cast<int>(models.size()) != system.num_users)
    throw std::invalid_argument("spec: need one quality model per user");
  for (const QualityModel& m : models) {
    m.validate();
    if (m.layers() != uep.layers())
      throw std::invalid_argument("spec: quality model layers must match the UEP profile");
  }
  if (snr_sweep_db.empty()) throw std::invalid_argument("spec: empty SNR sweep");
  for (double s : snr_sweep_db)
    if (!std::isfinite(s)) throw std::invalid_argument("spec: SNR points must be finite");
  if (trials < 1) throw std::invalid_argument("spec: trials must be >= 1");
}

namespace {

// Everything one receiver decodes on one resource block.
struct RbDecode {
  AntennaSet delivered;  // desired antennas whose blocks arrived
  bool used_mmse = false;
};

struct ActiveRb {
  AntennaSet active;               // antennas carrying any stream
  std::vector<double> tx_rate;     // per antenna, the owning layer's common rate
  std::vector<double> block_pass;  // per antenna, success probability given margin >= 0
};

bool bernoulli_pass(CounterRng& rng, double p_pass) { return rng.next_unit() < p_pass; }

RbDecode decode_rb(const SimulationSpec& spec, const CMat& h_full, const ActiveRb& rb,
                   AntennaSet desired, int rb_index, int user, int trial) {
  RbDecode out;
  if (desired.empty()) return out;

  // Silent antennas carry nothing and do not interfere; decode against the
  // active columns only (local indices follow ascending antenna order).
  const std::vector<int> act = rb.active.indices();
  const CMat h = h_full.columns(rb.active);
  const int n_loc = static_cast<int>(act.size());
  AntennaSet desired_loc;
  RateVector rates_loc(n_loc, 0.0);
  for (int j = 0; j < n_loc; ++j) {
    rates_loc[j] = rb.tx_rate[act[j]];
    if (desired.contains(act[j])) desired_loc.insert(j);
  }

  const RateVector mmse = mmse_rates(h, 1.0);
  bool use_mmse = spec.decoder == DecoderMode::kMmse;
  if (spec.decoder == DecoderMode::kHybrid)
    use_mmse = choose_decoder(mmse, rates_loc, desired_loc,
                              spec.decoder_cfg.hybrid_threshold) == DecoderChoice::kMmse;

  AntennaSet delivered_loc;
  if (use_mmse) {
    out.used_mmse = true;
    // Per-antenna threshold test; each desired stream stands alone.
    for (int j : desired_loc.indices()) {
      if (mmse[j] < rates_loc[j]) continue;
      if (spec.bler_mode == BlerMode::kBernoulli) {
        CounterRng rng{spec.seed, kRngTagBler, static_cast<std::uint64_t>(trial),
                       static_cast<std::uint64_t>(rb_index), static_cast<std::uint64_t>(user),
                       static_cast<std::uint64_t>(act[j])};
        if (!bernoulli_pass(rng, rb.block_pass[act[j]])) continue;
      }
      delivered_loc.insert(j);
    }
  } else {
    // Staged group decoding.  Stages that fail their residual-error draw are
    // not cancelled: they stay in the interference set of every later stage,
    // and later margins are re-evaluated against that larger set.
    const PartitionResult pr =
        greedy_partition(h, rates_loc, spec.decoder_cfg, desired_loc);
    AntennaSet cancelled, retained;
    const AntennaSet all_loc = AntennaSet::full(n_loc);
    for (size_t m = 0; m < pr.partition.stages.size(); ++m) {
      const AntennaSet g = pr.partition.stages[m];
      const AntennaSet interference = all_loc.without(cancelled).without(g) | retained;
      bool ok = group_margin(h, g, interference, rates_loc) >= 0.0;
      if (ok && spec.bler_mode == BlerMode::kBernoulli) {
        double p_pass = 1.0;
        for (int j : g.indices()) p_pass *= rb.block_pass[act[j]];
        CounterRng rng{spec.seed, kRngTagBler, static_cast<std::uint64_t>(trial),
                       static_cast<std::uint64_t>(rb_index), static_cast<std::uint64_t>(user),
                       0x5347ull /* staged-decode draw space */, static_cast<std::uint64_t>(m)};
        ok = bernoulli_pass(rng, p_pass);
      }
      if (ok) {
        cancelled = cancelled | g;
        delivered_loc = delivered_loc | (g & desired_loc);
      } else {
        retained = retained | g;
      }
    }
  }

  for (int j : delivered_loc.indices()) out.delivered.insert(act[j]);
  return out;
}

}  // namespace

TrialResult run_trial(const SimulationSpec& spec, double snr_db, int trial) {
  spec.validate();
  const int n_users = spec.system.num_users;
  const int n_ant = spec.system.num_tx_antennas;
  const int n_rb = spec.system.num_rbs;
  const int n_layers = spec.uep.layers();

  SystemConfig sys = spec.system;
  sys.snr_db = snr_db;
  const ChannelRealization ch = generate_block_fading(sys, spec.seed, trial);

  TrialResult res;
  res.user_rate_bits.assign(n_users, 0.0);
  res.user_psnr_db.assign(n_users, 0.0);

  // Broadcast rate per (rb, antenna): every receiver must be able to decode
  // every antenna, targets start from zero.
  const RateVector zero_targets(n_ant, 0.0);
  const std::vector<AntennaSet> all_desired(n_users, AntennaSet::full(n_ant));
  std::vector<RateVector> rb_rates(n_rb);
  for (int i = 0; i < n_rb; ++i) {
    std::vector<CMat> hs;
    hs.reserve(n_users);
    for (int k = 0; k < n_users; ++k) hs.push_back(ch.at(i, k));
    rb_rates[i] = allocate_rates(hs, zero_targets, spec.decoder_cfg, all_desired);

    if (spec.oracle_checks) {
      // Cross-check the chain group search against enumeration on this block.
      for (int k = 0; k < n_users; ++k) {
        const GroupChoice fast = select_best_group_fast(ch.at(i, k), AntennaSet::full(n_ant),
                                                        zero_targets,
                                                        spec.decoder_cfg.max_group_size);
        const GroupChoice ref = select_best_group_exhaustive(ch.at(i, k), AntennaSet::full(n_ant),
                                                             zero_targets,
                                                             spec.decoder_cfg.max_group_size);
        if (!(fast.group == ref.group) || std::abs(fast.margin - ref.margin) > 1e-9)
          ++res.oracle_mismatches;
      }
    }
  }

  // Supported spectral rate of each resource for each (user, layer).
  AllocProblem prob;
  prob.grid = RateGrid(n_rb, n_ant, n_users, n_layers);
  prob.models = spec.models;
  prob.uses_per_resource = spec.system.channel_uses_per_rb;
  for (int i = 0; i < n_rb; ++i)
    for (int t = 0; t < n_ant; ++t)
      for (int k = 0; k < n_users; ++k)
        for (int l = 0; l < n_layers; ++l)
          prob.grid.at(i, t, k, l) = select_mcs(rb_rates[i][t], spec.uep.margin[l]).spectral_rate;

  const AllocationResult ar = solve_allocation(prob);
  res.base_layer_infeasible = ar.base_layer_infeasible;

  if (spec.oracle_checks) {
    try {
      const Allocation ref = exhaustive_allocation(prob, 200'000);
      if (allocation_objective(ref, prob) <
          allocation_objective(ar.alloc, prob) - 1e-9)
        ++res.oracle_mismatches;  // enumeration can never lose to the solver
    } catch (const InstanceTooLarge&) {
      // Skip the cross-check on full-size grids.
    }
  }

  // Every layer ships at one common rate across its resources.
  std::vector<std::vector<double>> layer_rate(n_users, std::vector<double>(n_layers, 0.0));
  for (int k = 0; k < n_users; ++k)
    for (int l = 0; l < n_layers; ++l)
      layer_rate[k][l] = layer_rate_cap(ar.alloc, prob.grid, k, l);

  std::vector<ActiveRb> rbs(n_rb);
  for (int i = 0; i < n_rb; ++i) {
    rbs[i].tx_rate.assign(n_ant, 0.0);
    rbs[i].block_pass.assign(n_ant, 1.0);
    for (int t = 0; t < n_ant; ++t) {
      if (!ar.alloc.assigned(i, t)) continue;
      const int k = ar.alloc.user_of(i, t);
      const int l = ar.alloc.layer_of(i, t);
      if (layer_rate[k][l] <= 0.0) continue;  // unusable layer, antenna stays silent
      rbs[i].active.insert(t);
      rbs[i].tx_rate[t] = layer_rate[k][l];
      rbs[i].block_pass[t] = 1.0 - spec.uep.target_bler[l];
    }
  }

  // Decode and collect delivered payload bits per (user, layer).
  std::vector<std::vector<double>> delivered_bits(n_users,
                                                  std::vector<double>(n_layers, 0.0));
  for (int i = 0; i < n_rb; ++i) {
    for (int k = 0; k < n_users; ++k) {
      AntennaSet desired;
      for (int t : rbs[i].active.indices())
        if (ar.alloc.user_of(i, t) == k) desired.insert(t);
      if (desired.empty()) continue;
      ++res.decode_attempts;

      const RbDecode d = decode_rb(spec, ch.at(i, k), rbs[i], desired, i, k, trial);
      if (d.used_mmse) ++res.hybrid_mmse_rbs;
      if (!(d.delivered == desired)) ++res.decode_failures;
      for (int t : d.delivered.indices()) {
        const int l = ar.alloc.layer_of(i, t);
        delivered_bits[k][l] += layer_rate[k][l] * spec.system.channel_uses_per_rb;
      }
    }
  }

  for (int k = 0; k < n_users; ++k) {
    res.user_rate_bits[k] = received_rate(spec.models[k], delivered_bits[k]);
    res.user_psnr_db[k] = psnr_of_rate(spec.models[k], res.user_rate_bits[k]);
  }
  return res;
}

SweepResult run_sweep(const SimulationSpec& spec, int num_threads) {
  spec.validate();
  if (num_threads < 1) throw std::invalid_argument("run_sweep: num_threads must be >= 1");

  SweepResult out;
  for (double snr : spec.snr_sweep_db) {
    std::vector<TrialResult> trials(spec.trials);
    std::exception_ptr first_error;

#ifdef _OPENMP
    if (num_threads > 1) {
#pragma omp parallel for num_threads(num_threads) schedule(dynamic)
      for (int t = 0; t < spec.trials; ++t) {
        try {
          trials[t] = run_trial(spec, snr, t);
        } catch (...) {
#pragma omp critical
          if (!first_error) first_error = std::current_exception();
        }
      }
    } else
#endif
    {
      for (int t = 0; t < spec.trials; ++t) trials[t] = run_trial(spec, snr, t);
    }
    if (first_error) std::rethrow_exception(first_error);

    // Fixed-order reduction over the per-trial slots keeps the aggregate
    // independent of how trials were scheduled.
    double sum = 0.0, sum_sq = 0.0;
    long attempts = 0, failures = 0;
    for (const TrialResult& tr : trials) {
      double user_sum = 0.0;
      for (double q : tr.user_psnr_db) user_sum += q;
      const double trial_mean = user_sum / static_cast<double>(tr.user_psnr_db.size());
      sum += trial_mean;
      sum_sq += trial_mean * trial_mean;
      attempts += tr.decode_attempts;
      failures += tr.decode_failures;
      out.oracle_mismatches += tr.oracle_mismatches;
    }
    const double n = static_cast<double>(spec.trials);
    SweepRow row;
    row.snr_db = snr;
    row.decoder = decoder_mode_name(spec.decoder);
    row.mean_psnr_db = sum / n;
    if (spec.trials > 1) {
      const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
      row.stderr_db = std::sqrt(var / n);
    }
    row.outage_rate = attempts > 0 ? static_cast<double>(failures) / attempts : 0.0;
    out.rows.push_back(row);
  }
  return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string csv = "snr_db,decoder,mean_psnr_db,stderr_db,outage_rate\n";
  char line[160];
  for (const SweepRow& r : rows) {
    std::snprintf(line, sizeof(line), "%.2f,%s,%.6f,%.6f,%.6f\n", r.snr_db, r.decoder.c_str(),
                  r.mean_psnr_db, r.stderr_db, r.outage_rate);
    csv += line;
  }
  return csv;
}

}  // namespace svb
