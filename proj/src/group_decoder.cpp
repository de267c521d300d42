#include "svb/group_decoder.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace svb {
namespace {

void check_columns(const CMat& h, AntennaSet s, const char* what) {
  if (!AntennaSet::full(h.cols()).contains_all(s))
    throw std::invalid_argument(std::string(what) + ": antenna index out of range");
}

void check_rates(const CMat& h, const RateVector& rates) {
  if (static_cast<int>(rates.size()) != h.cols())
    throw std::invalid_argument("rates: need one entry per transmit antenna");
  for (double r : rates)
    if (is_bounded_rate(r) && (!std::isfinite(r)))
      throw std::invalid_argument("rates: entries must be finite or unbounded");
}

AntennaSet bounded_antennas(const RateVector& rates, AntennaSet within) {
  AntennaSet s;
  for (int t : within.indices())
    if (is_bounded_rate(rates[t])) s.insert(t);
  return s;
}

// Margin comparison with the deterministic lexicographic tie-break.
struct BestGroup {
  bool has = false;
  AntennaSet group;
  double margin = -std::numeric_limits<double>::infinity();

  void offer(AntennaSet g, double m) {
    if (!has || m > margin + kMarginTieTol) {
      has = true;
      group = g;
      margin = m;
    } else if (m >= margin - kMarginTieTol && g.lex_less(group)) {
      group = g;
      if (m > margin) margin = m;
    }
  }
};

}  // namespace

void DecoderConfig::validate() const {
  if (max_group_size < 1) throw std::invalid_argument("decoder: max_group_size must be >= 1");
  if (!(hybrid_threshold >= 0.0) || !std::isfinite(hybrid_threshold))
    throw std::invalid_argument("decoder: hybrid_threshold must be finite and >= 0");
}

double decode_margin(const CMat& h, AntennaSet decode_set, AntennaSet interference,
                     const RateVector& rates) {
  if (decode_set.empty()) throw std::invalid_argument("decode_margin: decode set is empty");
  if (decode_set.intersects(interference))
    throw std::invalid_argument("decode_margin: decode set overlaps interference set");
  check_columns(h, decode_set | interference, "decode_margin");
  check_rates(h, rates);

  double rate_sum = 0.0;
  for (int t : decode_set.indices()) {
    if (!is_bounded_rate(rates[t]))
      throw std::invalid_argument("decode_margin: unbounded rate inside decode set");
    rate_sum += rates[t];
  }

  // log2 det(I + H_D^H (I + H_B H_B^H)^-1 H_D)
  //   = log2 det(I + H_B H_B^H + H_D H_D^H) - log2 det(I + H_B H_B^H),
  // evaluated as a difference of two well-conditioned determinants.
  const double whole = logdet2_pd(gram_plus_identity(h.columns(decode_set | interference)));
  const double noise_only = logdet2_pd(gram_plus_identity(h.columns(interference)));
  return whole - noise_only - rate_sum;
}

double group_margin(const CMat& h, AntennaSet group, AntennaSet interference,
                    const RateVector& rates) {
  if (group.intersects(interference))
    throw std::invalid_argument("group_margin: group overlaps interference set");
  check_columns(h, group | interference, "group_margin");
  check_rates(h, rates);

  const AntennaSet constrained = bounded_antennas(rates, group);
  if (constrained.empty()) return 0.0;

  double worst = std::numeric_limits<double>::infinity();
  for_each_nonempty_subset(constrained, [&](AntennaSet d) {
    const double m = decode_margin(h, d, interference, rates) / d.size();
    if (m < worst) worst = m;
  });
  return worst;
}

double partition_margin(const CMat& h, const OrderedPartition& p, const RateVector& rates) {
  AntennaSet seen;
  for (AntennaSet g : p.stages) {
    if (g.empty()) throw std::invalid_argument("partition_margin: empty stage");
    if (seen.intersects(g)) throw std::invalid_argument("partition_margin: stages overlap");
    seen = seen | g;
  }
  if (seen.intersects(p.remainder))
    throw std::invalid_argument("partition_margin: remainder overlaps a stage");
  check_columns(h, seen | p.remainder, "partition_margin");

  const AntennaSet all = AntennaSet::full(h.cols());
  AntennaSet decoded;
  double worst = std::numeric_limits<double>::infinity();
  for (AntennaSet g : p.stages) {
    decoded = decoded | g;
    const double m = group_margin(h, g, all.without(decoded), rates);
    if (m < worst) worst = m;
  }
  return worst;
}

CMat noise_covariance(const CMat& h, AntennaSet undecoded, double noise_var) {
  check_columns(h, undecoded, "noise_covariance");
  if (!(noise_var > 0.0)) throw std::invalid_argument("noise_covariance: noise_var must be > 0");
  const int m = h.rows();
  CMat cov(m, m);
  for (int i = 0; i < m; ++i) cov(i, i) = noise_var;
  for (int q : undecoded.indices())
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) cov(i, j) += h(i, q) * std::conj(h(j, q));
  return cov;
}

GroupChoice select_best_group_exhaustive(const CMat& h, AntennaSet undecoded,
                                         const RateVector& rates, int max_group_size) {
  if (undecoded.empty())
    throw std::invalid_argument("select_best_group: no undecoded antennas");
  BestGroup best;
  for_each_nonempty_subset(undecoded, [&](AntennaSet g) {
    if (g.size() > max_group_size) return;
    best.offer(g, group_margin(h, g, undecoded.without(g), rates));
  });
  return {best.group, best.margin};
}

GroupChoice select_best_group_fast(const CMat& h, AntennaSet undecoded, const RateVector& rates,
                                   int max_group_size) {
  if (undecoded.empty())
    throw std::invalid_argument("select_best_group: no undecoded antennas");

  // Chain starts: every subset of exactly max_group_size antennas, plus the
  // full undecoded set.
  std::vector<AntennaSet> starts;
  for_each_nonempty_subset(undecoded, [&](AntennaSet g) {
    if (g.size() == max_group_size) starts.push_back(g);
  });
  if (undecoded.size() != max_group_size) starts.push_back(undecoded);

  std::unordered_set<std::uint32_t> visited;
  BestGroup best;
  for (AntennaSet start : starts) {
    AntennaSet g = start;
    while (!g.empty() && !visited.contains(g.bits())) {
      visited.insert(g.bits());
      if (g.size() <= max_group_size)
        best.offer(g, group_margin(h, g, undecoded.without(g), rates));

      // Weakest subset: smallest decode margin per antenna; ties resolved to
      // the smallest cardinality, then lexicographically.  Normalizing by the
      // subset size is what makes the shrinking chain pass through the best
      // group (stripping by raw joint margin overshoots: a large subset with
      // a bad sum can hide a strong small group inside it).
      const AntennaSet constrained = bounded_antennas(rates, g);
      if (constrained.empty()) break;
      bool have_w = false;
      AntennaSet weakest;
      double w_margin = 0.0;
      for_each_nonempty_subset(constrained, [&](AntennaSet w) {
        const double m = decode_margin(h, w, undecoded.without(g), rates) / w.size();
        if (!have_w || m < w_margin - kMarginTieTol) {
          have_w = true;
          weakest = w;
          w_margin = m;
        } else if (m <= w_margin + kMarginTieTol) {
          if (w.size() < weakest.size() ||
              (w.size() == weakest.size() && w.lex_less(weakest))) {
            weakest = w;
            if (m < w_margin) w_margin = m;
          }
        }
      });
      g = g.without(weakest);
    }
  }
  return {best.group, best.margin};
}

GroupChoice select_best_group(const CMat& h, AntennaSet undecoded, const RateVector& rates,
                              int max_group_size) {
  // Count eligible groups; fall back to chain search when enumeration grows.
  long candidates = 0;
  for_each_nonempty_subset(undecoded, [&](AntennaSet g) {
    if (g.size() <= max_group_size) ++candidates;
  });
  if (candidates <= 64) return select_best_group_exhaustive(h, undecoded, rates, max_group_size);
  return select_best_group_fast(h, undecoded, rates, max_group_size);
}

PartitionResult greedy_partition(const CMat& h, const RateVector& rates, const DecoderConfig& cfg,
                                 AntennaSet desired) {
  cfg.validate();
  check_columns(h, desired, "greedy_partition");
  check_rates(h, rates);

  PartitionResult res;
  AntennaSet undecoded = AntennaSet::full(h.cols());
  while (desired.intersects(undecoded)) {
    const GroupChoice gc = select_best_group(h, undecoded, rates, cfg.max_group_size);
    // Margins within the tie tolerance of zero count as decodable: rates
    // produced by the max-min allocator sit exactly on the boundary, and the
    // evaluation jitters by a few ulps around it.
    if (gc.margin < -kMarginTieTol) {
      res.outage = true;
      break;
    }
    res.partition.stages.push_back(gc.group);
    res.stage_margins.push_back(gc.margin);
    undecoded = undecoded.without(gc.group);
  }
  res.partition.remainder = undecoded;
  return res;
}

}  // namespace svb
