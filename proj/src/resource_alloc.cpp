#include "svb/resource_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace svb {
namespace {

constexpr double kGainTol = 1e-12;

struct Candidate {
  int res = 0;      // flat resource index (rb * n_ant + t)
  double rate = 0;  // grid entry for the (user, layer) considered
};

// Free resources able to carry (user, layer), strongest first; ties by index
// keep every run deterministic.
std::vector<Candidate> usable_free(const Allocation& a, const RateGrid& g, int user, int layer) {
  std::vector<Candidate> out;
  for (int i = 0; i < g.n_rb; ++i)
    for (int t = 0; t < g.n_ant; ++t) {
      if (a.assigned(i, t)) continue;
      const double r = g.at(i, t, user, layer);
      if (r > 0.0) out.push_back({i * g.n_ant + t, r});
    }
  std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) {
    if (x.rate != y.rate) return x.rate > y.rate;
    return x.res < y.res;
  });
  return out;
}

void assign_flat(Allocation& a, int res, int user, int layer) {
  a.assign(res / a.n_ant, res % a.n_ant, user, layer);
}

// Objective evaluation with reusable scratch buffers: the local-search polish
// calls this tens of thousands of times per solve, so per-call allocations
// would dominate the runtime.
struct ObjectiveEval {
  std::vector<double> cap, bits;
  std::vector<int> cnt;

  double operator()(const Allocation& a, const AllocProblem& p) {
    const int n_layers = p.grid.n_layers;
    const int n_slots = p.grid.n_users * n_layers;
    cap.assign(n_slots, std::numeric_limits<double>::infinity());
    cnt.assign(n_slots, 0);
    bits.assign(n_slots, 0.0);
    for (int i = 0; i < p.grid.n_rb; ++i)
      for (int t = 0; t < p.grid.n_ant; ++t) {
        const int s = a.slot(i, t);
        if (s < 0) continue;
        cap[s] = std::min(cap[s], p.grid.at(i, t, s / n_layers, s % n_layers));
        ++cnt[s];
      }
    for (int s = 0; s < n_slots; ++s)
      if (cnt[s] > 0) bits[s] = cap[s] * p.uses_per_resource * cnt[s];

    double obj = 0.0;
    for (int k = 0; k < p.grid.n_users; ++k) {
      const QualityModel& model = p.models[k];
      const std::span<const double> user_bits(bits.data() + static_cast<size_t>(k) * n_layers,
                                              static_cast<size_t>(n_layers));
      for (int l = 0; l < n_layers; ++l) {
        const double eff = effective_layer_bits(model, user_bits, l);
        obj += model.slope[l] * std::min(eff, model.gap(l));
      }
    }
    return obj;
  }
};

}  // namespace

void AllocProblem::validate() const {
  if (grid.n_rb < 1 || grid.n_ant < 1 || grid.n_users < 1 || grid.n_layers < 1)
    throw std::invalid_argument("allocation: empty rate grid");
  if (static_cast<int>(models.size()) != grid.n_users)
    throw std::invalid_argument("allocation: need one quality model per user");
  for (const QualityModel& m : models) {
    m.validate();
    if (m.layers() != grid.n_layers)
      throw std::invalid_argument("allocation: quality model layer count mismatch");
  }
  if (!(uses_per_resource > 0.0))
    throw std::invalid_argument("allocation: uses_per_resource must be > 0");
  for (double r : grid.v)
    if (!(r >= 0.0) || !std::isfinite(r))
      throw std::invalid_argument("allocation: grid rates must be finite and >= 0");
}

double layer_rate_cap(const Allocation& alloc, const RateGrid& grid, int user, int layer) {
  double cap = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < grid.n_rb; ++i)
    for (int t = 0; t < grid.n_ant; ++t)
      if (alloc.assigned(i, t) && alloc.user_of(i, t) == user && alloc.layer_of(i, t) == layer) {
        cap = std::min(cap, grid.at(i, t, user, layer));
        any = true;
      }
  return any ? cap : 0.0;
}

std::vector<double> allocated_layer_bits(const Allocation& alloc, const AllocProblem& p,
                                         int user) {
  std::vector<double> bits(p.grid.n_layers, 0.0);
  for (int l = 0; l < p.grid.n_layers; ++l)
    bits[l] = layer_rate_cap(alloc, p.grid, user, l) * p.uses_per_resource *
              alloc.count(user, l);
  return bits;
}

double allocation_objective(const Allocation& alloc, const AllocProblem& p) {
  ObjectiveEval eval;
  return eval(alloc, p);
}

namespace {

// Leaf-evaluation budget for one full scan of a given move width; widths
// whose worst-case scan would exceed it are skipped on that instance.
constexpr double kPolishScanBudget = 250'000.0;
constexpr int kMaxPolishWidth = 6;

// Depth-limited retargeting scan. Picks `depth` distinct resources in
// ascending order starting at `first`, moves each away from its current slot,
// and keeps the first combination that strictly raises the objective (the
// accepted retargets stay applied as the recursion unwinds).
struct PolishScan {
  const AllocProblem& p;
  Allocation& alloc;
  const std::vector<std::vector<int>>& menu;
  ObjectiveEval& eval;
  double current;

  bool descend(int first, int depth) {
    const int n_res = static_cast<int>(menu.size());
    for (int r = first; r <= n_res - depth; ++r) {
      const int saved = alloc.owner[r];
      for (const int s : menu[r]) {
        if (s == saved) continue;
        alloc.owner[r] = s;
        if (depth == 1) {
          const double obj = eval(alloc, p);
          if (obj > current + kGainTol) {
            current = obj;
            return true;
          }
        } else if (descend(r + 1, depth - 1)) {
          return true;
        }
      }
      alloc.owner[r] = saved;
    }
    return false;
  }
};

// Hill-climb on the final assignment: jointly retarget up to four resources
// whenever that strictly raises the objective. The multi-resource moves are
// the ones the constructive passes cannot express — e.g. shifting a stream
// onto weaker resources to free a strong one for somebody else loses
// objective in every partial state and only pays off combined. Wide scans
// are enabled per instance by the evaluation budget: tiny instances get the
// full width, large ones settle for one- and two-resource moves.
void polish_allocation(const AllocProblem& p, Allocation& alloc, ObjectiveEval& eval) {
  const int n_res = p.grid.resources();
  const int n_ant = p.grid.n_ant;
  // Slot menu per resource: free (-1) plus every stream it can carry.
  std::vector<std::vector<int>> menu(n_res);
  size_t max_menu = 1;
  for (int r = 0; r < n_res; ++r) {
    menu[r].push_back(-1);
    for (int k = 0; k < p.grid.n_users; ++k)
      for (int l = 0; l < p.grid.n_layers; ++l)
        if (p.grid.at(r / n_ant, r % n_ant, k, l) > 0.0)
          menu[r].push_back(k * p.grid.n_layers + l);
    max_menu = std::max(max_menu, menu[r].size());
  }

  int width_cap = 1;
  double scan_cost = static_cast<double>(n_res) * static_cast<double>(max_menu - 1);
  for (int w = 2; w <= kMaxPolishWidth && w <= n_res; ++w) {
    // One more chosen resource multiplies the combination count by at most
    // (n_res - w + 1) / w and the slot choices by (max_menu - 1).
    scan_cost *= static_cast<double>(n_res - w + 1) * static_cast<double>(max_menu - 1) / w;
    if (scan_cost > kPolishScanBudget) break;
    width_cap = w;
  }

  PolishScan scan{p, alloc, menu, eval, eval(alloc, p)};
  for (int improvements = 0; improvements < 1000; ++improvements) {
    bool improved = false;
    for (int w = 1; w <= width_cap; ++w)
      if (scan.descend(0, w)) {
        improved = true;
        break;  // rescan from the cheapest width after every accepted move
      }
    if (!improved) break;
  }
}

}  // namespace

AllocationResult solve_allocation(const AllocProblem& p) {
  p.validate();
  AllocationResult res;
  res.alloc = Allocation(p.grid.n_rb, p.grid.n_ant, p.grid.n_layers);
  Allocation& alloc = res.alloc;

  // Base layers first: every user's stream is useless without one, so each
  // user grabs the cheapest set of resources that covers its base rate span.
  for (int k = 0; k < p.grid.n_users; ++k) {
    const double need = p.models[k].gap(0);
    const std::vector<Candidate> cands = usable_free(alloc, p.grid, k, 0);
    int best_j = 0;
    double best_bits = 0.0;
    bool reached = false;
    for (int j = 1; j <= static_cast<int>(cands.size()); ++j) {
      // Strongest-first prefix: the j-th candidate's rate is the common cap.
      const double bits = cands[j - 1].rate * p.uses_per_resource * j;
      if (!reached && bits >= need) {
        reached = true;
        best_j = j;
        best_bits = bits;
        break;  // smallest resource count that fills the base layer
      }
      if (bits > best_bits) {
        best_bits = bits;
        best_j = j;
      }
    }
    for (int j = 0; j < best_j; ++j) assign_flat(alloc, cands[j].res, k, 0);
    if (!reached) res.base_layer_infeasible = true;
  }

  // Greedy improvement: among all (user, layer) strongest-first batches of
  // free resources, apply the one with the best true objective gain.
  ObjectiveEval eval;
  double current = eval(alloc, p);
  while (true) {
    double best_gain = kGainTol;
    int best_k = -1, best_l = -1, best_j = 0;
    std::vector<Candidate> best_cands;
    for (int k = 0; k < p.grid.n_users; ++k)
      for (int l = 0; l < p.grid.n_layers; ++l) {
        const std::vector<Candidate> cands = usable_free(alloc, p.grid, k, l);
        Allocation trial = alloc;
        for (int j = 1; j <= static_cast<int>(cands.size()); ++j) {
          assign_flat(trial, cands[j - 1].res, k, l);
          const double gain = eval(trial, p) - current;
          // Strictly better gains win; ties keep the earlier (fewer
          // resources, lower user/layer) candidate.
          if (gain > best_gain + kGainTol) {
            best_gain = gain;
            best_k = k;
            best_l = l;
            best_j = j;
            best_cands = cands;
          }
        }
      }
    if (best_k < 0) break;
    for (int j = 0; j < best_j; ++j) assign_flat(alloc, best_cands[j].res, best_k, best_l);
    current = eval(alloc, p);
  }

  polish_allocation(p, alloc, eval);
  return res;
}

Allocation exhaustive_allocation(const AllocProblem& p, long long limit) {
  p.validate();
  const int n_res = p.grid.resources();
  const int n_slots = p.grid.n_users * p.grid.n_layers + 1;  // plus "free"
  double combos = 1.0;
  for (int i = 0; i < n_res; ++i) {
    combos *= n_slots;
    if (combos > static_cast<double>(limit))
      throw InstanceTooLarge("exhaustive_allocation: instance too large");
  }

  std::vector<int> digits(n_res, 0);  // 0 = free, v > 0 = slot v - 1
  Allocation best(p.grid.n_rb, p.grid.n_ant, p.grid.n_layers);
  double best_obj = allocation_objective(best, p);
  while (true) {
    // Advance the odometer; the last resource moves fastest, so candidates
    // appear in lexicographic order over (resource 0, resource 1, ...).
    int pos = n_res - 1;
    while (pos >= 0 && digits[pos] == n_slots - 1) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];

    Allocation a(p.grid.n_rb, p.grid.n_ant, p.grid.n_layers);
    for (int i = 0; i < n_res; ++i)
      if (digits[i] > 0) a.owner[i] = digits[i] - 1;
    const double obj = allocation_objective(a, p);
    if (obj > best_obj) {  // strict: first-found keeps the lexicographic tie-break
      best_obj = obj;
      best = a;
    }
  }
  return best;
}

}  // namespace svb
