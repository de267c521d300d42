#pragma once

#include <stdexcept>
#include <vector>

#include "svb/video_model.hpp"

namespace svb {

// Supported spectral rate (bits per channel use) of resource (rb, antenna)
// if it were to carry layer `layer` of user `user`; zero when the resource
// cannot carry that layer at all.
struct RateGrid {
  int n_rb = 0, n_ant = 0, n_users = 0, n_layers = 0;
  std::vector<double> v;

  RateGrid() = default;
  RateGrid(int rb, int ant, int users, int layers)
      : n_rb(rb), n_ant(ant), n_users(users), n_layers(layers),
        v(static_cast<size_t>(rb) * ant * users * layers, 0.0) {}

  double& at(int i, int t, int k, int l) {
    return v[((static_cast<size_t>(i) * n_ant + t) * n_users + k) * n_layers + l];
  }
  double at(int i, int t, int k, int l) const {
    return v[((static_cast<size_t>(i) * n_ant + t) * n_users + k) * n_layers + l];
  }
  int resources() const { return n_rb * n_ant; }
};

// Assignment of resources (rb, antenna) to (user, layer) streams; each
// resource carries at most one stream.
struct Allocation {
  int n_rb = 0, n_ant = 0, n_layers = 0;
  std::vector<int> owner;  // flat (rb * n_ant + t) -> user * n_layers + layer, -1 when free

  Allocation() = default;
  Allocation(int rb, int ant, int layers)
      : n_rb(rb), n_ant(ant), n_layers(layers),
        owner(static_cast<size_t>(rb) * ant, -1) {}

  int slot(int i, int t) const { return owner[static_cast<size_t>(i) * n_ant + t]; }
  bool assigned(int i, int t) const { return slot(i, t) >= 0; }
  int user_of(int i, int t) const { return slot(i, t) / n_layers; }
  int layer_of(int i, int t) const { return slot(i, t) % n_layers; }
  void assign(int i, int t, int k, int l) {
    owner[static_cast<size_t>(i) * n_ant + t] = k * n_layers + l;
  }
  void clear(int i, int t) { owner[static_cast<size_t>(i) * n_ant + t] = -1; }

  int count(int k, int l) const {
    int c = 0;
    for (int s : owner) c += (s == k * n_layers + l);
    return c;
  }
};

struct AllocProblem {
  RateGrid grid;
  std::vector<QualityModel> models;  // one per user
  double uses_per_resource = 1.0;    // channel uses per resource block

  void validate() const;
};

struct AllocationResult {
  Allocation alloc;
  // True when some user's base layer could not be filled from the available
  // resources; the best partial fill is still returned.
  bool base_layer_infeasible = false;
};

struct InstanceTooLarge : std::length_error {
  using std::length_error::length_error;
};

// A layer is transmitted at one common rate on every resource assigned to
// it: the smallest grid entry among them (0 when none are assigned).
double layer_rate_cap(const Allocation& alloc, const RateGrid& grid, int user, int layer);

// Total quality gain of an allocation: per (user, layer), slope-weighted
// usable bits, clipped to the layer's rate span, honoring the common-rate cap
// and the lower-layer completion rule.
double allocation_objective(const Allocation& alloc, const AllocProblem& p);

// Allocated payload bits per layer of one user (cap * uses * resource count),
// before the lower-layer completion rule.
std::vector<double> allocated_layer_bits(const Allocation& alloc, const AllocProblem& p, int user);

// Greedy maximizer: first fills every user's base layer (fewest resources
// that reach the base rate span, strongest resources first), then repeatedly
// applies the batch of assignments with the best true objective gain, and
// finally hill-climbs by retargeting one or two resources at a time while
// that strictly improves the objective. The infeasibility flag reports the
// priority pass; the polish may still trade a fillable base away when an
// enhancement elsewhere is worth more.
// Ties prefer fewer resources, then the lexicographically first candidate.
AllocationResult solve_allocation(const AllocProblem& p);

// Reference maximizer enumerating every assignment of resources to streams;
// ties resolved to the enumeration-lexicographically first allocation.
// Throws InstanceTooLarge when the candidate count exceeds `limit`.
Allocation exhaustive_allocation(const AllocProblem& p, long long limit = 10'000'000);

}  // namespace svb
