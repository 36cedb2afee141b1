#ifndef UNILAT_PERCOLATION_HPP
#define UNILAT_PERCOLATION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "unilat/auxrand.hpp"
#include "unilat/lattice.hpp"

namespace unilat {

// Result of the backward oriented-percolation construction over a window.
// layers[k] is the deduplicated Delta_k; omega is (union of layers) together
// with its external boundary; b_of_lambda = Lambda union omega.
struct ClusterRegion {
  Box box;
  std::vector<Region> layers;
  Region omega;
  Region b_of_lambda;
  int kmax = 0;
};

// Backward BFS per the Delta recursion: Delta_0 = {s in int. boundary of
// Lambda : Z=1}; Delta_{k+1} = parents of Delta_k with Z=1, each site visited
// at most once. `z_field(s)` must return 0 or 1. Throws StepLimitExceeded
// after `step_limit` sites enter the cluster (sub-threshold delta may not
// terminate otherwise).
template <typename ZField>
ClusterRegion build_cluster_with(const ZField& z_field, const Box& box,
                                 std::uint64_t step_limit) {
  if (step_limit < 1) throw error(errc::usage, "step_limit must be >= 1");
  ClusterRegion out;
  out.box = box;

  Region core;
  std::vector<Site> frontier;
  Region delta0;
  const Region lambda = box.sites();
  for (Site s : internal_boundary(lambda))
    if (z_field(s) == 1) {
      delta0.insert(s);
      core.insert(s);
      frontier.push_back(s);
    }
  out.layers.push_back(delta0);

  std::uint64_t steps = core.size();
  while (!frontier.empty()) {
    std::vector<Site> next;
    Region layer;
    for (Site s : frontier)
      for (Site p : parents_of(s)) {
        if (core.contains(p) || z_field(p) != 1) continue;
        core.insert(p);
        layer.insert(p);
        next.push_back(p);
        if (++steps > step_limit)
          throw error(errc::step_limit_exceeded,
                      "StepLimitExceeded: cluster exceeded " + std::to_string(step_limit) +
                          " sites (delta likely below threshold)");
      }
    if (!layer.empty()) out.layers.push_back(layer);
    frontier = std::move(next);
  }

  out.kmax = static_cast<int>(out.layers.size()) - 1;
  out.omega = core;
  for (Site s : external_boundary(core)) out.omega.insert(s);
  out.b_of_lambda = box.sites();
  for (Site s : out.omega) out.b_of_lambda.insert(s);
  return out;
}

ClusterRegion build_cluster(const SitePlan& plan, const Box& box, std::uint64_t step_limit);

// Frontier check: every site of the internal boundary of B(Lambda) must carry
// Z=0. Returns the violating sites (empty on success).
std::vector<Site> frontier_violations(const ClusterRegion& c, const SitePlan& plan);

template <typename ZField>
std::vector<Site> frontier_violations_with(const ClusterRegion& c, const ZField& z_field) {
  std::vector<Site> bad;
  for (Site s : internal_boundary(c.b_of_lambda))
    if (z_field(s) != 0) bad.push_back(s);
  return bad;
}

struct ClusterStats {
  int size = 0;             // L
  std::uint64_t reps = 0;
  double mean_omega = 0.0;
  double se_omega = 0.0;
  double mean_b = 0.0;
  double mean_kmax = 0.0;
  int max_kmax = 0;
};

// Monte Carlo cluster statistics over Lambda_{L,L} windows at Z-law
// P(Z=0)=delta. Any replicate that exceeds step_limit aborts the run with
// StepLimitExceeded reporting the count of aborted replicates.
std::vector<ClusterStats> cluster_stats(double delta, std::span<const int> sizes,
                                        std::uint64_t reps, std::uint64_t seed,
                                        std::uint64_t step_limit, int workers = 1);

}  // namespace unilat

#endif
