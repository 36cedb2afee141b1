#ifndef UNILAT_SAMPLER_HPP
#define UNILAT_SAMPLER_HPP

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "unilat/auxrand.hpp"
#include "unilat/kernel.hpp"
#include "unilat/lattice.hpp"
#include "unilat/percolation.hpp"

namespace unilat {

// Kernel together with its minorization split; the unit every sampler
// consumes. Immutable, safe for shared concurrent reads.
struct CoupledKernel {
  FiniteKernel kernel;
  Minorization minor;

  explicit CoupledKernel(FiniteKernel k) : kernel(std::move(k)), minor(compute_minorization(kernel)) {}

  SitePlan plan(std::uint64_t seed, std::uint64_t replicate) const {
    return SitePlan{seed, replicate, minor.delta, minor.phi};
  }
};

// The minorization coupling: z=0 takes the regeneration value v, z=1 draws from
// the residual H(.|y1,y2) by inverse CDF. Requires delta > 0.
int coupling_step(int z, int v, double u, int y1, int y2, const FiniteKernel& k,
                  const Minorization& m);

// Forward realization of K(.|y1,y2) at a site, valid for every delta in
// [0,1]: at delta=0 it degenerates to inverse-CDF sampling of the kernel row,
// at delta=1 to the V field.
inline int realize_site(const CoupledKernel& ck, const SitePlan& plan, Site s, int y1,
                        int y2) {
  if (plan.z_at(s) == 0) return plan.v_at(s);
  const double u = plan.uniform(s, stream_id::u);
  if (ck.minor.delta > 0.0) return inverse_cdf_sample(ck.minor.h_row(y1, y2), u);
  return inverse_cdf_sample(ck.kernel.row(y1, y2), u);
}

using BoundaryValues = std::unordered_map<Site, int, SiteHash>;
using SiteValues = std::unordered_map<Site, int, SiteHash>;

// Recursion X_{i,j} = g(Z,V,U; X_{i-1,j}, X_{i,j-1}) along the increasing
// order of `region`, reading missing parents from `boundary` (which must
// cover the external boundary of the region).
SiteValues forward_sample(const SitePlan& plan, const CoupledKernel& ck, const Region& region,
                          const BoundaryValues& boundary);

// Dense fast path over the box {1..m}x{1..n}; boundary(s) supplies values on
// the sites (i,0) and (0,j). Result is row-major: value(i,j) = out[(j-1)*m + (i-1)].
std::vector<std::uint8_t> forward_box_sample(const SitePlan& plan, const CoupledKernel& ck,
                                             int m, int n,
                                             const std::function<int(Site)>& boundary);

struct FieldSample {
  Box box;
  std::vector<std::uint8_t> values;  // (j-1)*m + (i-1)
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::uint64_t region_size = 0;  // |B(Lambda)|, or sites evaluated by the block sampler
  int kmax = 0;

  int at(int i, int j) const {
    return values[static_cast<std::size_t>(j - 1) * box.m + (i - 1)];
  }
  friend bool operator==(const FieldSample& a, const FieldSample& b) {
    return a.box == b.box && a.values == b.values;
  }
};

struct SamplerOptions {
  double delta0 = 0.318;
  bool force = false;  // run even when the assumption gate fails
  std::uint64_t step_limit = 1000000;
};

// Perfect sampler: builds B(Lambda) backward, then evaluates it in
// increasing order (Z=0 sites take V, Z=1 sites apply the coupling step).
// The output restricted to the box has exactly the equilibrium law.
FieldSample perfect_sample(const CoupledKernel& ck, const Box& box, std::uint64_t seed,
                           std::uint64_t replicate, const SamplerOptions& opts = {});

// Replicate-parallel batch; element r uses replicate index first_replicate+r.
std::vector<FieldSample> perfect_sample_batch(const CoupledKernel& ck, const Box& box,
                                              std::uint64_t seed, std::uint64_t reps,
                                              const SamplerOptions& opts = {}, int workers = 1,
                                              std::uint64_t first_replicate = 0);

}  // namespace unilat

#endif
