#include "unilat/sampler.hpp"

#include <string>

#include "parallel.hpp"

namespace unilat {

int coupling_step(int z, int v, double u, int y1, int y2, const FiniteKernel& k,
                  const Minorization& m) {
  if (m.delta <= 0.0)
    throw error(errc::degenerate_delta, "DegenerateDelta: coupling step needs delta > 0");
  if (z == 0) return v;
  if (m.parent_independent()) return v;  // Z=1 never fires at delta=1
  (void)k;
  return inverse_cdf_sample(m.h_row(y1, y2), u);
}

namespace {

int parent_value(const SiteValues& values, const BoundaryValues& boundary, Site p) {
  if (auto it = values.find(p); it != values.end()) return it->second;
  if (auto it = boundary.find(p); it != boundary.end()) return it->second;
  throw error(errc::missing_boundary_value,
              "MissingBoundaryValue at (" + std::to_string(p.i) + "," + std::to_string(p.j) + ")");
}

}  // namespace

SiteValues forward_sample(const SitePlan& plan, const CoupledKernel& ck, const Region& region,
                          const BoundaryValues& boundary) {
  SiteValues values;
  values.reserve(region.size());
  for (Site s : increasing_order(region)) {
    const auto par = parents_of(s);
    int y1 = 0, y2 = 0;
    if (plan.z_at(s) == 1 || ck.minor.delta <= 0.0) {
      y1 = parent_value(values, boundary, par[0]);
      y2 = parent_value(values, boundary, par[1]);
    }
    values.emplace(s, realize_site(ck, plan, s, y1, y2));
  }
  return values;
}

std::vector<std::uint8_t> forward_box_sample(const SitePlan& plan, const CoupledKernel& ck,
                                             int m, int n,
                                             const std::function<int(Site)>& boundary) {
  if (ck.kernel.states() > 256)
    throw error(errc::usage, "samplers support at most 256 states");
  // Grid with a phantom row 0 and column 0 holding the boundary values.
  const int w = m + 1;
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(w) * (n + 1));
  grid[0] = 0;
  for (int i = 1; i <= m; ++i) grid[i] = static_cast<std::uint8_t>(boundary(Site{i, 0}));
  for (int j = 1; j <= n; ++j)
    grid[static_cast<std::size_t>(j) * w] = static_cast<std::uint8_t>(boundary(Site{0, j}));

  for (int j = 1; j <= n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * w;
    for (int i = 1; i <= m; ++i) {
      const Site s{i, j};
      const int y1 = grid[row + i - 1];        // (i-1, j)
      const int y2 = grid[row - w + i];        // (i, j-1)
      grid[row + i] = static_cast<std::uint8_t>(realize_site(ck, plan, s, y1, y2));
    }
  }

  std::vector<std::uint8_t> out(static_cast<std::size_t>(m) * n);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= m; ++i)
      out[static_cast<std::size_t>(j - 1) * m + (i - 1)] = grid[static_cast<std::size_t>(j) * w + i];
  return out;
}

FieldSample perfect_sample(const CoupledKernel& ck, const Box& box, std::uint64_t seed,
                           std::uint64_t replicate, const SamplerOptions& opts) {
  if (ck.kernel.states() > 256)
    throw error(errc::usage, "samplers support at most 256 states");
  const double delta = ck.minor.delta;
  if (delta < opts.delta0 && !opts.force)
    throw error(errc::assumption_failed,
                "AssumptionFailed: delta=" + std::to_string(delta) + " is below delta0=" +
                    std::to_string(opts.delta0) +
                    " (Assumption 1 uncertified; pass force to run anyway)");

  const SitePlan plan = ck.plan(seed, replicate);
  const ClusterRegion cluster = build_cluster(plan, box, opts.step_limit);

  SiteValues values;
  values.reserve(cluster.b_of_lambda.size());
  for (Site s : increasing_order(cluster.b_of_lambda)) {
    int value;
    if (plan.z_at(s) == 0) {
      value = plan.v_at(s);
    } else {
      // Both parents of a Z=1 site lie in B(Lambda) by the closure of omega.
      const auto par = parents_of(s);
      const auto it1 = values.find(par[0]);
      const auto it2 = values.find(par[1]);
      if (it1 == values.end() || it2 == values.end())
        throw error(errc::internal, "InternalError: parent of an open site missing from B(Lambda)");
      value = inverse_cdf_sample(ck.minor.h_row(it1->second, it2->second),
                                 plan.uniform(s, stream_id::u));
    }
    values.emplace(s, value);
  }

  FieldSample out;
  out.box = box;
  out.seed = seed;
  out.replicate = replicate;
  out.region_size = cluster.b_of_lambda.size();
  out.kmax = cluster.kmax;
  out.values.resize(box.area());
  for (int j = 1; j <= box.n; ++j)
    for (int i = 1; i <= box.m; ++i)
      out.values[static_cast<std::size_t>(j - 1) * box.m + (i - 1)] =
          static_cast<std::uint8_t>(values.at(Site{i, j}));
  return out;
}

std::vector<FieldSample> perfect_sample_batch(const CoupledKernel& ck, const Box& box,
                                              std::uint64_t seed, std::uint64_t reps,
                                              const SamplerOptions& opts, int workers,
                                              std::uint64_t first_replicate) {
  std::vector<FieldSample> out(reps);
  detail::parallel_reps(reps, workers, [&](std::uint64_t r) {
    out[r] = perfect_sample(ck, box, seed, first_replicate + r, opts);
  });
  return out;
}

}  // namespace unilat
