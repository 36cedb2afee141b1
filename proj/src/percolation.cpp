#include "unilat/percolation.hpp"

#include <atomic>
#include <cmath>

#include "parallel.hpp"

namespace unilat {

ClusterRegion build_cluster(const SitePlan& plan, const Box& box, std::uint64_t step_limit) {
  return build_cluster_with([&plan](Site s) { return plan.z_at(s); }, box, step_limit);
}

std::vector<Site> frontier_violations(const ClusterRegion& c, const SitePlan& plan) {
  return frontier_violations_with(c, [&plan](Site s) { return plan.z_at(s); });
}

std::vector<ClusterStats> cluster_stats(double delta, std::span<const int> sizes,
                                        std::uint64_t reps, std::uint64_t seed,
                                        std::uint64_t step_limit, int workers) {
  if (sizes.empty()) throw error(errc::usage, "cluster_stats: sizes must be nonempty");
  if (reps < 1) throw error(errc::usage, "cluster_stats: reps must be >= 1");
  if (delta < 0.0 || delta > 1.0)
    throw error(errc::usage, "cluster_stats: delta must lie in [0,1]");

  std::vector<ClusterStats> out;
  for (int L : sizes) {
    const Box box(L, L);
    std::vector<std::uint64_t> omega_sz(reps), b_sz(reps);
    std::vector<int> kmaxes(reps);
    std::atomic<std::uint64_t> aborted{0};

    detail::parallel_reps(reps, workers, [&](std::uint64_t rep) {
      SitePlan plan{seed, rep, delta, {}};
      try {
        ClusterRegion c = build_cluster(plan, box, step_limit);
        omega_sz[rep] = c.omega.size();
        b_sz[rep] = c.b_of_lambda.size();
        kmaxes[rep] = c.kmax;
      } catch (const error& e) {
        if (e.code() != errc::step_limit_exceeded) throw;
        aborted.fetch_add(1, std::memory_order_relaxed);
        omega_sz[rep] = 0;
        b_sz[rep] = 0;
        kmaxes[rep] = 0;
      }
    });

    if (aborted.load() > 0)
      throw error(errc::step_limit_exceeded,
                  "StepLimitExceeded: " + std::to_string(aborted.load()) + " of " +
                      std::to_string(reps) + " replicates aborted at L=" + std::to_string(L));

    ClusterStats st;
    st.size = L;
    st.reps = reps;
    double sum_o = 0.0, sum_b = 0.0, sum_k = 0.0;
    for (std::uint64_t r = 0; r < reps; ++r) {
      sum_o += static_cast<double>(omega_sz[r]);
      sum_b += static_cast<double>(b_sz[r]);
      sum_k += kmaxes[r];
      st.max_kmax = std::max(st.max_kmax, kmaxes[r]);
    }
    st.mean_omega = sum_o / static_cast<double>(reps);
    st.mean_b = sum_b / static_cast<double>(reps);
    st.mean_kmax = sum_k / static_cast<double>(reps);
    double ss = 0.0;
    for (std::uint64_t r = 0; r < reps; ++r) {
      const double d = static_cast<double>(omega_sz[r]) - st.mean_omega;
      ss += d * d;
    }
    st.se_omega = reps > 1 ? std::sqrt(ss / (static_cast<double>(reps) - 1.0) /
                                       static_cast<double>(reps))
                           : 0.0;
    out.push_back(st);
  }
  return out;
}

}  // namespace unilat
