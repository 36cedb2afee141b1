#ifndef UNILAT_BLOCKS_HPP
#define UNILAT_BLOCKS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "unilat/sampler.hpp"

namespace unilat {

// Vertex of the block lattice V_d (blocks are identified with the pair (h,k),
// constrained to h+k = 0 mod (d-1)).
struct BlockVertex {
  int h = 0;
  int k = 0;
  friend bool operator==(const BlockVertex&, const BlockVertex&) = default;
};

struct BlockVertexHash {
  std::size_t operator()(BlockVertex v) const { return SiteHash{}(Site{v.h, v.k}); }
};

// Geometry of blocks of l adjacent sites on diagonals spaced (d-1)l apart.
// B_{0,0} = {(1,l),(2,l-1),...,(l,1)}; B_{h,k} = B_{0,0} + (lh,lk); the d
// block-parents of (h,k) are (h-i, k+i-d+1) for i=0..d-1, which makes the
// external boundary of the trapezoid R_{h,k} exactly the union of the parent
// blocks.
struct BlockGeometry {
  int l = 1;
  int d = 2;

  BlockGeometry() = default;
  BlockGeometry(int l_, int d_) : l(l_), d(d_) {
    if (l < 1 || d < 2) throw error(errc::usage, "block geometry needs l >= 1 and d >= 2");
  }

  bool is_vertex(int h, int k) const {
    const int md = d - 1;
    return ((h + k) % md + md) % md == 0;
  }
  void require_vertex(int h, int k) const {
    if (!is_vertex(h, k))
      throw error(errc::not_a_block_vertex, "NotABlockVertex: (" + std::to_string(h) + "," +
                                                std::to_string(k) + ") with d=" + std::to_string(d));
  }

  std::vector<Site> block_sites(int h, int k) const {
    require_vertex(h, k);
    std::vector<Site> out;
    out.reserve(l);
    for (int x = 1; x <= l; ++x) out.push_back(Site{x + l * h, l + 1 - x + l * k});
    return out;
  }

  std::vector<BlockVertex> parent_vertices(int h, int k) const {
    require_vertex(h, k);
    std::vector<BlockVertex> out;
    out.reserve(d);
    for (int i = 0; i < d; ++i) out.push_back(BlockVertex{h - i, k + i - d + 1});
    return out;
  }

  // R_{h,k} = {(i,j): i <= l(h+1), j <= l(k+1), (h+k-d+2)l+2 <= i+j <= (h+k+1)l+1}.
  Region region_sites(int h, int k) const;

  // m(i,j) = (i+j-l-1) mod (d-1)l, nonnegative residue: the distance of the
  // diagonal of (i,j) from the previous block diagonal.
  int diagonal_index(Site s) const {
    const int period = (d - 1) * l;
    const long r = (static_cast<long>(s.i) + s.j - l - 1) % period;
    return static_cast<int>(r < 0 ? r + period : r);
  }

  int period() const { return (d - 1) * l; }
};

// Family of coupling functions s_m, m = 0..(d-1)l-1; each s_m maps the site
// draws and the parent pair to a state distributed as K(.|y1,y2).
struct CouplingFamily {
  std::string name;
  int period = 1;
  std::function<int(int m, const SiteDraws&, int y1, int y2)> step;

  int apply(int m, const SiteDraws& dr, int y1, int y2) const { return step(m, dr, y1, y2); }
};

// One W evaluation: w==0 comes with the boundary-free block values Phi,
// indexed like block_sites(h,k).
struct WValue {
  int w = 1;
  std::vector<int> phi;
};

struct WDetector {
  std::string method;        // "explicit" or "setvalued"
  double delta_tilde = 0.0;  // P(W=0): closed form, or a Monte Carlo estimate
  std::function<WValue(const SitePlan&, int h, int k)> eval;
};

// Family, detector and geometry assembled for one kernel.
struct BlockAlgorithm {
  BlockGeometry geom;
  CouplingFamily family;
  WDetector detector;
};

// Image of s_m(draws; .,.) over I1 x I2, as bitmasks over states.
std::uint64_t set_valued_step(const CouplingFamily& fam, int m, const SiteDraws& draws,
                              std::uint64_t i1_mask, std::uint64_t i2_mask, int n_states);

// Runs the set-valued recursion over R_{h,k} from full state sets on the
// parent blocks; W=0 iff every block site collapses to a singleton.
WValue set_valued_w(const CouplingFamily& fam, const BlockGeometry& geom, const SitePlan& plan,
                    int h, int k, int n_states);

// Presets. Each construction machine-verifies its assumptions against the
// kernel table and throws Assumption3Failed naming the violated inequality.
BlockAlgorithm minorization_block(const CoupledKernel& ck, int l, int d);
BlockAlgorithm example1_block(const CoupledKernel& ck, double rho1, double rho2,
                              std::vector<int> c_set = {0, 1}, std::vector<double> phi = {});
BlockAlgorithm example2_block(const CoupledKernel& ck, double p);
BlockAlgorithm setvalued_block(const CoupledKernel& ck, int l, int d);

// Parses "minorization" | "example1:r1,r2" | "example2:p" | "setvalued".
BlockAlgorithm make_block_algorithm(const CoupledKernel& ck, const std::string& family_spec,
                                    int l, int d);

struct BlockCluster {
  std::vector<BlockVertex> window_blocks;  // blocks whose region meets the window
  std::vector<BlockVertex> sigma;          // backward cluster with its external boundary
  std::vector<BlockVertex> frontier;       // W=0 blocks that bound the construction
  // Blocks in evaluation order (increasing h+k, then h). Roots get Phi
  // directly; every other entry has all d parents scheduled earlier.
  struct Scheduled {
    BlockVertex v;
    bool root = false;
  };
  std::vector<Scheduled> schedule;
  int kmax = 0;  // backward BFS depth
};

using WField = std::function<int(int h, int k)>;

// Backward construction on the block lattice. `w_field` must return 0 or 1.
BlockCluster build_block_cluster_with(const WField& w_field, const BlockGeometry& geom,
                                      const Box& box, std::uint64_t step_limit);

// Cluster grown backward from a single boundary block; used for diameter
// tail statistics. The open-path diameter is 0 when sigma is empty and
// kmax+1 otherwise.
BlockCluster block_cluster_from(const WField& w_field, const BlockGeometry& geom,
                                BlockVertex origin, std::uint64_t step_limit);

// As above, evaluating W through the detector, memoizing into `cache`.
using WCache = std::unordered_map<BlockVertex, WValue, BlockVertexHash>;
BlockCluster build_block_cluster(const BlockAlgorithm& alg, const SitePlan& plan,
                                 const Box& box, std::uint64_t step_limit, WCache& cache);

// Block perfect sampler: frontier blocks take Phi, every other covered block's
// region is evaluated by the s_m recursion from its parent blocks; the result
// is cropped to the box.
FieldSample block_perfect_sample(const BlockAlgorithm& alg, const CoupledKernel& ck,
                                 const Box& box, std::uint64_t seed, std::uint64_t replicate,
                                 const SamplerOptions& opts = {});

std::vector<FieldSample> block_perfect_sample_batch(const BlockAlgorithm& alg,
                                                    const CoupledKernel& ck, const Box& box,
                                                    std::uint64_t seed, std::uint64_t reps,
                                                    const SamplerOptions& opts = {},
                                                    int workers = 1,
                                                    std::uint64_t first_replicate = 0);

}  // namespace unilat

#endif
