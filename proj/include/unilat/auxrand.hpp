#ifndef UNILAT_AUXRAND_HPP
#define UNILAT_AUXRAND_HPP

#include <cstdint>
#include <vector>

#include "unilat/lattice.hpp"

namespace unilat {

// Counter-based auxiliary randomness. Every draw is a pure function of
// (seed, replicate, site, stream), so a site revisited in any order, from any
// worker, yields the same value. The key derivation is documented in
// docs/determinism.md and must not change without a major version bump.

enum class stream_id : std::uint64_t {
  z = 0,   // coupling indicator, P(Z=0) = delta
  v = 1,   // regeneration value, V ~ phi
  u = 2,   // residual uniform
  u1 = 3,  // first uniform of block coupling pairs
  u2 = 4,  // second uniform of block coupling pairs
};

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t zigzag64(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

inline std::uint64_t site_word(std::uint64_t seed, std::uint64_t replicate, Site s,
                               stream_id t) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  h = mix64(h ^ seed);
  h = mix64(h ^ replicate);
  h = mix64(h ^ zigzag64(s.i));
  h = mix64(h ^ zigzag64(s.j));
  h = mix64(h ^ static_cast<std::uint64_t>(t));
  return h;
}

// Top 53 bits plus a half-ulp offset: values lie strictly inside (0,1).
inline double unit_uniform(std::uint64_t word) {
  return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

struct SiteDraws {
  int z = 0;
  int v = 0;
  double u = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
};

// Per-replicate randomness source: identifies the realization of the
// auxiliary fields and the laws of Z and V.
struct SitePlan {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  double delta = 0.0;           // P(Z=0)
  std::vector<double> phi;      // law of V; may be empty when delta == 0

  double uniform(Site s, stream_id t) const {
    return unit_uniform(site_word(seed, replicate, s, t));
  }
  int z_at(Site s) const { return uniform(s, stream_id::z) < delta ? 0 : 1; }
  int v_at(Site s) const;
};

SiteDraws draws_at(const SitePlan& plan, Site s);

}  // namespace unilat

#endif
