#ifndef UNILAT_LATTICE_HPP
#define UNILAT_LATTICE_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <unordered_set>
#include <vector>

#include "unilat/errors.hpp"

namespace unilat {

// A site of the oriented lattice Z^2. The parents of (i,j) are (i-1,j) and
// (i,j-1); negative coordinates are legal (the backward construction walks
// into them).
struct Site {
  int i = 0;
  int j = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

inline std::uint64_t site_key(Site s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.i)) << 32) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.j));
}

struct SiteHash {
  std::size_t operator()(Site s) const {
    std::uint64_t x = site_key(s);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }
};

inline std::array<Site, 2> parents_of(Site s) {
  return {Site{s.i - 1, s.j}, Site{s.i, s.j - 1}};
}

inline std::array<Site, 2> children_of(Site s) {
  return {Site{s.i + 1, s.j}, Site{s.i, s.j + 1}};
}

// Any site (i,j) comes after its parents when ordered by (i+j, i).
inline bool increasing_less(Site a, Site b) {
  const long sa = static_cast<long>(a.i) + a.j;
  const long sb = static_cast<long>(b.i) + b.j;
  if (sa != sb) return sa < sb;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

// Finite set of sites with exact membership. Iteration order is unspecified;
// use increasing_order() whenever order matters.
class Region {
 public:
  Region() = default;
  Region(std::initializer_list<Site> sites) : set_(sites) {}

  bool contains(Site s) const { return set_.count(s) != 0; }
  bool insert(Site s) { return set_.insert(s).second; }
  std::size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }

  auto begin() const { return set_.begin(); }
  auto end() const { return set_.end(); }

  friend bool operator==(const Region& a, const Region& b) { return a.set_ == b.set_; }

 private:
  std::unordered_set<Site, SiteHash> set_;
};

// The window Lambda_{m,n} = {1..m} x {1..n}.
struct Box {
  int m = 1;
  int n = 1;

  Box() = default;
  Box(int m_, int n_) : m(m_), n(n_) {
    if (m < 1 || n < 1) throw error(errc::usage, "box dimensions must be >= 1");
  }

  bool contains(Site s) const { return s.i >= 1 && s.i <= m && s.j >= 1 && s.j <= n; }
  std::size_t area() const { return static_cast<std::size_t>(m) * n; }

  Region sites() const {
    Region r;
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= m; ++i) r.insert(Site{i, j});
    return r;
  }

  friend bool operator==(const Box&, const Box&) = default;
};

// Parents of elements of r that are not themselves in r.
Region external_boundary(const Region& r);

// Sites of r with at least one parent outside r.
Region internal_boundary(const Region& r);

// Total order on r such that any site's parents in r appear earlier:
// lexicographic by (i+j, i).
std::vector<Site> increasing_order(const Region& r);

}  // namespace unilat

#endif
