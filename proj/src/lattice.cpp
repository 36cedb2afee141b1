#include "unilat/lattice.hpp"

#include <algorithm>

namespace unilat {

Region external_boundary(const Region& r) {
  Region out;
  for (Site s : r)
    for (Site p : parents_of(s))
      if (!r.contains(p)) out.insert(p);
  return out;
}

Region internal_boundary(const Region& r) {
  Region out;
  for (Site s : r)
    for (Site p : parents_of(s))
      if (!r.contains(p)) {
        out.insert(s);
        break;
      }
  return out;
}

std::vector<Site> increasing_order(const Region& r) {
  std::vector<Site> sites(r.begin(), r.end());
  std::sort(sites.begin(), sites.end(), increasing_less);
  return sites;
}

}  // namespace unilat
