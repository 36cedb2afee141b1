#include "unilat/auxrand.hpp"

#include "unilat/kernel.hpp"

namespace unilat {

int SitePlan::v_at(Site s) const {
  if (phi.empty()) throw error(errc::internal, "V stream drawn with no phi configured");
  return inverse_cdf_sample(phi, uniform(s, stream_id::v));
}

SiteDraws draws_at(const SitePlan& plan, Site s) {
  SiteDraws d;
  d.z = plan.z_at(s);
  d.v = plan.phi.empty() ? 0 : plan.v_at(s);
  d.u = plan.uniform(s, stream_id::u);
  d.u1 = plan.uniform(s, stream_id::u1);
  d.u2 = plan.uniform(s, stream_id::u2);
  return d;
}

}  // namespace unilat
