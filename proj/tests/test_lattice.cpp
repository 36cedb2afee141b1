#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "unilat/lattice.hpp"

using namespace unilat;

namespace {

Region make_region(std::initializer_list<Site> sites) { return Region(sites); }

}  // namespace

TEST_CASE("parents of a site") {
  CHECK(parents_of(Site{3, 2}) == std::array<Site, 2>{Site{2, 2}, Site{3, 1}});
  CHECK(parents_of(Site{1, 1}) == std::array<Site, 2>{Site{0, 1}, Site{1, 0}});
  CHECK(parents_of(Site{0, 0}) == std::array<Site, 2>{Site{-1, 0}, Site{0, -1}});
}

TEST_CASE("external boundary") {
  CHECK(external_boundary(Box(2, 2).sites()) ==
        make_region({{1, 0}, {2, 0}, {0, 1}, {0, 2}}));
  CHECK(external_boundary(make_region({{1, 2}})) == make_region({{0, 2}, {1, 1}}));
  CHECK(external_boundary(Region{}) == Region{});
}

TEST_CASE("internal boundary") {
  CHECK(internal_boundary(Box(2, 2).sites()) == make_region({{1, 1}, {1, 2}, {2, 1}}));
  CHECK(internal_boundary(make_region({{1, 2}})) == make_region({{1, 2}}));
  CHECK(internal_boundary(Box(3, 1).sites()) == make_region({{1, 1}, {2, 1}, {3, 1}}));
}

TEST_CASE("increasing order") {
  CHECK(increasing_order(Box(2, 2).sites()) ==
        std::vector<Site>{{1, 1}, {1, 2}, {2, 1}, {2, 2}});
  CHECK(increasing_order(make_region({{1, 1}, {1, 2}, {0, 2}})) ==
        std::vector<Site>{{0, 2}, {1, 1}, {1, 2}});
  CHECK(increasing_order(make_region({{5, -3}})) == std::vector<Site>{{5, -3}});
}

TEST_CASE("boundary and order properties on random regions") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Region r = testutil::random_region(rng, 6, 25);
    const Region ext = external_boundary(r);
    const Region in = internal_boundary(r);

    for (Site s : ext) CHECK_FALSE(r.contains(s));
    for (Site s : in) CHECK(r.contains(s));
    for (Site s : r)
      for (Site p : parents_of(s)) CHECK((r.contains(p) || ext.contains(p)));

    // linear extension of the parent order restricted to r
    const auto order = increasing_order(r);
    REQUIRE(order.size() == r.size());
    for (std::size_t a = 0; a < order.size(); ++a)
      for (Site p : parents_of(order[a])) {
        const auto it = std::find(order.begin(), order.end(), p);
        if (it != order.end()) CHECK(static_cast<std::size_t>(it - order.begin()) < a);
      }
  }
}

TEST_CASE("box invariants") {
  CHECK_THROWS_AS(Box(0, 3), error);
  const Box b(3, 2);
  CHECK(b.area() == 6);
  CHECK(b.contains(Site{3, 2}));
  CHECK_FALSE(b.contains(Site{0, 1}));
  CHECK(b.sites().size() == 6);
}
