#include <doctest.h>

#include <functional>
#include <random>
#include <unordered_map>

#include "test_util.hpp"
#include "unilat/percolation.hpp"

using namespace unilat;

namespace {

using ZMap = std::unordered_map<Site, int, SiteHash>;

std::function<int(Site)> z_from(const ZMap& open_sites) {
  return [&open_sites](Site s) {
    const auto it = open_sites.find(s);
    return it == open_sites.end() ? 0 : it->second;
  };
}

// Open-path oracle: is there an increasing open path of length >= 1
// from `from` to a site of the internal boundary of the box? Walks children
// whose Z=1 inside a generous search window.
bool open_path_exists(Site from, const Box& box, const std::function<int(Site)>& z) {
  const Region ib = internal_boundary(box.sites());
  std::vector<Site> stack;
  Region seen;
  // first step: children of `from` must already be open
  for (Site c : children_of(from))
    if (z(c) == 1 && seen.insert(c)) stack.push_back(c);
  while (!stack.empty()) {
    const Site s = stack.back();
    stack.pop_back();
    if (ib.contains(s)) return true;
    if (s.i > box.m + 2 || s.j > box.n + 2) continue;
    for (Site c : children_of(s))
      if (z(c) == 1 && seen.insert(c)) stack.push_back(c);
  }
  return false;
}

}  // namespace

TEST_CASE("cluster with no open sites") {
  SitePlan plan{1, 0, 1.0, {1.0}};  // delta=1: Z=0 everywhere
  const auto c = build_cluster(plan, Box(4, 4), 1000);
  CHECK(c.omega.empty());
  CHECK(c.b_of_lambda == Box(4, 4).sites());
  CHECK(c.kmax == 0);
  CHECK(frontier_violations(c, plan).empty());
}

TEST_CASE("cluster with a single open boundary site") {
  ZMap zmap{{Site{1, 2}, 1}};
  const auto z = z_from(zmap);
  const auto c = build_cluster_with(z, Box(2, 2), 1000);
  CHECK(c.omega == Region{Site{1, 2}, Site{0, 2}, Site{1, 1}});
  Region expect_b = Box(2, 2).sites();
  expect_b.insert(Site{0, 2});
  CHECK(c.b_of_lambda == expect_b);
  CHECK(c.kmax == 0);
  // frontier invariant: (1,1),(2,1),(0,2) are the internal boundary of B and carry Z=0.
  CHECK(internal_boundary(c.b_of_lambda) == Region{Site{1, 1}, Site{2, 1}, Site{0, 2}});
  CHECK(frontier_violations_with(c, z).empty());
}

TEST_CASE("cluster with two open sites dedups the revisited parent") {
  ZMap zmap{{Site{1, 2}, 1}, {Site{1, 1}, 1}};
  const auto z = z_from(zmap);
  const auto c = build_cluster_with(z, Box(2, 2), 1000);
  REQUIRE(c.layers.size() == 1);  // (1,1) is already in Delta_0, so Delta_1 dedups away
  CHECK(c.layers[0] == Region{Site{1, 1}, Site{1, 2}});
  CHECK(c.omega ==
        Region{Site{1, 1}, Site{1, 2}, Site{0, 1}, Site{1, 0}, Site{0, 2}});
  CHECK(frontier_violations_with(c, z).empty());
}

TEST_CASE("delta=1 vacuous frontier check") {
  SitePlan plan{3, 5, 1.0, {1.0}};
  const auto c = build_cluster(plan, Box(3, 3), 1000);
  CHECK(frontier_violations(c, plan).empty());
}

TEST_CASE("closed frontier carries Z=0 over random plans") {
  const Box box(8, 8);
  for (std::uint64_t rep = 0; rep < 2000; ++rep) {
    SitePlan plan{909, rep, 0.5, {1.0}};
    const auto c = build_cluster(plan, box, 1000000);
    CHECK(frontier_violations(c, plan).empty());
  }
}

TEST_CASE("path soundness against the open-path definition") {
  std::mt19937 rng(21);
  std::bernoulli_distribution coin(0.5);
  const Box box(3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    ZMap zmap;
    for (int i = -9; i <= 6; ++i)
      for (int j = -9; j <= 6; ++j)
        if (coin(rng)) zmap.emplace(Site{i, j}, 1);
    const auto z = z_from(zmap);
    const auto c = build_cluster_with(z, box, 100000);

    // Every omega site outside Delta_0 joins the boundary by an open path;
    // omega only adds Delta_0 sites beyond the literal open-path set.
    const Region& d0 = c.layers[0];
    for (Site s : c.omega)
      if (!d0.contains(s)) CHECK(open_path_exists(s, box, z));
    // and no site strictly outside B(Lambda) near the search window has one
    for (int i = -6; i <= 3; ++i)
      for (int j = -6; j <= 3; ++j) {
        const Site s{i, j};
        if (!c.b_of_lambda.contains(s)) CHECK_FALSE(open_path_exists(s, box, z));
      }
  }
}

TEST_CASE("monotonicity: opening a site can only grow omega") {
  std::mt19937 rng(33);
  std::bernoulli_distribution coin(0.4);
  const Box box(3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    ZMap zmap;
    for (int i = -8; i <= 5; ++i)
      for (int j = -8; j <= 5; ++j)
        if (coin(rng)) zmap.emplace(Site{i, j}, 1);
    const auto base = build_cluster_with(z_from(zmap), box, 100000);

    // flip one closed site inside the relevant cone to open
    std::uniform_int_distribution<int> coord(-4, 3);
    Site flip{coord(rng), coord(rng)};
    ZMap grown = zmap;
    grown[flip] = 1;
    const auto bigger = build_cluster_with(z_from(grown), box, 100000);
    for (Site s : base.omega) CHECK(bigger.omega.contains(s));
  }
}

TEST_CASE("layer diagonals decrease") {
  SitePlan plan{17, 4, 0.5, {1.0}};
  const auto c = build_cluster(plan, Box(8, 8), 1000000);
  long prev_max = 1000;
  for (const auto& layer : c.layers) {
    if (layer.empty()) break;
    long mx = -1000000;
    for (Site s : layer) mx = std::max(mx, static_cast<long>(s.i) + s.j);
    CHECK((mx < prev_max || &layer == &c.layers[0]));
    prev_max = mx;
  }
}

TEST_CASE("step limit aborts supercritical construction") {
  SitePlan plan{5, 0, 0.05, {1.0}};  // P(Z=1)=0.95, far above p_c
  CHECK_THROWS_AS((void)build_cluster(plan, Box(8, 8), 500), error);
  try {
    (void)build_cluster(plan, Box(8, 8), 500);
  } catch (const error& e) {
    CHECK(e.code() == errc::step_limit_exceeded);
  }
}

TEST_CASE("cluster stats") {
  SUBCASE("delta=1 gives empty omega") {
    const int sizes[] = {4, 8};
    const auto stats = cluster_stats(1.0, sizes, 50, 1, 1000);
    for (const auto& s : stats) {
      CHECK(s.mean_omega == 0.0);
      CHECK(s.mean_b == doctest::Approx(static_cast<double>(s.size) * s.size));
      CHECK(s.max_kmax == 0);
    }
  }
  SUBCASE("perimeter scaling and the lower bound at delta=0.5") {
    const int sizes[] = {16, 32};
    const auto stats = cluster_stats(0.5, sizes, 3000, 99, 1000000, 2);
    const double ratio = stats[1].mean_omega / stats[0].mean_omega;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.6);
    for (const auto& s : stats) {
      const double boundary = 2.0 * s.size - 1.0;
      CHECK(s.mean_omega >= 0.5 * boundary - 3.0 * s.se_omega);
    }
  }
  SUBCASE("aborted replicates are counted in the error") {
    const int sizes[] = {8};
    try {
      (void)cluster_stats(0.05, sizes, 10, 3, 200);
      FAIL("expected StepLimitExceeded");
    } catch (const error& e) {
      CHECK(e.code() == errc::step_limit_exceeded);
      CHECK(std::string(e.what()).find("of 10 replicates") != std::string::npos);
    }
  }
}
