#include <doctest.h>

#include <cstdio>
#include <random>

#include "test_util.hpp"
#include "unilat/oracle.hpp"

using namespace unilat;

namespace {

FieldSample grid_sample(Box box, std::vector<std::uint8_t> values) {
  FieldSample s;
  s.box = box;
  s.values = std::move(values);
  return s;
}

}  // namespace

TEST_CASE("empirical joint counting") {
  const Box box(2, 1);
  EmpiricalJoint j(box, 2);
  j.add(grid_sample(box, {1, 0}));
  CHECK(j.total() == 1);
  CHECK(j.counts().size() == 1);
  j.add(grid_sample(box, {1, 0}));
  CHECK(j.counts().begin()->second == 2);

  // fixture of 4 known grids, counted by hand
  EmpiricalJoint f(box, 2);
  f.add(grid_sample(box, {0, 0}));
  f.add(grid_sample(box, {0, 1}));
  f.add(grid_sample(box, {0, 1}));
  f.add(grid_sample(box, {1, 1}));
  CHECK(f.total() == 4);
  CHECK(f.counts().at(f.pack({0, 0})) == 1);
  CHECK(f.counts().at(f.pack({0, 1})) == 2);
  CHECK(f.counts().at(f.pack({1, 1})) == 1);

  CHECK_THROWS_AS(f.add(grid_sample(Box(1, 2), {0, 0})), error);
}

TEST_CASE("tv distance basics") {
  const Box box(1, 1);
  EmpiricalJoint a(box, 2), b(box, 2), c(box, 2);
  a.add_packed(0, 50);
  a.add_packed(1, 50);
  b.add_packed(0, 75);
  b.add_packed(1, 25);
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, b) == doctest::Approx(0.25));
  c.add_packed(0, 10);
  EmpiricalJoint d(box, 2);
  d.add_packed(1, 10);
  CHECK(tv_distance(c, d) == doctest::Approx(1.0));

  EmpiricalJoint wrong(Box(2, 2), 2);
  wrong.add_packed(0, 1);
  CHECK_THROWS_AS((void)tv_distance(a, wrong), error);
}

TEST_CASE("tv distance is a metric on random tables") {
  std::mt19937 rng(3);
  const Box box(2, 1);
  auto random_joint = [&]() {
    EmpiricalJoint j(box, 3);
    for (int outcome = 0; outcome < 9; ++outcome) j.add_packed(outcome, 1 + rng() % 100);
    return j;
  };
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_joint(), b = random_joint(), c = random_joint();
    const double ab = tv_distance(a, b);
    CHECK(ab == doctest::Approx(tv_distance(b, a)));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab <= tv_distance(a, c) + tv_distance(c, b) + 1e-12);
  }
}

TEST_CASE("compare report") {
  const Box box(1, 1);
  EmpiricalJoint a(box, 2), b(box, 2);
  a.add_packed(0, 40);
  a.add_packed(1, 60);
  b.add_packed(0, 40);
  b.add_packed(1, 60);
  const auto same = compare_report(a, b, 0.02);
  CHECK(same.tv == 0.0);
  CHECK(same.chi_square == 0.0);
  CHECK(same.max_abs_z == 0.0);
  CHECK(same.pass);

  // hand-computed two-sample chi-square: a=(30,70), b=(50,50), pooled=(40,60)
  EmpiricalJoint c(box, 2), d(box, 2);
  c.add_packed(0, 30);
  c.add_packed(1, 70);
  d.add_packed(0, 50);
  d.add_packed(1, 50);
  const auto rep = compare_report(c, d, 0.02);
  CHECK(rep.tv == doctest::Approx(0.2));
  CHECK(rep.chi_square == doctest::Approx(100.0 / 40 + 100.0 / 40 + 100.0 / 60 + 100.0 / 60));
  CHECK(rep.dof == 1);
  CHECK_FALSE(rep.pass);
  CHECK(rep.text().find("FAIL") != std::string::npos);
}

TEST_CASE("joint JSON round trip") {
  const Box box(2, 2);
  EmpiricalJoint j(box, 3);
  j.add(grid_sample(box, {0, 1, 2, 0}));
  j.add(grid_sample(box, {0, 1, 2, 0}));
  j.add(grid_sample(box, {2, 2, 1, 0}));
  const char* path = "joint_roundtrip_test.json";
  j.save(path, "unit test echo");

  const auto loaded = EmpiricalJoint::load(path);
  CHECK(loaded.window() == box);
  CHECK(loaded.total() == 3);
  CHECK(tv_distance(j, loaded) == 0.0);
  std::remove(path);

  CHECK_THROWS_AS((void)EmpiricalJoint::load("missing_joint.json"), error);
  CHECK_THROWS_AS((void)EmpiricalJoint::from_json_text("{\"window\":[2,2]}"), error);
  // total mismatch
  CHECK_THROWS_AS((void)EmpiricalJoint::from_json_text(
                      R"({"window":[1,1],"total":5,"counts":{"0":1}})"),
                  error);
}

TEST_CASE("delta=1 oracle matches the product law") {
  const CoupledKernel ck(testutil::iid_kernel({0.3, 0.7}));
  const std::uint64_t reps = 40000;
  const auto est = forward_equilibrium_estimate(ck, Box(2, 1), 5, reps, 42, {});
  // outcomes (z1,z2) with independent P(1)=0.7
  const double want[2][2] = {{0.09, 0.21}, {0.21, 0.49}};
  for (int z1 = 0; z1 < 2; ++z1)
    for (int z2 = 0; z2 < 2; ++z2) {
      const std::uint64_t key = static_cast<std::uint64_t>(z2) * 2 + z1;
      const auto it = est.counts().find(key);
      const double freq = it == est.counts().end()
                              ? 0.0
                              : static_cast<double>(it->second) / static_cast<double>(reps);
      CHECK(testutil::within_3sigma(freq, want[z1][z2], reps));
    }
}

TEST_CASE("oracle estimates are stable in offset and boundary") {
  const CoupledKernel ck(testutil::k2());
  const std::uint64_t reps = 100000;
  const auto off10 = forward_equilibrium_estimate(ck, Box(1, 1), 10, reps, 7, {});
  OracleOptions two_workers;
  two_workers.workers = 2;
  const auto off30 = forward_equilibrium_estimate(ck, Box(1, 1), 30, reps, 8, two_workers);
  CHECK(tv_distance(off10, off30) <= 0.01);

  OracleOptions ones;
  ones.constant_state = 1;
  const auto b1 = forward_equilibrium_estimate(ck, Box(1, 1), 30, reps, 9, ones);
  CHECK(tv_distance(off30, b1) <= 0.01);

  OracleOptions iid;
  iid.mode = BoundaryMode::iid_uniform;
  const auto bu = forward_equilibrium_estimate(ck, Box(1, 1), 30, reps, 10, iid);
  CHECK(tv_distance(off30, bu) <= 0.01);
}

TEST_CASE("oracle worker count does not change the counts") {
  const CoupledKernel ck(testutil::k2());
  const auto a = forward_equilibrium_estimate(ck, Box(2, 2), 6, 2000, 77, {});
  OracleOptions w4;
  w4.workers = 4;
  const auto b = forward_equilibrium_estimate(ck, Box(2, 2), 6, 2000, 77, w4);
  CHECK(tv_distance(a, b) == 0.0);
  CHECK(a.counts() == b.counts());
}
