#ifndef UNILAT_ORACLE_HPP
#define UNILAT_ORACLE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "unilat/sampler.hpp"

namespace unilat {

// Empirical joint law of a window: counts per outcome, outcomes packed in
// base n_states over the row-major site order (j-1)*m + (i-1).
class EmpiricalJoint {
 public:
  EmpiricalJoint() = default;
  EmpiricalJoint(Box window, int n_states);

  const Box& window() const { return window_; }
  int states() const { return n_states_; }
  std::uint64_t total() const { return total_; }
  const std::map<std::uint64_t, std::uint64_t>& counts() const { return counts_; }

  void add(const FieldSample& sample);  // throws WindowMismatch
  void add_packed(std::uint64_t outcome, std::uint64_t count = 1);
  void merge(const EmpiricalJoint& other);

  std::uint64_t pack(const std::vector<std::uint8_t>& values) const;
  std::string outcome_label(std::uint64_t packed) const;  // dash-joined states

  // JSON {"window":[m,n],"total":N,"counts":{"0-1-1-0":123,...}}; extra keys
  // (config echo, version) are preserved on save and ignored on load.
  static EmpiricalJoint load(const std::string& path);
  void save(const std::string& path, const std::string& config_echo = "") const;
  std::string to_json(const std::string& config_echo = "") const;
  static EmpiricalJoint from_json_text(const std::string& text);

 private:
  Box window_{1, 1};
  int n_states_ = 2;
  std::uint64_t total_ = 0;
  std::map<std::uint64_t, std::uint64_t> counts_;
};

EmpiricalJoint empirical_joint(const std::vector<FieldSample>& samples, int n_states);

// Half L1 distance between the normalized frequencies.
double tv_distance(const EmpiricalJoint& a, const EmpiricalJoint& b);

enum class BoundaryMode { constant, iid_uniform };

struct OracleOptions {
  BoundaryMode mode = BoundaryMode::constant;
  int constant_state = 0;
  int workers = 1;
};

// Forward-simulates {1..offset+m}x{1..offset+n} with the given boundary and
// accumulates the law of the top-right m x n window. Replicate keys are
// offset by 2^62 so they never collide with sampler replicates of the same
// seed.
EmpiricalJoint forward_equilibrium_estimate(const CoupledKernel& ck, const Box& window,
                                            int offset, std::uint64_t reps, std::uint64_t seed,
                                            const OracleOptions& opts = {});

inline constexpr std::uint64_t kOracleReplicateOffset = std::uint64_t{1} << 62;

struct OutcomeRow {
  std::string label;
  std::uint64_t count_a = 0;
  std::uint64_t count_b = 0;
  double z_score = 0.0;
};

struct CompareReport {
  double tv = 0.0;
  double chi_square = 0.0;
  int dof = 0;
  double max_abs_z = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<OutcomeRow> rows;

  std::string text() const;
};

CompareReport compare_report(const EmpiricalJoint& a, const EmpiricalJoint& b,
                             double tv_tolerance);

}  // namespace unilat

#endif
