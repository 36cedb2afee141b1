#ifndef UNILAT_KERNEL_HPP
#define UNILAT_KERNEL_HPP

#include <span>
#include <string>
#include <vector>

#include "unilat/errors.hpp"

namespace unilat {

// Row-stochasticity tolerance. Input tables are decimal literals; anything
// tighter rejects legitimate hand-written kernels.
inline constexpr double kStochasticTol = 1e-9;

// Default Assumption-1 threshold: the oriented site percolation critical
// probability satisfies p_c >= 0.682, so delta >= 0.318 >= 1 - p_c.
struct Thresholds {
  double delta0 = 0.318;
};

struct KernelDiagnostics {
  bool ok = true;
  std::vector<std::string> problems;  // one entry per offending (y1,y2) or shape issue
  errc first_error = errc::ok;
};

KernelDiagnostics validate_kernel(int n_states, const std::vector<double>& table);

// Transition kernel K(z | y1, y2) on the finite state space {0..n_states-1}.
// Immutable after construction; construction validates the table.
class FiniteKernel {
 public:
  FiniteKernel(int n_states, std::vector<double> table);

  int states() const { return n_; }
  double prob(int z, int y1, int y2) const {
    return table_[(static_cast<std::size_t>(y1) * n_ + y2) * n_ + z];
  }
  std::span<const double> row(int y1, int y2) const {
    return {table_.data() + (static_cast<std::size_t>(y1) * n_ + y2) * n_,
            static_cast<std::size_t>(n_)};
  }
  const std::vector<double>& table() const { return table_; }

  // `source` is a preset ("example1:phi0,phi1,phi2" or "example2:p") or a
  // path to a JSON file {"states": n, "table": [[[K(z|y1,y2) for z] for y2] for y1]}.
  static FiniteKernel load(const std::string& source);
  static FiniteKernel from_json_text(const std::string& text);
  static FiniteKernel example1(double phi0, double phi1, double phi2);
  static FiniteKernel example2(double p);

 private:
  int n_;
  std::vector<double> table_;  // [(y1*n + y2)*n + z]
};

// The split K = delta*phi + (1-delta)*H with tau(z) = min_{y1,y2} K(z|y1,y2)
// and delta = sum_z tau(z). phi is empty when delta == 0 (Assumption 1
// fails); the residual is empty when delta is 0 or 1.
struct Minorization {
  std::vector<double> tau;
  double delta = 0.0;
  std::vector<double> phi;
  std::vector<double> residual;  // same [(y1*n + y2)*n + z] layout as the kernel
  int n_states = 0;

  bool assumption1() const { return delta > 0.0; }
  bool parent_independent() const { return delta >= 1.0; }
  std::span<const double> h_row(int y1, int y2) const {
    return {residual.data() + (static_cast<std::size_t>(y1) * n_states + y2) * n_states,
            static_cast<std::size_t>(n_states)};
  }
};

Minorization compute_minorization(const FiniteKernel& k);

// Residual H(.|y1,y2) = (K - delta*phi)/(1 - delta); requires 0 < delta < 1.
std::vector<double> residual_kernel(const FiniteKernel& k, const Minorization& m);

// Smallest z whose cumulative probability strictly exceeds u, states taken in
// ascending order. Fixes tie-breaking bit-exactly.
int inverse_cdf_sample(std::span<const double> p, double u);

}  // namespace unilat

#endif
