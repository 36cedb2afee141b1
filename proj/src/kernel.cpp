#include "unilat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace unilat {

namespace {

std::string pair_label(int y1, int y2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "(y1=%d,y2=%d)", y1, y2);
  return buf;
}

std::vector<double> parse_preset_args(const std::string& args, std::size_t expect,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw error(errc::parse, what + ": bad numeric argument '" + tok + "'");
    }
  }
  if (out.size() != expect)
    throw error(errc::parse, what + ": expected " + std::to_string(expect) +
                                 " comma-separated arguments");
  return out;
}

}  // namespace

KernelDiagnostics validate_kernel(int n_states, const std::vector<double>& table) {
  KernelDiagnostics diag;
  auto fail = [&](errc c, const std::string& msg) {
    if (diag.ok) diag.first_error = c;
    diag.ok = false;
    diag.problems.push_back(msg);
  };
  if (n_states < 2) {
    fail(errc::shape_mismatch, "n_states must be >= 2");
    return diag;
  }
  const std::size_t n = static_cast<std::size_t>(n_states);
  if (table.size() != n * n * n) {
    fail(errc::shape_mismatch, "table has " + std::to_string(table.size()) +
                                   " entries, expected " + std::to_string(n * n * n));
    return diag;
  }
  for (int y1 = 0; y1 < n_states; ++y1)
    for (int y2 = 0; y2 < n_states; ++y2) {
      double sum = 0.0;
      bool negative = false;
      for (int z = 0; z < n_states; ++z) {
        const double p = table[(y1 * n + y2) * n + z];
        if (!(p >= 0.0)) negative = true;  // catches NaN as well
        sum += p;
      }
      if (negative)
        fail(errc::negative_entry, "NegativeEntry at " + pair_label(y1, y2));
      else if (std::abs(sum - 1.0) > kStochasticTol)
        fail(errc::non_stochastic_row,
             "NonStochasticRow at " + pair_label(y1, y2) + ", sum=" + std::to_string(sum));
    }
  return diag;
}

FiniteKernel::FiniteKernel(int n_states, std::vector<double> table)
    : n_(n_states), table_(std::move(table)) {
  KernelDiagnostics diag = validate_kernel(n_states, table_);
  if (!diag.ok) {
    std::string msg = "invalid kernel:";
    for (const auto& p : diag.problems) msg += " " + p + ";";
    throw error(diag.first_error, msg);
  }
}

FiniteKernel FiniteKernel::example1(double phi0, double phi1, double phi2) {
  const int n = 3;
  std::vector<double> t(n * n * n, 0.0);
  auto row = [&](int y1, int y2) { return t.data() + (y1 * n + y2) * n; };
  for (int y1 = 0; y1 < n; ++y1)
    for (int y2 = 0; y2 < n; ++y2) {
      double* r = row(y1, y2);
      if (y1 <= 1 && y2 <= 1) {
        r[0] = phi0;
        r[1] = phi1;
        r[2] = phi2;
      } else if (y1 == 2 && y2 == 2) {
        r[1] = 1.0;
      } else {
        r[0] = 1.0;
      }
    }
  return FiniteKernel(n, std::move(t));
}

FiniteKernel FiniteKernel::example2(double p) {
  if (p < 0.0 || p > 1.0) throw error(errc::parse, "example2: p must lie in [0,1]");
  const int n = 3;
  std::vector<double> t(n * n * n, 0.0);
  for (int y1 = 0; y1 < n; ++y1)
    for (int y2 = 0; y2 < n; ++y2) {
      double* r = t.data() + (y1 * n + y2) * n;
      const int mn = std::min(y1, y2);
      if (y1 == 2 && y2 == 2) {
        r[2] += p;
        r[1] += 1.0 - p;
      } else if (mn == 0) {
        r[1] += p;
        r[0] += 1.0 - p;
      } else {
        r[mn + 1] += p;
        r[mn - 1] += 1.0 - p;
      }
    }
  return FiniteKernel(n, std::move(t));
}

FiniteKernel FiniteKernel::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw error(errc::parse, std::string("kernel JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("states") || !j.contains("table"))
    throw error(errc::parse, "kernel JSON: need object with 'states' and 'table'");
  int n = 0;
  try {
    n = j.at("states").get<int>();
  } catch (const std::exception&) {
    throw error(errc::parse, "kernel JSON: 'states' must be an integer");
  }
  if (n < 2) throw error(errc::parse, "kernel JSON: states must be >= 2");
  const auto& tbl = j.at("table");
  if (!tbl.is_array() || static_cast<int>(tbl.size()) != n)
    throw error(errc::parse, "kernel JSON: table must have one row group per y1");
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(n) * n * n);
  for (int y1 = 0; y1 < n; ++y1) {
    const auto& g = tbl.at(y1);
    if (!g.is_array() || static_cast<int>(g.size()) != n)
      throw error(errc::parse, "kernel JSON: table[y1] must have one row per y2");
    for (int y2 = 0; y2 < n; ++y2) {
      const auto& r = g.at(y2);
      if (!r.is_array() || static_cast<int>(r.size()) != n)
        throw error(errc::parse, "kernel JSON: table[y1][y2] must list one entry per z");
      for (int z = 0; z < n; ++z) {
        if (!r.at(z).is_number())
          throw error(errc::parse, "kernel JSON: non-numeric probability");
        t.push_back(r.at(z).get<double>());
      }
    }
  }
  return FiniteKernel(n, std::move(t));
}

FiniteKernel FiniteKernel::load(const std::string& source) {
  if (source.rfind("example1:", 0) == 0) {
    auto a = parse_preset_args(source.substr(9), 3, "example1 preset");
    return example1(a[0], a[1], a[2]);
  }
  if (source.rfind("example2:", 0) == 0) {
    auto a = parse_preset_args(source.substr(9), 1, "example2 preset");
    return example2(a[0]);
  }
  std::ifstream in(source);
  if (!in) throw error(errc::io, "cannot open kernel file: " + source);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

Minorization compute_minorization(const FiniteKernel& k) {
  const int n = k.states();
  Minorization m;
  m.n_states = n;
  m.tau.assign(n, 0.0);
  for (int z = 0; z < n; ++z) {
    double mn = 1.0;
    for (int y1 = 0; y1 < n; ++y1)
      for (int y2 = 0; y2 < n; ++y2) mn = std::min(mn, k.prob(z, y1, y2));
    m.tau[z] = mn;
  }
  m.delta = 0.0;
  for (double t : m.tau) m.delta += t;
  // A numerically parent-independent kernel is treated as exactly i.i.d.: the
  // residual would amplify rounding noise by 1/(1-delta).
  if (m.delta >= 1.0 - kStochasticTol) m.delta = 1.0;
  if (m.delta > 0.0) {
    m.phi.resize(n);
    for (int z = 0; z < n; ++z) m.phi[z] = m.tau[z] / m.delta;
  }
  if (m.delta > 0.0 && m.delta < 1.0) m.residual = residual_kernel(k, m);
  return m;
}

std::vector<double> residual_kernel(const FiniteKernel& k, const Minorization& m) {
  if (m.delta <= 0.0 || m.delta >= 1.0)
    throw error(errc::degenerate_delta,
                "DegenerateDelta: residual requires 0 < delta < 1, got delta=" +
                    std::to_string(m.delta));
  const int n = k.states();
  std::vector<double> h(static_cast<std::size_t>(n) * n * n);
  const double scale = 1.0 / (1.0 - m.delta);
  for (int y1 = 0; y1 < n; ++y1)
    for (int y2 = 0; y2 < n; ++y2)
      for (int z = 0; z < n; ++z) {
        // (K - delta*phi) with delta*phi computed as tau avoids one rounding.
        double v = (k.prob(z, y1, y2) - m.tau[z]) * scale;
        h[(static_cast<std::size_t>(y1) * n + y2) * n + z] = std::max(v, 0.0);
      }
  return h;
}

int inverse_cdf_sample(std::span<const double> p, double u) {
  double c = 0.0;
  int last_positive = 0;
  for (std::size_t z = 0; z < p.size(); ++z) {
    c += p[z];
    if (p[z] > 0.0) last_positive = static_cast<int>(z);
    if (c > u) return static_cast<int>(z);
  }
  // u fell beyond the accumulated mass (rounding); return the top state.
  return last_positive;
}

}  // namespace unilat
