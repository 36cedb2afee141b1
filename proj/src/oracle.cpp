#include "unilat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "parallel.hpp"

namespace unilat {

EmpiricalJoint::EmpiricalJoint(Box window, int n_states)
    : window_(window), n_states_(n_states) {
  if (n_states < 2) throw error(errc::usage, "EmpiricalJoint needs at least 2 states");
  const double digits = static_cast<double>(window.area()) * std::log2(double(n_states));
  if (digits > 62.0)
    throw error(errc::usage, "window outcome space too large to pack (limit ~2^62)");
}

std::uint64_t EmpiricalJoint::pack(const std::vector<std::uint8_t>& values) const {
  std::uint64_t out = 0;
  for (std::size_t idx = values.size(); idx-- > 0;)
    out = out * static_cast<std::uint64_t>(n_states_) + values[idx];
  return out;
}

std::string EmpiricalJoint::outcome_label(std::uint64_t packed) const {
  std::string out;
  for (std::size_t idx = 0; idx < window_.area(); ++idx) {
    if (idx) out += '-';
    out += std::to_string(packed % n_states_);
    packed /= n_states_;
  }
  return out;
}

void EmpiricalJoint::add(const FieldSample& sample) {
  if (!(sample.box == window_))
    throw error(errc::window_mismatch, "WindowMismatch: sample window differs");
  add_packed(pack(sample.values));
}

void EmpiricalJoint::add_packed(std::uint64_t outcome, std::uint64_t count) {
  counts_[outcome] += count;
  total_ += count;
}

void EmpiricalJoint::merge(const EmpiricalJoint& other) {
  if (!(other.window_ == window_) || other.n_states_ != n_states_)
    throw error(errc::window_mismatch, "WindowMismatch: cannot merge joints");
  for (const auto& [outcome, count] : other.counts_) add_packed(outcome, count);
}

EmpiricalJoint empirical_joint(const std::vector<FieldSample>& samples, int n_states) {
  if (samples.empty()) throw error(errc::usage, "empirical_joint: no samples");
  EmpiricalJoint out(samples.front().box, n_states);
  for (const auto& s : samples) out.add(s);
  return out;
}

double tv_distance(const EmpiricalJoint& a, const EmpiricalJoint& b) {
  if (!(a.window() == b.window()))
    throw error(errc::window_mismatch, "WindowMismatch: tv_distance windows differ");
  if (a.total() == 0 || b.total() == 0)
    throw error(errc::usage, "tv_distance: empty joint");
  double l1 = 0.0;
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  const double na = static_cast<double>(a.total());
  const double nb = static_cast<double>(b.total());
  while (ia != a.counts().end() || ib != b.counts().end()) {
    if (ib == b.counts().end() || (ia != a.counts().end() && ia->first < ib->first)) {
      l1 += ia->second / na;
      ++ia;
    } else if (ia == a.counts().end() || ib->first < ia->first) {
      l1 += ib->second / nb;
      ++ib;
    } else {
      l1 += std::abs(ia->second / na - ib->second / nb);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * l1;
}

std::string EmpiricalJoint::to_json(const std::string& config_echo) const {
  nlohmann::ordered_json j;
  j["window"] = {window_.m, window_.n};
  j["states"] = n_states_;
  j["total"] = total_;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto& [outcome, count] : counts_) counts[outcome_label(outcome)] = count;
  j["counts"] = std::move(counts);
  if (!config_echo.empty()) j["config"] = config_echo;
  return j.dump(2) + "\n";
}

void EmpiricalJoint::save(const std::string& path, const std::string& config_echo) const {
  std::ofstream out(path);
  if (!out) throw error(errc::io, "cannot write " + path);
  out << to_json(config_echo);
}

EmpiricalJoint EmpiricalJoint::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw error(errc::parse, std::string("joint JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("window") || !j.contains("total") || !j.contains("counts"))
    throw error(errc::parse, "joint JSON: need 'window', 'total' and 'counts'");
  const auto& w = j.at("window");
  if (!w.is_array() || w.size() != 2)
    throw error(errc::parse, "joint JSON: window must be [m,n]");
  const Box window(w.at(0).get<int>(), w.at(1).get<int>());

  // States can be carried explicitly or recovered from the outcome labels.
  int n_states = j.value("states", 0);
  std::vector<std::pair<std::vector<std::uint8_t>, std::uint64_t>> parsed;
  for (const auto& [label, count] : j.at("counts").items()) {
    std::vector<std::uint8_t> states;
    std::stringstream ss(label);
    std::string tok;
    while (std::getline(ss, tok, '-')) {
      try {
        states.push_back(static_cast<std::uint8_t>(std::stoi(tok)));
      } catch (const std::exception&) {
        throw error(errc::parse, "joint JSON: bad outcome label '" + label + "'");
      }
      n_states = std::max(n_states, states.back() + 1);
    }
    if (states.size() != window.area())
      throw error(errc::parse, "joint JSON: outcome '" + label + "' does not match window");
    parsed.emplace_back(std::move(states), count.get<std::uint64_t>());
  }
  n_states = std::max(n_states, 2);

  EmpiricalJoint out(window, n_states);
  for (const auto& [states, count] : parsed) out.add_packed(out.pack(states), count);
  if (out.total() != j.at("total").get<std::uint64_t>())
    throw error(errc::parse, "joint JSON: total does not match the counts");
  return out;
}

EmpiricalJoint EmpiricalJoint::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open joint file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

EmpiricalJoint forward_equilibrium_estimate(const CoupledKernel& ck, const Box& window,
                                            int offset, std::uint64_t reps, std::uint64_t seed,
                                            const OracleOptions& opts) {
  if (offset < 1) throw error(errc::usage, "oracle offset must be >= 1");
  if (reps < 1) throw error(errc::usage, "oracle needs reps >= 1");
  const int n_states = ck.kernel.states();
  if (opts.mode == BoundaryMode::constant &&
      (opts.constant_state < 0 || opts.constant_state >= n_states))
    throw error(errc::usage, "boundary state out of range");

  const int bm = offset + window.m;
  const int bn = offset + window.n;

  const int workers = std::max(1, opts.workers);
  std::vector<EmpiricalJoint> partial(workers, EmpiricalJoint(window, n_states));
  detail::parallel_reps(reps, workers, [&](std::uint64_t rep) {
    SitePlan plan = ck.plan(seed, kOracleReplicateOffset + rep);
    std::function<int(Site)> boundary;
    if (opts.mode == BoundaryMode::constant) {
      boundary = [&opts](Site) { return opts.constant_state; };
    } else {
      boundary = [&plan, n_states](Site s) {
        const double u = plan.uniform(s, stream_id::u1);
        return std::min(n_states - 1, static_cast<int>(u * n_states));
      };
    }
    const auto grid = forward_box_sample(plan, ck, bm, bn, boundary);
    std::vector<std::uint8_t> win(window.area());
    for (int j = 1; j <= window.n; ++j)
      for (int i = 1; i <= window.m; ++i)
        win[static_cast<std::size_t>(j - 1) * window.m + (i - 1)] =
            grid[static_cast<std::size_t>(offset + j - 1) * bm + (offset + i - 1)];
    partial[rep % workers].add_packed(partial[rep % workers].pack(win));
  });

  EmpiricalJoint out(window, n_states);
  for (const auto& p : partial) out.merge(p);
  return out;
}

CompareReport compare_report(const EmpiricalJoint& a, const EmpiricalJoint& b,
                             double tv_tolerance) {
  CompareReport rep;
  rep.tolerance = tv_tolerance;
  rep.tv = tv_distance(a, b);

  const double na = static_cast<double>(a.total());
  const double nb = static_cast<double>(b.total());
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  while (ia != a.counts().end() || ib != b.counts().end()) {
    std::uint64_t outcome;
    std::uint64_t ca = 0, cb = 0;
    if (ib == b.counts().end() || (ia != a.counts().end() && ia->first < ib->first)) {
      outcome = ia->first;
      ca = ia->second;
      ++ia;
    } else if (ia == a.counts().end() || ib->first < ia->first) {
      outcome = ib->first;
      cb = ib->second;
      ++ib;
    } else {
      outcome = ia->first;
      ca = ia->second;
      cb = ib->second;
      ++ia;
      ++ib;
    }
    OutcomeRow row;
    row.label = a.outcome_label(outcome);
    row.count_a = ca;
    row.count_b = cb;
    const double pa = ca / na, pb = cb / nb;
    const double se = std::sqrt(pa * (1.0 - pa) / na + pb * (1.0 - pb) / nb);
    row.z_score = se > 0.0 ? (pa - pb) / se : 0.0;
    rep.max_abs_z = std::max(rep.max_abs_z, std::abs(row.z_score));

    // Two-sample chi-square with pooled expectations.
    const double pooled = (ca + cb) / (na + nb);
    const double ea = pooled * na, eb = pooled * nb;
    if (ea > 0.0) rep.chi_square += (ca - ea) * (ca - ea) / ea;
    if (eb > 0.0) rep.chi_square += (cb - eb) * (cb - eb) / eb;
    ++rep.dof;
    rep.rows.push_back(std::move(row));
  }
  rep.dof = std::max(0, rep.dof - 1);
  rep.pass = rep.tv <= tv_tolerance;
  return rep;
}

std::string CompareReport::text() const {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "tv=%.6f tolerance=%.6f chi_square=%.4f dof=%d max|z|=%.3f\n",
                tv, tolerance, chi_square, dof, max_abs_z);
  out += buf;
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "  %s a=%llu b=%llu z=%+.3f\n", row.label.c_str(),
                  static_cast<unsigned long long>(row.count_a),
                  static_cast<unsigned long long>(row.count_b), row.z_score);
    out += buf;
  }
  out += pass ? "PASS\n" : "FAIL\n";
  return out;
}

}  // namespace unilat
