#include "unilat.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "unilat/blocks.hpp"
#include "unilat/oracle.hpp"
#include "unilat/percolation.hpp"
#include "unilat/sampler.hpp"
#include "unilat/version.hpp"

namespace {

thread_local std::string g_last_error;

ul_status map_code(unilat::errc c) {
  using unilat::errc;
  switch (c) {
    case errc::ok: return UL_OK;
    case errc::usage:
    case errc::degenerate_delta:
    case errc::missing_boundary_value:
    case errc::not_a_block_vertex: return UL_EUSAGE;
    case errc::parse: return UL_EPARSE;
    case errc::non_stochastic_row:
    case errc::negative_entry:
    case errc::shape_mismatch: return UL_EKERNEL;
    case errc::assumption_failed:
    case errc::assumption3_failed: return UL_EASSUMPTION;
    case errc::step_limit_exceeded: return UL_ESTEPLIMIT;
    case errc::window_mismatch: return UL_EWINDOW;
    case errc::io: return UL_EIO;
    case errc::internal: return UL_EINTERNAL;
  }
  return UL_EINTERNAL;
}

template <typename Fn>
ul_status guarded(Fn&& fn) {
  try {
    fn();
    return UL_OK;
  } catch (const unilat::error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UL_EINTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return UL_EINTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string format_probs(const std::vector<double>& p) {
  std::string out;
  char buf[40];
  for (double x : p) {
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    if (!out.empty()) out += ' ';
    out += buf;
  }
  return out;
}

}  // namespace

struct ul_kernel {
  unilat::CoupledKernel ck;
};

struct ul_samples {
  unilat::Box box{1, 1};
  int n_states = 2;
  std::vector<unilat::FieldSample> samples;
};

struct ul_joint {
  unilat::EmpiricalJoint joint;
};

extern "C" {

const char* ul_version(void) { return UNILAT_VERSION; }

const char* ul_last_error(void) { return g_last_error.c_str(); }

ul_status ul_kernel_open(const char* source, ul_kernel** out) {
  if (!source || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    *out = new ul_kernel{unilat::CoupledKernel(unilat::FiniteKernel::load(source))};
  });
}

ul_status ul_kernel_open_json(const char* json_text, ul_kernel** out) {
  if (!json_text || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    *out = new ul_kernel{unilat::CoupledKernel(unilat::FiniteKernel::from_json_text(json_text))};
  });
}

void ul_kernel_close(ul_kernel* k) { delete k; }

int ul_kernel_states(const ul_kernel* k) { return k ? k->ck.kernel.states() : 0; }

double ul_kernel_prob(const ul_kernel* k, int z, int y1, int y2) {
  if (!k) return -1.0;
  const int n = k->ck.kernel.states();
  if (z < 0 || z >= n || y1 < 0 || y1 >= n || y2 < 0 || y2 >= n) return -1.0;
  return k->ck.kernel.prob(z, y1, y2);
}

double ul_kernel_delta(const ul_kernel* k) { return k ? k->ck.minor.delta : -1.0; }

double ul_kernel_tau(const ul_kernel* k, int z) {
  if (!k || z < 0 || z >= k->ck.kernel.states()) return -1.0;
  return k->ck.minor.tau[z];
}

double ul_kernel_phi(const ul_kernel* k, int z) {
  if (!k || z < 0 || z >= k->ck.kernel.states() || k->ck.minor.phi.empty()) return -1.0;
  return k->ck.minor.phi[z];
}

double ul_kernel_residual(const ul_kernel* k, int z, int y1, int y2) {
  if (!k || k->ck.minor.residual.empty()) return -1.0;
  const int n = k->ck.kernel.states();
  if (z < 0 || z >= n || y1 < 0 || y1 >= n || y2 < 0 || y2 >= n) return -1.0;
  return k->ck.minor.h_row(y1, y2)[z];
}

int ul_kernel_assumption1(const ul_kernel* k) {
  return k && k->ck.minor.assumption1() ? 1 : 0;
}

int ul_kernel_parent_independent(const ul_kernel* k) {
  return k && k->ck.minor.parent_independent() ? 1 : 0;
}

ul_status ul_validate_text(const ul_kernel* k, const char* family, int l, int d, double delta0,
                           char** text, int* assumption_ok) {
  if (!k || !text) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    const auto& ck = k->ck;
    const int n = ck.kernel.states();
    char buf[160];
    std::string out = "unilat " UNILAT_VERSION "\n";
    std::snprintf(buf, sizeof(buf), "kernel: states=%d, rows stochastic within 1e-9\n", n);
    out += buf;
    out += "tau: " + format_probs(ck.minor.tau) + "\n";
    std::snprintf(buf, sizeof(buf), "delta: %.9g\n", ck.minor.delta);
    out += buf;
    bool ok;
    if (!ck.minor.assumption1()) {
      out += "Assumption 1 fails: tau is identically zero (some pair of kernel rows is "
             "singular)\n";
      ok = false;
    } else {
      out += "phi: " + format_probs(ck.minor.phi) + "\n";
      if (ck.minor.parent_independent()) {
        out += "kernel is parent-independent (delta=1): field is i.i.d. phi\n";
        ok = true;
      } else {
        out += "H(z|y1,y2):\n";
        for (int y1 = 0; y1 < n; ++y1)
          for (int y2 = 0; y2 < n; ++y2) {
            const auto row = ck.minor.h_row(y1, y2);
            std::snprintf(buf, sizeof(buf), "  (%d,%d): ", y1, y2);
            out += buf;
            out += format_probs({row.begin(), row.end()}) + "\n";
          }
        ok = ck.minor.delta >= delta0;
        std::snprintf(buf, sizeof(buf), "Assumption 1 (delta >= delta0=%.9g): %s\n", delta0,
                      ok ? "HOLDS" : "delta below threshold");
        out += buf;
      }
    }

    if (family && family[0]) {
      try {
        const unilat::BlockAlgorithm alg = unilat::make_block_algorithm(ck, family, l, d);
        const double bound = static_cast<double>(alg.geom.d - 1) / alg.geom.d;
        const bool block_ok = alg.detector.delta_tilde > bound;
        std::snprintf(buf, sizeof(buf),
                      "family %s (l=%d,d=%d,%s): P(W=0)=%.9g, bound (d-1)/d=%.9g: %s\n",
                      alg.family.name.c_str(), alg.geom.l, alg.geom.d,
                      alg.detector.method.c_str(), alg.detector.delta_tilde, bound,
                      block_ok ? "HOLDS" : "FAILS");
        out += buf;
        ok = block_ok;
      } catch (const unilat::error& e) {
        if (e.code() != unilat::errc::assumption3_failed) throw;
        out += std::string(e.what()) + "\n";
        ok = false;
      }
    }

    *text = dup_string(out);
    if (assumption_ok) *assumption_ok = ok ? 1 : 0;
  });
}

void ul_sampler_opts_init(ul_sampler_opts* opts) {
  if (!opts) return;
  opts->algo = "site";
  opts->family = nullptr;
  opts->block_l = 0;
  opts->block_d = 0;
  opts->seed = 0;
  opts->reps = 1;
  opts->step_limit = 1000000;
  opts->delta0 = 0.318;
  opts->force = 0;
  opts->workers = 1;
}

ul_status ul_sample(const ul_kernel* k, int window_m, int window_n,
                    const ul_sampler_opts* opts, ul_samples** out) {
  if (!k || !opts || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    const unilat::Box box(window_m, window_n);
    unilat::SamplerOptions sopts;
    sopts.delta0 = opts->delta0;
    sopts.force = opts->force != 0;
    sopts.step_limit = opts->step_limit;
    const std::string algo = opts->algo ? opts->algo : "site";
    std::vector<unilat::FieldSample> samples;
    if (algo == "site") {
      samples = unilat::perfect_sample_batch(k->ck, box, opts->seed, opts->reps, sopts,
                                             opts->workers);
    } else if (algo == "block") {
      const unilat::BlockAlgorithm alg = unilat::make_block_algorithm(
          k->ck, opts->family ? opts->family : "", opts->block_l, opts->block_d);
      samples = unilat::block_perfect_sample_batch(alg, k->ck, box, opts->seed, opts->reps,
                                                   sopts, opts->workers);
    } else {
      throw unilat::error(unilat::errc::usage, "algo must be 'site' or 'block'");
    }
    *out = new ul_samples{box, k->ck.kernel.states(), std::move(samples)};
  });
}

void ul_samples_close(ul_samples* s) { delete s; }

unsigned long long ul_samples_count(const ul_samples* s) { return s ? s->samples.size() : 0; }

int ul_samples_window_m(const ul_samples* s) { return s ? s->box.m : 0; }

int ul_samples_window_n(const ul_samples* s) { return s ? s->box.n : 0; }

int ul_samples_value(const ul_samples* s, unsigned long long rep, int i, int j) {
  if (!s || rep >= s->samples.size()) return -1;
  if (i < 1 || i > s->box.m || j < 1 || j > s->box.n) return -1;
  return s->samples[rep].at(i, j);
}

unsigned long long ul_samples_region_size(const ul_samples* s, unsigned long long rep) {
  if (!s || rep >= s->samples.size()) return 0;
  return s->samples[rep].region_size;
}

int ul_samples_kmax(const ul_samples* s, unsigned long long rep) {
  if (!s || rep >= s->samples.size()) return -1;
  return s->samples[rep].kmax;
}

ul_status ul_percstats(double delta, const int* sizes, int n_sizes, unsigned long long reps,
                       unsigned long long seed, unsigned long long step_limit, int workers,
                       ul_percstat* out) {
  if (!sizes || n_sizes < 1 || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    const auto stats = unilat::cluster_stats(delta, std::span<const int>(sizes, n_sizes), reps,
                                             seed, step_limit, workers);
    for (int idx = 0; idx < n_sizes; ++idx) {
      out[idx].size = stats[idx].size;
      out[idx].reps = stats[idx].reps;
      out[idx].mean_omega = stats[idx].mean_omega;
      out[idx].se_omega = stats[idx].se_omega;
      out[idx].mean_b = stats[idx].mean_b;
      out[idx].mean_kmax = stats[idx].mean_kmax;
      out[idx].max_kmax = stats[idx].max_kmax;
    }
  });
}

ul_status ul_joint_from_samples(const ul_samples* s, ul_joint** out) {
  if (!s || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    *out = new ul_joint{unilat::empirical_joint(s->samples, s->n_states)};
  });
}

ul_status ul_joint_load(const char* path, ul_joint** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] { *out = new ul_joint{unilat::EmpiricalJoint::load(path)}; });
}

ul_status ul_joint_save(const ul_joint* j, const char* path, const char* config_echo) {
  if (!j || !path) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] { j->joint.save(path, config_echo ? config_echo : ""); });
}

void ul_joint_close(ul_joint* j) { delete j; }

unsigned long long ul_joint_total(const ul_joint* j) { return j ? j->joint.total() : 0; }

ul_status ul_oracle(const ul_kernel* k, int window_m, int window_n, int offset,
                    unsigned long long reps, unsigned long long seed,
                    const char* boundary_mode, int workers, ul_joint** out) {
  if (!k || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    unilat::OracleOptions oo;
    oo.workers = workers;
    const std::string mode = boundary_mode ? boundary_mode : "const:0";
    if (mode == "iid-uniform") {
      oo.mode = unilat::BoundaryMode::iid_uniform;
    } else if (mode.rfind("const:", 0) == 0) {
      oo.mode = unilat::BoundaryMode::constant;
      try {
        oo.constant_state = std::stoi(mode.substr(6));
      } catch (const std::exception&) {
        throw unilat::error(unilat::errc::usage, "bad boundary mode: " + mode);
      }
    } else {
      throw unilat::error(unilat::errc::usage,
                          "boundary mode must be const:z or iid-uniform, got " + mode);
    }
    *out = new ul_joint{unilat::forward_equilibrium_estimate(
        k->ck, unilat::Box(window_m, window_n), offset, reps, seed, oo)};
  });
}

ul_status ul_tv_distance(const ul_joint* a, const ul_joint* b, double* out) {
  if (!a || !b || !out) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] { *out = unilat::tv_distance(a->joint, b->joint); });
}

ul_status ul_compare(const ul_joint* a, const ul_joint* b, double tol, double* tv,
                     double* chi_square, double* max_abs_z, int* pass) {
  if (!a || !b) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    const auto rep = unilat::compare_report(a->joint, b->joint, tol);
    if (tv) *tv = rep.tv;
    if (chi_square) *chi_square = rep.chi_square;
    if (max_abs_z) *max_abs_z = rep.max_abs_z;
    if (pass) *pass = rep.pass ? 1 : 0;
  });
}

ul_status ul_compare_text(const ul_joint* a, const ul_joint* b, double tol, char** text) {
  if (!a || !b || !text) {
    g_last_error = "null argument";
    return UL_EUSAGE;
  }
  return guarded([&] {
    *text = dup_string(unilat::compare_report(a->joint, b->joint, tol).text());
  });
}

void ul_string_free(char* s) { std::free(s); }

}  // extern "C"
