// Command-line front end over the unilat C API: kernel validation, perfect
// sampling, percolation statistics, forward-oracle estimation and empirical
// comparisons, all reproducible from (argv, seed).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unilat.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;       // usage / IO / parse
constexpr int kExitAssumption = 2;  // assumption gate failed
constexpr int kExitStepLimit = 3;   // backward construction exceeded step limit

int exit_code(ul_status st) {
  switch (st) {
    case UL_OK: return kExitOk;
    case UL_EASSUMPTION: return kExitAssumption;
    case UL_ESTEPLIMIT: return kExitStepLimit;
    default: return kExitError;
  }
}

int fail(ul_status st) {
  std::cerr << "error: " << ul_last_error() << "\n";
  return exit_code(st);
}

struct KernelHandle {
  ul_kernel* k = nullptr;
  ~KernelHandle() { ul_kernel_close(k); }
};

struct SamplesHandle {
  ul_samples* s = nullptr;
  ~SamplesHandle() { ul_samples_close(s); }
};

struct JointHandle {
  ul_joint* j = nullptr;
  ~JointHandle() { ul_joint_close(j); }
};

struct CommonOpts {
  std::string kernel;
  std::vector<int> window{2, 2};
  std::string algo = "site";
  int block_l = 0;
  int block_d = 0;
  std::string family;
  unsigned long long seed = 0;
  unsigned long long reps = 1;
  int offset = 30;
  unsigned long long step_limit = 1000000;
  double delta0 = 0.318;
  bool force = false;
  std::string format = "csv";
  std::string out;
  int workers = 1;
  std::string boundary = "const:0";
  std::string sizes = "16,32";
  double delta = -1.0;
  double tol = 0.02;
};

std::string config_echo(const std::string& cmd, const CommonOpts& o,
                        const std::vector<std::string>& keys) {
  std::ostringstream ss;
  ss << "unilat " << ul_version() << " cmd=" << cmd;
  for (const auto& key : keys) {
    if (key == "kernel" && !o.kernel.empty()) ss << " kernel=" << o.kernel;
    if (key == "window") ss << " window=" << o.window[0] << "x" << o.window[1];
    if (key == "algo") ss << " algo=" << o.algo;
    if (key == "family" && !o.family.empty()) ss << " family=" << o.family;
    if (key == "ld" && (o.block_l || o.block_d)) ss << " l=" << o.block_l << " d=" << o.block_d;
    if (key == "seed") ss << " seed=" << o.seed;
    if (key == "reps") ss << " reps=" << o.reps;
    if (key == "offset") ss << " offset=" << o.offset;
    if (key == "step_limit") ss << " step_limit=" << o.step_limit;
    if (key == "delta0") ss << " delta0=" << o.delta0;
    if (key == "force" && o.force) ss << " force=1";
    if (key == "workers") ss << " workers=" << o.workers;
    if (key == "boundary") ss << " boundary=" << o.boundary;
    if (key == "sizes") ss << " sizes=" << o.sizes;
    if (key == "delta" && o.delta >= 0.0) ss << " delta=" << o.delta;
    if (key == "tol") ss << " tol=" << o.tol;
  }
  return ss.str();
}

std::unique_ptr<std::ofstream> open_out(const std::string& path, std::ostream*& os) {
  if (path.empty()) {
    os = &std::cout;
    return nullptr;
  }
  auto file = std::make_unique<std::ofstream>(path);
  if (!*file) {
    std::cerr << "error: cannot write " << path << "\n";
    return nullptr;
  }
  os = file.get();
  return file;
}

int run_validate(const CommonOpts& o) {
  KernelHandle kh;
  ul_status st = ul_kernel_open(o.kernel.c_str(), &kh.k);
  if (st != UL_OK) return fail(st);
  char* text = nullptr;
  int ok = 0;
  st = ul_validate_text(kh.k, o.family.empty() ? nullptr : o.family.c_str(), o.block_l,
                        o.block_d, o.delta0, &text, &ok);
  if (st != UL_OK) return fail(st);
  std::cout << text;
  ul_string_free(text);
  return ok ? kExitOk : kExitAssumption;
}

int write_samples_csv(const SamplesHandle& sh, const std::string& header, std::ostream& os) {
  os << "# " << header << "\n";
  os << "rep,i,j,state\n";
  const unsigned long long count = ul_samples_count(sh.s);
  const int m = ul_samples_window_m(sh.s);
  const int n = ul_samples_window_n(sh.s);
  for (unsigned long long r = 0; r < count; ++r)
    for (int j = 1; j <= n; ++j)
      for (int i = 1; i <= m; ++i)
        os << r << ',' << i << ',' << j << ',' << ul_samples_value(sh.s, r, i, j) << "\n";
  return kExitOk;
}

int write_samples_json(const SamplesHandle& sh, const std::string& header, std::ostream& os) {
  const unsigned long long count = ul_samples_count(sh.s);
  const int m = ul_samples_window_m(sh.s);
  const int n = ul_samples_window_n(sh.s);
  os << "{\n  \"config\": \"" << header << "\",\n  \"window\": [" << m << ", " << n
     << "],\n  \"grids\": [\n";
  for (unsigned long long r = 0; r < count; ++r) {
    os << "    {\"rep\": " << r << ", \"region_size\": " << ul_samples_region_size(sh.s, r)
       << ", \"kmax\": " << ul_samples_kmax(sh.s, r) << ", \"grid\": [";
    for (int j = 1; j <= n; ++j) {
      os << (j == 1 ? "[" : ", [");
      for (int i = 1; i <= m; ++i) os << (i == 1 ? "" : ", ") << ul_samples_value(sh.s, r, i, j);
      os << "]";
    }
    os << "]}" << (r + 1 == count ? "" : ",") << "\n";
  }
  os << "  ]\n}\n";
  return kExitOk;
}

int write_samples_pgm(const SamplesHandle& sh, const std::string& header,
                      const std::string& stem, int n_states) {
  if (n_states > 256) {
    std::cerr << "error: PGM output supports at most 256 states\n";
    return kExitError;
  }
  const int scale = n_states > 1 ? 255 / (n_states - 1) : 255;
  const unsigned long long count = ul_samples_count(sh.s);
  const int m = ul_samples_window_m(sh.s);
  const int n = ul_samples_window_n(sh.s);
  for (unsigned long long r = 0; r < count; ++r) {
    char name[64];
    std::snprintf(name, sizeof(name), "_rep%06llu.pgm", r);
    std::ofstream os(stem + name);
    if (!os) {
      std::cerr << "error: cannot write " << stem + name << "\n";
      return kExitError;
    }
    os << "P2\n# " << header << " rep=" << r << "\n" << m << " " << n << "\n255\n";
    // image rows top to bottom = lattice rows j=n down to 1
    for (int j = n; j >= 1; --j) {
      for (int i = 1; i <= m; ++i)
        os << (i == 1 ? "" : " ") << ul_samples_value(sh.s, r, i, j) * scale;
      os << "\n";
    }
  }
  return kExitOk;
}

int run_sample(const CommonOpts& o) {
  KernelHandle kh;
  ul_status st = ul_kernel_open(o.kernel.c_str(), &kh.k);
  if (st != UL_OK) return fail(st);

  ul_sampler_opts opts;
  ul_sampler_opts_init(&opts);
  opts.algo = o.algo.c_str();
  opts.family = o.family.empty() ? nullptr : o.family.c_str();
  opts.block_l = o.block_l;
  opts.block_d = o.block_d;
  opts.seed = o.seed;
  opts.reps = o.reps;
  opts.step_limit = o.step_limit;
  opts.delta0 = o.delta0;
  opts.force = o.force ? 1 : 0;
  opts.workers = o.workers;

  SamplesHandle sh;
  st = ul_sample(kh.k, o.window[0], o.window[1], &opts, &sh.s);
  if (st != UL_OK) return fail(st);

  const std::string header = config_echo(
      "sample", o,
      {"kernel", "window", "algo", "family", "ld", "seed", "reps", "step_limit", "delta0",
       "force", "workers"});
  if (o.format == "pgm")
    return write_samples_pgm(sh, header, o.out.empty() ? "sample" : o.out,
                             ul_kernel_states(kh.k));
  std::ostream* os = nullptr;
  auto file = open_out(o.out, os);
  if (!os) return kExitError;
  if (o.format == "json") return write_samples_json(sh, header, *os);
  return write_samples_csv(sh, header, *os);
}

int run_percstats(const CommonOpts& o) {
  double delta = o.delta;
  if (delta < 0.0) {
    if (o.kernel.empty()) {
      std::cerr << "error: percstats needs --delta or --kernel\n";
      return kExitError;
    }
    KernelHandle kh;
    ul_status st = ul_kernel_open(o.kernel.c_str(), &kh.k);
    if (st != UL_OK) return fail(st);
    delta = ul_kernel_delta(kh.k);
  }
  std::vector<int> sizes;
  std::stringstream ss(o.sizes);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      sizes.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      std::cerr << "error: bad --sizes entry '" << tok << "'\n";
      return kExitError;
    }
  }
  std::vector<ul_percstat> stats(sizes.size());
  ul_status st = ul_percstats(delta, sizes.data(), static_cast<int>(sizes.size()), o.reps,
                              o.seed, o.step_limit, o.workers, stats.data());
  if (st != UL_OK) return fail(st);

  std::ostream* os = nullptr;
  auto file = open_out(o.out, os);
  if (!os) return kExitError;
  CommonOpts echo = o;
  echo.delta = delta;
  *os << "# "
      << config_echo("percstats", echo,
                     {"kernel", "delta", "sizes", "seed", "reps", "step_limit", "workers"})
      << "\n";
  *os << "L,reps,mean_omega,se_omega,mean_B,mean_kmax,max_kmax\n";
  char line[200];
  for (const auto& s : stats) {
    std::snprintf(line, sizeof(line), "%d,%llu,%.6f,%.6f,%.6f,%.6f,%d\n", s.size,
                  static_cast<unsigned long long>(s.reps), s.mean_omega, s.se_omega, s.mean_b,
                  s.mean_kmax, s.max_kmax);
    *os << line;
  }
  return kExitOk;
}

int run_oracle(const CommonOpts& o) {
  KernelHandle kh;
  ul_status st = ul_kernel_open(o.kernel.c_str(), &kh.k);
  if (st != UL_OK) return fail(st);
  JointHandle jh;
  st = ul_oracle(kh.k, o.window[0], o.window[1], o.offset, o.reps, o.seed, o.boundary.c_str(),
                 o.workers, &jh.j);
  if (st != UL_OK) return fail(st);
  const std::string header = config_echo(
      "oracle", o, {"kernel", "window", "offset", "seed", "reps", "boundary", "workers"});
  if (o.out.empty()) {
    std::cerr << "error: oracle needs --out for the joint JSON\n";
    return kExitError;
  }
  st = ul_joint_save(jh.j, o.out.c_str(), header.c_str());
  if (st != UL_OK) return fail(st);
  std::cout << "# " << header << "\n"
            << "wrote " << o.out << " with " << ul_joint_total(jh.j) << " replicates\n";
  return kExitOk;
}

int run_compare(const CommonOpts& o, const std::string& path_a, const std::string& path_b) {
  JointHandle a, b;
  ul_status st = ul_joint_load(path_a.c_str(), &a.j);
  if (st != UL_OK) return fail(st);
  st = ul_joint_load(path_b.c_str(), &b.j);
  if (st != UL_OK) return fail(st);
  char* text = nullptr;
  st = ul_compare_text(a.j, b.j, o.tol, &text);
  if (st != UL_OK) return fail(st);
  std::cout << "# " << config_echo("compare", o, {"tol"}) << "\n" << text;
  ul_string_free(text);
  int pass = 0;
  ul_compare(a.j, b.j, o.tol, nullptr, nullptr, nullptr, &pass);
  return pass ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perfect sampling of two-point unilateral Markov random fields"};
  app.require_subcommand(1);
  CommonOpts o;

  auto add_kernel = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--kernel", o.kernel, "kernel JSON file or preset");
    if (required) opt->required();
  };
  auto add_block = [&](CLI::App* cmd) {
    cmd->add_option("--algo", o.algo, "site|block")->check(CLI::IsMember({"site", "block"}));
    cmd->add_option("--l", o.block_l, "block length (block algo)");
    cmd->add_option("--d", o.block_d, "block in-degree (block algo)");
    cmd->add_option("--family", o.family,
                    "minorization|example1:r1,r2|example2:p|setvalued (block algo)");
  };
  auto add_run = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "base seed");
    cmd->add_option("--reps", o.reps, "replicate count");
    cmd->add_option("--step-limit", o.step_limit, "backward construction cap");
    cmd->add_option("--workers", o.workers, "worker threads (output-invariant)");
  };

  auto* validate = app.add_subcommand("validate", "report delta/phi/H and assumption verdicts");
  add_kernel(validate, true);
  validate->add_option("--family", o.family, "also check a block coupling family");
  validate->add_option("--l", o.block_l, "block length");
  validate->add_option("--d", o.block_d, "block in-degree");
  validate->add_option("--delta0", o.delta0, "Assumption-1 threshold");

  auto* sample = app.add_subcommand("sample", "draw perfect samples of the equilibrium field");
  add_kernel(sample, true);
  sample->add_option("--window", o.window, "window M N")->expected(2);
  add_block(sample);
  add_run(sample);
  sample->add_option("--delta0", o.delta0, "Assumption-1 threshold");
  sample->add_flag("--force", o.force, "run despite a failing assumption gate");
  sample->add_option("--format", o.format, "csv|json|pgm")
      ->check(CLI::IsMember({"csv", "json", "pgm"}));
  sample->add_option("--out", o.out, "output file (pgm: stem, one file per replicate)");

  auto* percstats = app.add_subcommand("percstats", "backward cluster statistics");
  add_kernel(percstats, false);
  percstats->add_option("--delta", o.delta, "P(Z=0) (overrides --kernel)");
  percstats->add_option("--sizes", o.sizes, "comma-separated window sizes L");
  add_run(percstats);
  percstats->add_option("--out", o.out, "output CSV file");

  auto* oracle = app.add_subcommand("oracle", "forward-simulation equilibrium estimate");
  add_kernel(oracle, true);
  oracle->add_option("--window", o.window, "window M N")->expected(2);
  oracle->add_option("--offset", o.offset, "boundary offset");
  oracle->add_option("--boundary", o.boundary, "const:z or iid-uniform");
  add_run(oracle);
  oracle->add_option("--out", o.out, "output joint JSON file");

  auto* compare = app.add_subcommand("compare", "compare two empirical joint files");
  std::string path_a, path_b;
  compare->add_option("a", path_a, "first joint JSON")->required();
  compare->add_option("b", path_b, "second joint JSON")->required();
  compare->add_option("--tol", o.tol, "TV pass threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitError : kExitOk;
  }

  if (validate->parsed()) return run_validate(o);
  if (sample->parsed()) return run_sample(o);
  if (percstats->parsed()) return run_percstats(o);
  if (oracle->parsed()) return run_oracle(o);
  if (compare->parsed()) return run_compare(o, path_a, path_b);
  return kExitError;
}
