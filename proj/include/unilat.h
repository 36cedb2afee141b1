/* C API for the unilat library: exact sampling of stationary two-point
 * unilateral Markov random fields on the 2D lattice.
 *
 * All objects are opaque handles created and destroyed by this API. Functions
 * returning ul_status never throw; on any status other than UL_OK the handle
 * outputs are left untouched and ul_last_error() describes the failure
 * (thread-local). Handles are immutable after creation and may be shared
 * across threads.
 */
#ifndef UNILAT_H
#define UNILAT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ul_status {
  UL_OK = 0,
  UL_EUSAGE = 1,       /* bad arguments */
  UL_EPARSE = 2,       /* unparseable kernel/joint/preset */
  UL_EKERNEL = 3,      /* table validation failed */
  UL_EASSUMPTION = 4,  /* assumption gate failed (delta or P(W=0) below bound) */
  UL_ESTEPLIMIT = 5,   /* backward construction exceeded the step limit */
  UL_EWINDOW = 6,      /* window mismatch between joints */
  UL_EIO = 7,          /* file I/O failure */
  UL_EINTERNAL = 8
} ul_status;

const char* ul_version(void);
const char* ul_last_error(void); /* message of the last failing call on this thread */

/* ---- kernels ------------------------------------------------------------ */

typedef struct ul_kernel ul_kernel;

/* `source` is a JSON file path or a preset: "example1:phi0,phi1,phi2",
 * "example2:p". The kernel is validated and its minorization computed. */
ul_status ul_kernel_open(const char* source, ul_kernel** out);
ul_status ul_kernel_open_json(const char* json_text, ul_kernel** out);
void ul_kernel_close(ul_kernel* k);

int ul_kernel_states(const ul_kernel* k);
double ul_kernel_prob(const ul_kernel* k, int z, int y1, int y2);
double ul_kernel_delta(const ul_kernel* k);
double ul_kernel_tau(const ul_kernel* k, int z);
/* phi and residual return -1.0 when undefined (delta == 0, resp. delta in {0,1}) */
double ul_kernel_phi(const ul_kernel* k, int z);
double ul_kernel_residual(const ul_kernel* k, int z, int y1, int y2);
int ul_kernel_assumption1(const ul_kernel* k);        /* delta > 0 */
int ul_kernel_parent_independent(const ul_kernel* k); /* delta == 1 */

/* Text report of delta/phi/H plus the assumption verdicts; caller frees with
 * ul_string_free. family may be NULL; l/d of 0 mean "default for the family".
 * *assumption_ok is 1 when the checked gate passes. */
ul_status ul_validate_text(const ul_kernel* k, const char* family, int l, int d, double delta0,
                           char** text, int* assumption_ok);

/* ---- sampling ----------------------------------------------------------- */

typedef struct ul_sampler_opts {
  const char* algo;   /* "site" (default) or "block" */
  const char* family; /* block algo: "minorization" | "example1:r1,r2" | "example2:p" | "setvalued" */
  int block_l;        /* 0 = family default */
  int block_d;        /* 0 = family default */
  unsigned long long seed;
  unsigned long long reps;
  unsigned long long step_limit; /* default 1000000 */
  double delta0;                 /* default 0.318 */
  int force;                     /* run despite a failing assumption gate */
  int workers;                   /* default 1; results identical for any value */
} ul_sampler_opts;

void ul_sampler_opts_init(ul_sampler_opts* opts);

typedef struct ul_samples ul_samples;

ul_status ul_sample(const ul_kernel* k, int window_m, int window_n,
                    const ul_sampler_opts* opts, ul_samples** out);
void ul_samples_close(ul_samples* s);

unsigned long long ul_samples_count(const ul_samples* s);
int ul_samples_window_m(const ul_samples* s);
int ul_samples_window_n(const ul_samples* s);
/* state at window site (i,j), 1-based; -1 on bad arguments */
int ul_samples_value(const ul_samples* s, unsigned long long rep, int i, int j);
/* number of lattice sites the replicate evaluated (|B(Lambda)| for the site
 * algorithm, covered-region size for the block algorithm) */
unsigned long long ul_samples_region_size(const ul_samples* s, unsigned long long rep);
int ul_samples_kmax(const ul_samples* s, unsigned long long rep);

/* ---- percolation statistics --------------------------------------------- */

typedef struct ul_percstat {
  int size; /* L */
  unsigned long long reps;
  double mean_omega;
  double se_omega;
  double mean_b;
  double mean_kmax;
  int max_kmax;
} ul_percstat;

/* Cluster statistics over Lambda_{L,L} at P(Z=0)=delta; fills out[0..n_sizes). */
ul_status ul_percstats(double delta, const int* sizes, int n_sizes, unsigned long long reps,
                       unsigned long long seed, unsigned long long step_limit, int workers,
                       ul_percstat* out);

/* ---- empirical joints and comparison ------------------------------------ */

typedef struct ul_joint ul_joint;

ul_status ul_joint_from_samples(const ul_samples* s, ul_joint** out);
ul_status ul_joint_load(const char* path, ul_joint** out);
/* config_echo (may be NULL) is embedded in the file for provenance */
ul_status ul_joint_save(const ul_joint* j, const char* path, const char* config_echo);
void ul_joint_close(ul_joint* j);
unsigned long long ul_joint_total(const ul_joint* j);

/* Forward-simulation equilibrium estimate: the law of the m x n window at
 * shift (offset,offset) of a boundary-conditioned simulation.
 * boundary_mode: "const:z" (state z on the boundary) or "iid-uniform". */
ul_status ul_oracle(const ul_kernel* k, int window_m, int window_n, int offset,
                    unsigned long long reps, unsigned long long seed,
                    const char* boundary_mode, int workers, ul_joint** out);

ul_status ul_tv_distance(const ul_joint* a, const ul_joint* b, double* out);
/* Full comparison; any output pointer may be NULL. *pass is 1 when tv <= tol. */
ul_status ul_compare(const ul_joint* a, const ul_joint* b, double tol, double* tv,
                     double* chi_square, double* max_abs_z, int* pass);
/* Human-readable comparison report; caller frees with ul_string_free. */
ul_status ul_compare_text(const ul_joint* a, const ul_joint* b, double tol, char** text);

void ul_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* UNILAT_H */
