/* C interface to the qubit tensor-train evolution library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return QTT_OK (0) on success or a nonzero error code; the
 * message for the most recent failure on the calling thread is available
 * through qtt_last_error().
 */

#ifndef QTTEVO_H
#define QTTEVO_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  QTT_OK = 0,
  QTT_ERR_INVALID_ARGUMENT = 1,
  QTT_ERR_GRID_MISMATCH = 2,
  QTT_ERR_SITE_MISMATCH = 3,
  QTT_ERR_NON_FINITE = 4,
  QTT_ERR_OVERFLOW = 5,
  QTT_ERR_TOO_COARSE = 6,
  QTT_ERR_NOT_CONVERGED = 7,
  QTT_ERR_NUMERICAL = 8,
  QTT_ERR_BUFFER_TOO_SMALL = 9
};

const char* qtt_last_error(void);

typedef struct qtt_grid qtt_grid;
typedef struct qtt_state qtt_state;
typedef struct qtt_mpo qtt_mpo;
typedef struct qtt_stepper qtt_stepper;
typedef struct qtt_dense qtt_dense;

typedef struct {
  double svd_tol;      /* squared-norm truncation budget, relative */
  int64_t max_bond;    /* 0 = unbounded */
  double simplify_tol; /* squared-norm budget for operator compression */
} qtt_tolerances;

qtt_tolerances qtt_tolerances_default(void);

typedef struct {
  double omega0;
  double omega_h;
  double barrier_height; /* u; 0 gives the plain harmonic quench */
  double barrier_sigma;
} qtt_quench;

/* evaluates a scalar function of x; writes real and imaginary parts */
typedef void (*qtt_scalar_fn)(double x, double* re, double* im, void* user);

/* ---- grids ---- */
int qtt_grid_create(double a, double b, int n_qubits, qtt_grid** out);
/* domain [-8 sigma_max, 8 sigma_max) sized for the fully expanded packet */
int qtt_grid_create_quench(const qtt_quench* q, int n_qubits, qtt_grid** out);
void qtt_grid_free(qtt_grid* g);
int qtt_grid_qubits(const qtt_grid* g);
int64_t qtt_grid_points(const qtt_grid* g);
double qtt_grid_dx(const qtt_grid* g);
double qtt_grid_x(const qtt_grid* g, int64_t index);

/* ---- states ---- */
int qtt_state_load(const qtt_grid* g, qtt_scalar_fn f, void* user,
                   const qtt_tolerances* tol, qtt_state** out, double* norm_const);
int qtt_state_load_quench_initial(const qtt_grid* g, const qtt_quench* q,
                                  const qtt_tolerances* tol, qtt_state** out);
int qtt_state_load_quench_analytic(const qtt_grid* g, const qtt_quench* q, double t,
                                   const qtt_tolerances* tol, qtt_state** out);
int qtt_state_clone(const qtt_state* s, qtt_state** out);
void qtt_state_free(qtt_state* s);
int qtt_state_norm(const qtt_state* s, double* out);      /* L2 function norm */
int qtt_state_max_bond(const qtt_state* s, int64_t* out);
/* Eq.-style norm-2 distance sqrt(sum |a-b|^2 dx) */
int qtt_state_epsilon(const qtt_state* a, const qtt_state* b, double* out);
int qtt_state_epsilon_vs_analytic(const qtt_state* s, const qtt_quench* q, double t,
                                  double* out);
/* dense amplitudes; buffers hold qtt_grid_points entries */
int qtt_state_amplitudes(const qtt_state* s, double* re, double* im, int64_t len);

/* ---- operators ---- */
int qtt_mpo_displacement(const qtt_grid* g, int64_t k, qtt_mpo** out);
/* variant: 0 centered, 1 smooth 9-point */
int qtt_mpo_fd(const qtt_grid* g, int order, int variant, qtt_mpo** out);
int qtt_mpo_hdaf_derivative(const qtt_grid* g, int M, int l, double eps_coef,
                            const qtt_tolerances* tol, qtt_mpo** out);
int qtt_mpo_hdaf_propagator(const qtt_grid* g, int M, double dt, double eps_coef,
                            const qtt_tolerances* tol, qtt_mpo** out);
int qtt_mpo_diagonal(const qtt_grid* g, qtt_scalar_fn f, void* user,
                     const qtt_tolerances* tol, qtt_mpo** out);
int qtt_mpo_potential(const qtt_grid* g, const qtt_quench* q,
                      const qtt_tolerances* tol, qtt_mpo** out);
int qtt_mpo_extend(const qtt_mpo* op, int extra_qubits, qtt_mpo** out);
int qtt_mpo_apply(const qtt_mpo* op, const qtt_state* s, const qtt_tolerances* tol,
                  qtt_state** out);
int qtt_mpo_max_bond(const qtt_mpo* op, int64_t* out);
void qtt_mpo_free(qtt_mpo* op);

/* ---- kernel diagnostics ---- */
double qtt_hdaf_sigma_from_order(int M, double dx);
double qtt_hdaf_calibrate_sigma(int M, double dx, double tau);
double qtt_hdaf_filter_spectrum(int M, double sigma, double k);
double qtt_hdaf_transition_frequency(int M, double sigma);
int qtt_hdaf_solve_width(int M, int l, double sigma, double tau, double dx,
                         double eps_coef, int64_t* width, int* all_below);

/* ---- steppers ---- */
enum {
  QTT_METHOD_EULER = 0,
  QTT_METHOD_HEUN = 1,
  QTT_METHOD_RK4 = 2,
  QTT_METHOD_CRANK_NICOLSON = 3,
  QTT_METHOD_ARNOLDI = 4,
  QTT_METHOD_SPLIT_STEP = 5
};

typedef struct {
  double dt;
  int method;
  int n_v;
  double cg_tol;
  int64_t cg_max_iter;
  int kinetic; /* 0 fd, 1 hdaf */
  int hdaf_M;
  double eps_coef;
  int fd_variant; /* 0 centered, 1 smooth9 */
  qtt_tolerances tol;
} qtt_stepper_config;

qtt_stepper_config qtt_stepper_config_default(void);

int qtt_stepper_create(const qtt_grid* g, const qtt_quench* q,
                       const qtt_stepper_config* cfg, qtt_stepper** out);
/* advances *state by one step, replacing it */
int qtt_stepper_step(qtt_stepper* st, qtt_state** state);
void qtt_stepper_free(qtt_stepper* st);

/* ---- dense vector backend ---- */
int qtt_dense_create_quench(const qtt_grid* g, const qtt_quench* q, qtt_dense** out);
int qtt_dense_split_step(qtt_dense* d, const qtt_quench* q, double dt);
int qtt_dense_epsilon_vs_analytic(const qtt_dense* d, const qtt_quench* q, double t,
                                  double* out);
int qtt_dense_norm(const qtt_dense* d, double* out);
void qtt_dense_free(qtt_dense* d);

#ifdef __cplusplus
}
#endif

#endif /* QTTEVO_H */
