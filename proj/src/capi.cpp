#include "qttevo.h"

#include <memory>
#include <string>

#include "qtt/dense.hpp"
#include "qtt/evolution.hpp"
#include "qtt/hdaf.hpp"
#include "qtt/loader.hpp"
#include "qtt/operators.hpp"

namespace {

thread_local std::string g_last_error;

int code_of(const qtt::Error& e) {
  switch (e.code()) {
    case qtt::ErrorCode::invalid_argument: return QTT_ERR_INVALID_ARGUMENT;
    case qtt::ErrorCode::grid_mismatch: return QTT_ERR_GRID_MISMATCH;
    case qtt::ErrorCode::site_mismatch: return QTT_ERR_SITE_MISMATCH;
    case qtt::ErrorCode::non_finite: return QTT_ERR_NON_FINITE;
    case qtt::ErrorCode::overflow: return QTT_ERR_OVERFLOW;
    case qtt::ErrorCode::too_coarse: return QTT_ERR_TOO_COARSE;
    case qtt::ErrorCode::not_converged: return QTT_ERR_NOT_CONVERGED;
    case qtt::ErrorCode::numerical: return QTT_ERR_NUMERICAL;
  }
  return QTT_ERR_NUMERICAL;
}

template <typename F>
int guarded(F&& f) {
  try {
    f();
    return QTT_OK;
  } catch (const qtt::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QTT_ERR_NUMERICAL;
  }
}

qtt::Tolerances to_tol(const qtt_tolerances* t) {
  qtt::Tolerances tol;
  if (t) {
    tol.svd_tol = t->svd_tol;
    tol.max_bond = static_cast<qtt::Index>(t->max_bond);
    tol.simplify_tol = t->simplify_tol;
  }
  return tol;
}

qtt::QuenchParams to_params(const qtt_quench* q) {
  qtt::QuenchParams p;
  if (q) {
    p.omega0 = q->omega0;
    p.omega_h = q->omega_h;
    p.u = q->barrier_height;
    p.sigma_barrier = q->barrier_sigma;
  }
  return p;
}

std::function<qtt::cd(double)> to_fn(qtt_scalar_fn f, void* user) {
  return [f, user](double x) {
    double re = 0.0, im = 0.0;
    f(x, &re, &im, user);
    return qtt::cd(re, im);
  };
}

}  // namespace

struct qtt_grid {
  qtt::Grid g;
};
struct qtt_state {
  qtt::MpsState s;
};
struct qtt_mpo {
  qtt::Mpo op;
};
struct qtt_dense {
  qtt::DenseState d;
};
struct qtt_stepper {
  qtt::Grid grid;
  qtt::QuenchParams params;
  qtt::StepperConfig cfg;
  std::optional<qtt::Hamiltonian> ham;
  std::optional<qtt::SplitOps> split;
};

extern "C" {

const char* qtt_last_error(void) { return g_last_error.c_str(); }

qtt_tolerances qtt_tolerances_default(void) {
  qtt::Tolerances t;
  return {t.svd_tol, static_cast<int64_t>(t.max_bond), t.simplify_tol};
}

int qtt_grid_create(double a, double b, int n_qubits, qtt_grid** out) {
  return guarded([&] { *out = new qtt_grid{qtt::Grid(a, b, n_qubits)}; });
}

int qtt_grid_create_quench(const qtt_quench* q, int n_qubits, qtt_grid** out) {
  return guarded(
      [&] { *out = new qtt_grid{qtt::quench_grid(to_params(q), n_qubits)}; });
}

void qtt_grid_free(qtt_grid* g) { delete g; }
int qtt_grid_qubits(const qtt_grid* g) { return g->g.n_qubits; }
int64_t qtt_grid_points(const qtt_grid* g) { return g->g.points(); }
double qtt_grid_dx(const qtt_grid* g) { return g->g.dx(); }
double qtt_grid_x(const qtt_grid* g, int64_t index) { return g->g.x(index); }

int qtt_state_load(const qtt_grid* g, qtt_scalar_fn f, void* user,
                   const qtt_tolerances* tol, qtt_state** out, double* norm_const) {
  return guarded([&] {
    qtt::Loaded l = qtt::load_function(to_fn(f, user), g->g, to_tol(tol));
    if (norm_const) *norm_const = l.norm_const;
    *out = new qtt_state{std::move(l.state)};
  });
}

int qtt_state_load_quench_initial(const qtt_grid* g, const qtt_quench* q,
                                  const qtt_tolerances* tol, qtt_state** out) {
  return guarded([&] {
    *out = new qtt_state{qtt::analytic_quench(to_params(q), 0.0, g->g, to_tol(tol))};
  });
}

int qtt_state_load_quench_analytic(const qtt_grid* g, const qtt_quench* q, double t,
                                   const qtt_tolerances* tol, qtt_state** out) {
  return guarded([&] {
    *out = new qtt_state{qtt::analytic_quench(to_params(q), t, g->g, to_tol(tol))};
  });
}

int qtt_state_clone(const qtt_state* s, qtt_state** out) {
  return guarded([&] { *out = new qtt_state{s->s}; });
}

void qtt_state_free(qtt_state* s) { delete s; }

int qtt_state_norm(const qtt_state* s, double* out) {
  return guarded([&] { *out = qtt::norm_l2(s->s); });
}

int qtt_state_max_bond(const qtt_state* s, int64_t* out) {
  return guarded([&] { *out = static_cast<int64_t>(s->s.max_bond()); });
}

int qtt_state_epsilon(const qtt_state* a, const qtt_state* b, double* out) {
  return guarded([&] {
    const double na = qtt::norm2(a->s), nb = qtt::norm2(b->s);
    const double cross = std::real(qtt::inner(a->s, b->s));
    const double d2 = std::max(0.0, na * na + nb * nb - 2.0 * cross);
    *out = std::sqrt(d2 * a->s.grid.dx());
  });
}

int qtt_state_epsilon_vs_analytic(const qtt_state* s, const qtt_quench* q, double t,
                                  double* out) {
  return guarded(
      [&] { *out = qtt::epsilon_vs_analytic(s->s, to_params(q), t); });
}

int qtt_state_amplitudes(const qtt_state* s, double* re, double* im, int64_t len) {
  return guarded([&] {
    const int64_t n = s->s.grid.points();
    if (len < n)
      throw qtt::Error(qtt::ErrorCode::invalid_argument, "amplitude buffer too small");
    qtt::Vec v = qtt::dense(s->s);
    for (int64_t i = 0; i < n; ++i) {
      re[i] = v(i).real();
      im[i] = v(i).imag();
    }
  });
}

int qtt_mpo_displacement(const qtt_grid* g, int64_t k, qtt_mpo** out) {
  return guarded([&] { *out = new qtt_mpo{qtt::displacement_mpo(g->g, k)}; });
}

int qtt_mpo_fd(const qtt_grid* g, int order, int variant, qtt_mpo** out) {
  return guarded([&] {
    *out = new qtt_mpo{qtt::fd_mpo(
        g->g, order, variant == 0 ? qtt::FdVariant::centered : qtt::FdVariant::smooth9)};
  });
}

int qtt_mpo_hdaf_derivative(const qtt_grid* g, int M, int l, double eps_coef,
                            const qtt_tolerances* tol, qtt_mpo** out) {
  return guarded([&] {
    *out = new qtt_mpo{qtt::hdaf_derivative_mpo(g->g, M, l, eps_coef, to_tol(tol))};
  });
}

int qtt_mpo_hdaf_propagator(const qtt_grid* g, int M, double dt, double eps_coef,
                            const qtt_tolerances* tol, qtt_mpo** out) {
  return guarded([&] {
    *out = new qtt_mpo{qtt::hdaf_propagator_mpo(g->g, M, dt, eps_coef, to_tol(tol))};
  });
}

int qtt_mpo_diagonal(const qtt_grid* g, qtt_scalar_fn f, void* user,
                     const qtt_tolerances* tol, qtt_mpo** out) {
  return guarded([&] {
    qtt::Loaded l = qtt::load_function(to_fn(f, user), g->g, to_tol(tol));
    *out = new qtt_mpo{qtt::diagonal_mpo(l.state)};
  });
}

int qtt_mpo_potential(const qtt_grid* g, const qtt_quench* q,
                      const qtt_tolerances* tol, qtt_mpo** out) {
  return guarded([&] {
    qtt::QuenchParams p = to_params(q);
    qtt::Loaded l = qtt::load_function(
        [&](double x) { return qtt::cd(qtt::quench_potential(p, x), 0.0); }, g->g,
        to_tol(tol));
    *out = new qtt_mpo{qtt::diagonal_mpo(l.state)};
  });
}

int qtt_mpo_extend(const qtt_mpo* op, int extra_qubits, qtt_mpo** out) {
  return guarded(
      [&] { *out = new qtt_mpo{qtt::extend_to_finer_grid(op->op, extra_qubits)}; });
}

int qtt_mpo_apply(const qtt_mpo* op, const qtt_state* s, const qtt_tolerances* tol,
                  qtt_state** out) {
  return guarded(
      [&] { *out = new qtt_state{qtt::apply_mpo(op->op, s->s, to_tol(tol))}; });
}

int qtt_mpo_max_bond(const qtt_mpo* op, int64_t* out) {
  return guarded([&] { *out = static_cast<int64_t>(op->op.max_bond()); });
}

void qtt_mpo_free(qtt_mpo* op) { delete op; }

double qtt_hdaf_sigma_from_order(int M, double dx) {
  return qtt::sigma_from_order(M, dx);
}

double qtt_hdaf_calibrate_sigma(int M, double dx, double tau) {
  return qtt::calibrate_sigma(M, dx, tau);
}

double qtt_hdaf_filter_spectrum(int M, double sigma, double k) {
  return qtt::filter_spectrum(M, sigma, k);
}

double qtt_hdaf_transition_frequency(int M, double sigma) {
  return qtt::transition_frequency(M, sigma);
}

int qtt_hdaf_solve_width(int M, int l, double sigma, double tau, double dx,
                         double eps_coef, int64_t* width, int* all_below) {
  return guarded([&] {
    qtt::HdafSpec spec;
    spec.M = M;
    spec.l = l;
    spec.sigma = sigma;
    spec.tau = tau;
    spec.dx = dx;
    spec.eps_coef = eps_coef;
    qtt::WidthResult wr = qtt::solve_width(spec);
    if (width) *width = wr.W;
    if (all_below) *all_below = wr.all_below ? 1 : 0;
  });
}

qtt_stepper_config qtt_stepper_config_default(void) {
  qtt_stepper_config cfg;
  cfg.dt = 0.1;
  cfg.method = QTT_METHOD_SPLIT_STEP;
  cfg.n_v = 10;
  cfg.cg_tol = 1e-10;
  cfg.cg_max_iter = 500;
  cfg.kinetic = 1;
  cfg.hdaf_M = 40;
  cfg.eps_coef = 1e-16;
  cfg.fd_variant = 1;
  cfg.tol = qtt_tolerances_default();
  return cfg;
}

int qtt_stepper_create(const qtt_grid* g, const qtt_quench* q,
                       const qtt_stepper_config* cfg, qtt_stepper** out) {
  return guarded([&] {
    auto st = std::make_unique<qtt_stepper>();
    st->grid = g->g;
    st->params = to_params(q);
    qtt::StepperConfig c;
    c.dt = cfg->dt;
    c.method = static_cast<qtt::Method>(cfg->method);
    c.n_v = cfg->n_v;
    c.cg_tol = cfg->cg_tol;
    c.cg_max_iter = static_cast<int>(cfg->cg_max_iter);
    c.kinetic = cfg->kinetic == 0 ? qtt::KineticKind::fd : qtt::KineticKind::hdaf;
    c.hdaf_M = cfg->hdaf_M;
    c.eps_coef = cfg->eps_coef;
    c.fd_variant =
        cfg->fd_variant == 0 ? qtt::FdVariant::centered : qtt::FdVariant::smooth9;
    c.tol = to_tol(&cfg->tol);
    st->cfg = c;
    if (c.method == qtt::Method::split_step) {
      st->split = qtt::make_split_ops(st->grid, st->params, c.dt, c.hdaf_M,
                                      c.eps_coef, c.tol);
    } else {
      st->ham = qtt::make_hamiltonian(
          st->grid, [p = st->params](double x) { return qtt::quench_potential(p, x); },
          c.kinetic, c.hdaf_M, c.eps_coef, c.fd_variant, c.tol);
    }
    *out = st.release();
  });
}

int qtt_stepper_step(qtt_stepper* st, qtt_state** state) {
  return guarded([&] {
    qtt::MpsState& psi = (*state)->s;
    qtt::MpsState next;
    switch (st->cfg.method) {
      case qtt::Method::euler:
        next = qtt::step_euler(psi, *st->ham, st->cfg);
        break;
      case qtt::Method::heun:
        next = qtt::step_heun(psi, *st->ham, st->cfg);
        break;
      case qtt::Method::rk4:
        next = qtt::step_rk4(psi, *st->ham, st->cfg);
        break;
      case qtt::Method::crank_nicolson:
        next = qtt::step_crank_nicolson(psi, *st->ham, st->cfg);
        break;
      case qtt::Method::arnoldi:
        next = qtt::step_arnoldi(psi, *st->ham, st->cfg);
        break;
      case qtt::Method::split_step:
        next = qtt::step_split(psi, st->split->kinetic_prop,
                               st->split->half_potential_prop, st->cfg);
        break;
    }
    psi = std::move(next);
  });
}

void qtt_stepper_free(qtt_stepper* st) { delete st; }

int qtt_dense_create_quench(const qtt_grid* g, const qtt_quench* q, qtt_dense** out) {
  return guarded([&] {
    *out = new qtt_dense{qtt::analytic_solution_dense(to_params(q), 0.0, g->g)};
  });
}

int qtt_dense_split_step(qtt_dense* d, const qtt_quench* q, double dt) {
  return guarded([&] {
    Eigen::VectorXd v = qtt::sample_potential(to_params(q), d->d.grid);
    qtt::fft_split_step(d->d, v, dt);
  });
}

int qtt_dense_epsilon_vs_analytic(const qtt_dense* d, const qtt_quench* q, double t,
                                  double* out) {
  return guarded([&] {
    qtt::DenseState ref = qtt::analytic_solution_dense(to_params(q), t, d->d.grid);
    *out = qtt::dense_epsilon(d->d.amp, ref.amp, d->d.grid.dx());
  });
}

int qtt_dense_norm(const qtt_dense* d, double* out) {
  return guarded(
      [&] { *out = d->d.amp.norm() * std::sqrt(d->d.grid.dx()); });
}

void qtt_dense_free(qtt_dense* d) { delete d; }

}  // extern "C"
