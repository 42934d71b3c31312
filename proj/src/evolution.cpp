#include "qtt/evolution.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace qtt {

namespace {

MpsState apply_h(const Hamiltonian& h, const MpsState& psi, const Tolerances& tol) {
  return apply_mpo(h.combined, psi, tol);
}

}  // namespace

Hamiltonian make_hamiltonian(const Grid& g, const std::function<double(double)>& v,
                             KineticKind kind, int hdaf_M, double eps_coef,
                             FdVariant fd_variant, const Tolerances& tol) {
  Hamiltonian h;
  h.grid = g;
  Mpo dxx = (kind == KineticKind::hdaf)
                ? hdaf_derivative_mpo(g, hdaf_M, 2, eps_coef, tol)
                : fd_mpo(g, 2, fd_variant);
  h.kinetic = mpo_scale(std::move(dxx), -0.5);
  h.potential = diagonal_mpo(
      load_function([&](double x) { return cd(v(x), 0.0); }, g, tol).state);
  h.combined = mpo_add(h.kinetic, h.potential, 1.0, 1.0, tol);
  return h;
}

MpsState step_euler(const MpsState& psi, const Hamiltonian& h, const StepperConfig& cfg) {
  MpsState hp = apply_h(h, psi, cfg.tol);
  return add(psi, hp, 1.0, cd(0.0, -cfg.dt), cfg.tol);
}

MpsState step_heun(const MpsState& psi, const Hamiltonian& h, const StepperConfig& cfg) {
  const cd idt(0.0, cfg.dt);
  MpsState v1 = apply_h(h, psi, cfg.tol);
  MpsState mid = add(psi, v1, 1.0, -idt, cfg.tol);
  MpsState hv = apply_h(h, mid, cfg.tol);
  return add_many({&psi, &v1, &hv}, {1.0, -0.5 * idt, -0.5 * idt}, cfg.tol);
}

MpsState step_rk4(const MpsState& psi, const Hamiltonian& h, const StepperConfig& cfg) {
  const cd mi(0.0, -1.0);
  const double dt = cfg.dt;
  MpsState k1 = apply_h(h, psi, cfg.tol);  // times -i below
  MpsState s2 = add(psi, k1, 1.0, mi * (0.5 * dt), cfg.tol);
  MpsState k2 = apply_h(h, s2, cfg.tol);
  MpsState s3 = add(psi, k2, 1.0, mi * (0.5 * dt), cfg.tol);
  MpsState k3 = apply_h(h, s3, cfg.tol);
  MpsState s4 = add(psi, k3, 1.0, mi * dt, cfg.tol);
  MpsState k4 = apply_h(h, s4, cfg.tol);
  const cd w = mi * (dt / 6.0);
  return add_many({&psi, &k1, &k2, &k3, &k4}, {1.0, w, 2.0 * w, 2.0 * w, w}, cfg.tol);
}

MpsState step_crank_nicolson(const MpsState& psi, const Hamiltonian& h,
                             const StepperConfig& cfg, CgStats* stats) {
  // (I + i dt/2 H) x = (I - i dt/2 H) psi, solved by conjugate gradients on
  // the normal equations M x = c with M = I + (dt/2)^2 H^2 (H hermitian).
  const cd half(0.0, 0.5 * cfg.dt);
  const double q = 0.25 * cfg.dt * cfg.dt;
  auto apply_m = [&](const MpsState& x) {
    MpsState hx = apply_h(h, x, cfg.tol);
    MpsState hhx = apply_h(h, hx, cfg.tol);
    return add(x, hhx, 1.0, q, cfg.tol);
  };
  MpsState hpsi = apply_h(h, psi, cfg.tol);
  MpsState b = add(psi, hpsi, 1.0, -half, cfg.tol);
  MpsState hb = apply_h(h, b, cfg.tol);
  MpsState c = add(b, hb, 1.0, -half, cfg.tol);
  const double cnorm = norm2(c);

  MpsState x = psi;
  MpsState r = add(c, apply_m(x), 1.0, -1.0, cfg.tol);
  MpsState p = r;
  double rr = std::abs(inner(r, r));
  int it = 0;
  for (; it < cfg.cg_max_iter; ++it) {
    if (std::sqrt(rr) <= cfg.cg_tol * cnorm) break;
    MpsState mp = apply_m(p);
    const double alpha = rr / std::real(inner(p, mp));
    x = add(x, p, 1.0, alpha, cfg.tol);
    r = add(r, mp, 1.0, -alpha, cfg.tol);
    const double rr_new = std::abs(inner(r, r));
    const double beta = rr_new / rr;
    p = add(r, p, 1.0, beta, cfg.tol);
    rr = rr_new;
  }
  if (stats) {
    stats->iterations = it;
    stats->residual = std::sqrt(rr) / (cnorm > 0 ? cnorm : 1.0);
  }
  if (std::sqrt(rr) > cfg.cg_tol * cnorm)
    throw Error(ErrorCode::not_converged,
                "crank-nicolson solve stalled at relative residual " +
                    std::to_string(std::sqrt(rr) / (cnorm > 0 ? cnorm : 1.0)));
  return x;
}

MpsState step_arnoldi(const MpsState& psi, const Hamiltonian& h,
                      const StepperConfig& cfg, ArnoldiStats* stats) {
  if (cfg.n_v < 2)
    throw Error(ErrorCode::invalid_argument, "arnoldi needs at least two vectors");
  const double nrm = norm2(psi);
  std::vector<MpsState> basis;
  std::vector<MpsState> images;  // H v_j
  basis.push_back(psi);
  basis.back().scale /= nrm;
  bool breakdown = false;
  for (int j = 0; j < cfg.n_v; ++j) {
    images.push_back(apply_h(h, basis[j], cfg.tol));
    if (j + 1 == cfg.n_v) break;
    MpsState cand = images.back();
    const double ref = norm2(cand);
    // modified Gram-Schmidt with one reorthogonalization pass
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) cand = add(cand, v, 1.0, -inner(v, cand), cfg.tol);
    const double cn = norm2(cand);
    if (cn <= 1e-13 * std::max(1.0, ref)) {
      breakdown = true;
      break;
    }
    cand.scale /= cn;
    basis.push_back(std::move(cand));
  }
  const int dim = static_cast<int>(basis.size());
  Mat a(dim, dim), nmat(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      a(i, j) = inner(basis[i], images[j]);
      nmat(i, j) = inner(basis[i], basis[j]);
    }
  // pseudo-inverse of N, cutoff guards near-dependent bases
  Eigen::JacobiSVD<Mat> svd(nmat, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i)
    if (sv(i) > 1e-12 * sv(0)) inv(i) = 1.0 / sv(i);
  Mat ninv = svd.matrixV() * inv.cast<cd>().asDiagonal() * svd.matrixU().adjoint();
  Mat e = expm(cd(0.0, -cfg.dt) * (ninv * a));
  std::vector<const MpsState*> ptrs;
  std::vector<cd> ws;
  for (int i = 0; i < dim; ++i) {
    ptrs.push_back(&basis[i]);
    ws.push_back(nrm * e(i, 0));
  }
  if (stats) {
    stats->dim = dim;
    stats->breakdown = breakdown;
  }
  return add_many(ptrs, ws, cfg.tol);
}

MpsState step_split(const MpsState& psi, const Mpo& kinetic_prop,
                    const Mpo& half_potential_prop, const StepperConfig& cfg) {
  MpsState s = apply_mpo(half_potential_prop, psi, cfg.tol);
  s = apply_mpo(kinetic_prop, s, cfg.tol);
  return apply_mpo(half_potential_prop, s, cfg.tol);
}

SplitOps make_split_ops(const Grid& g, const QuenchParams& p, double dt, int hdaf_M,
                        double eps_coef, const Tolerances& tol) {
  SplitOps ops;
  ops.kinetic_prop = hdaf_propagator_mpo(g, hdaf_M, dt, eps_coef, tol);
  ops.half_potential_prop = diagonal_mpo(
      load_function(
          [&](double x) {
            return std::exp(cd(0.0, -0.5 * dt * quench_potential(p, x)));
          },
          g, tol)
          .state);
  return ops;
}

double epsilon_vs_analytic(const MpsState& psi, const QuenchParams& p, double t) {
  const Grid& g = psi.grid;
  if (g.n_qubits <= 16) {
    Vec ref(g.points());
    for (std::int64_t i = 0; i < g.points(); ++i)
      ref(i) = quench_wavefunction(p, t, g.x(i));
    return dense_epsilon(dense(psi), ref, g.dx());
  }
  Tolerances tol;
  tol.svd_tol = 1e-30;
  MpsState ref = analytic_quench(p, t, g, tol);
  const double na = norm2(psi), nb = norm2(ref);
  const double cross = std::real(inner(ref, psi));
  const double d2 = std::max(0.0, na * na + nb * nb - 2.0 * cross);
  return std::sqrt(d2 * g.dx());
}

MpsState evolve(MpsState psi, const EvolveProblem& prob, const StepperConfig& cfg,
                double t_final, const Observer& obs, int epsilon_stride) {
  const long steps = std::lround(t_final / cfg.dt);
  std::optional<Hamiltonian> ham;
  std::optional<SplitOps> split;
  if (cfg.method == Method::split_step) {
    split = make_split_ops(prob.grid, prob.params, cfg.dt, cfg.hdaf_M, cfg.eps_coef,
                           cfg.tol);
  } else {
    ham = make_hamiltonian(
        prob.grid, [&](double x) { return quench_potential(prob.params, x); },
        cfg.kinetic, cfg.hdaf_M, cfg.eps_coef, cfg.fd_variant, cfg.tol);
  }
  for (long k = 1; k <= steps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    switch (cfg.method) {
      case Method::euler:
        psi = step_euler(psi, *ham, cfg);
        break;
      case Method::heun:
        psi = step_heun(psi, *ham, cfg);
        break;
      case Method::rk4:
        psi = step_rk4(psi, *ham, cfg);
        break;
      case Method::crank_nicolson:
        psi = step_crank_nicolson(psi, *ham, cfg);
        break;
      case Method::arnoldi:
        psi = step_arnoldi(psi, *ham, cfg);
        break;
      case Method::split_step:
        psi = step_split(psi, split->kinetic_prop, split->half_potential_prop, cfg);
        break;
    }
    const auto t1 = std::chrono::steady_clock::now();
    StepRecord rec;
    rec.step = static_cast<int>(k);
    rec.t = static_cast<double>(k) * cfg.dt;
    rec.norm = norm_l2(psi);
    rec.chi_max = psi.max_bond();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (prob.params.harmonic() && epsilon_stride > 0 &&
        (k % epsilon_stride == 0 || k == steps))
      rec.epsilon = epsilon_vs_analytic(psi, prob.params, rec.t);
    if (obs) obs(rec);
  }
  return psi;
}

Vec dense_step(Method m, const Mat& h, const Vec& psi, double dt, int n_v,
               double cg_tol) {
  const cd mi(0.0, -1.0);
  switch (m) {
    case Method::euler:
      return psi + mi * dt * (h * psi);
    case Method::heun: {
      Vec v1 = h * psi;
      Vec mid = psi + mi * dt * v1;
      return psi + mi * (0.5 * dt) * (v1 + h * mid);
    }
    case Method::rk4: {
      Vec k1 = mi * (h * psi);
      Vec k2 = mi * (h * (psi + 0.5 * dt * k1));
      Vec k3 = mi * (h * (psi + 0.5 * dt * k2));
      Vec k4 = mi * (h * (psi + dt * k3));
      return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    case Method::crank_nicolson: {
      (void)cg_tol;
      const Index n = psi.size();
      Mat a = Mat::Identity(n, n) + cd(0.0, 0.5 * dt) * h;
      Vec b = psi - cd(0.0, 0.5 * dt) * (h * psi);
      return a.partialPivLu().solve(b);
    }
    case Method::arnoldi: {
      const double nrm = psi.norm();
      std::vector<Vec> basis{psi / nrm};
      std::vector<Vec> images;
      for (int j = 0; j < n_v; ++j) {
        images.push_back(h * basis[j]);
        if (j + 1 == n_v) break;
        Vec cand = images.back();
        const double ref = cand.norm();
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& v : basis) cand -= v * v.dot(cand);
        if (cand.norm() <= 1e-13 * std::max(1.0, ref)) break;
        basis.push_back(cand / cand.norm());
      }
      const int dim = static_cast<int>(basis.size());
      Mat a(dim, dim), nm(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          a(i, j) = basis[i].dot(images[j]);
          nm(i, j) = basis[i].dot(basis[j]);
        }
      Eigen::JacobiSVD<Mat> svd(nm, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      Eigen::VectorXd inv = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i < dim; ++i)
        if (sv(i) > 1e-12 * sv(0)) inv(i) = 1.0 / sv(i);
      Mat ninv = svd.matrixV() * inv.cast<cd>().asDiagonal() * svd.matrixU().adjoint();
      Mat e = expm(cd(0.0, -dt) * (ninv * a));
      Vec out = Vec::Zero(psi.size());
      for (int i = 0; i < dim; ++i) out += nrm * e(i, 0) * basis[i];
      return out;
    }
    case Method::split_step:
      throw Error(ErrorCode::invalid_argument,
                  "split step needs the kernel matrix; use dense_split_step");
  }
  throw Error(ErrorCode::invalid_argument, "unknown method");
}

Vec dense_split_step(const Vec& psi, const Mat& kinetic_prop, const Vec& half_phase) {
  Vec s = half_phase.cwiseProduct(psi);
  s = kinetic_prop * s;
  return half_phase.cwiseProduct(s);
}

}  // namespace qtt
