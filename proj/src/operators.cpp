#include "qtt/operators.hpp"

namespace qtt {

using detail::TrainSite;

Mpo displacement_mpo(const Grid& g, std::int64_t k) {
  const int n = g.n_qubits;
  const std::int64_t npts = g.points();
  if (k <= -npts || k >= npts)
    throw Error(ErrorCode::invalid_argument, "displacement exceeds the grid");
  const std::int64_t m = ((npts - k) % npts + npts) % npts;  // s_out = s_in + m
  if (m == 0) return identity_mpo(n);

  Mpo op;
  op.train.resize(n);
  for (int j = 0; j < n; ++j) {
    const int mj = static_cast<int>((m >> (n - 1 - j)) & 1);
    const Index dl = (j == 0) ? 1 : 2;
    const Index dr = (j == n - 1) ? 1 : 2;
    TrainSite site;
    site.blocks.assign(4, Mat::Zero(dl, dr));
    for (int ci = 0; ci < (dr == 1 ? 1 : 2); ++ci)
      for (int sin = 0; sin < 2; ++sin) {
        const int total = sin + mj + ci;
        const int sout = total & 1;
        const int co = total >> 1;
        if (dl == 1)
          site.blocks[2 * sout + sin](0, ci) += 1.0;  // final carry discarded
        else
          site.blocks[2 * sout + sin](co, ci) = 1.0;
      }
    op.train[j] = std::move(site);
  }
  return op;
}

Mpo banded_mpo(const Grid& g, const std::map<std::int64_t, cd>& coeffs,
               const Tolerances& tol) {
  std::vector<Mpo> pending;
  std::vector<cd> weights;
  Mpo acc;
  bool have_acc = false;

  auto flush = [&]() {
    if (pending.empty()) return;
    std::vector<const Mpo*> ops;
    std::vector<cd> ws;
    if (have_acc) {
      ops.push_back(&acc);
      ws.push_back(1.0);
    }
    for (const auto& p : pending) ops.push_back(&p);
    ws.insert(ws.end(), weights.begin(), weights.end());
    acc = mpo_add_many(ops, ws, tol);
    have_acc = true;
    pending.clear();
    weights.clear();
  };

  for (const auto& [k, c] : coeffs) {
    if (c == cd(0.0)) continue;
    pending.push_back(displacement_mpo(g, k));
    weights.push_back(c);
    if (pending.size() >= 8) flush();
  }
  flush();
  if (!have_acc) return mpo_scale(identity_mpo(g.n_qubits), 0.0);
  return acc;
}

Mpo fd_mpo(const Grid& g, int order, FdVariant variant) {
  const double dx = g.dx();
  std::map<std::int64_t, cd> c;
  if (order == 1) {
    if (variant == FdVariant::centered) {
      c[1] = 0.5 / dx;
      c[-1] = -0.5 / dx;
    } else {
      const double w[] = {14.0 / 128.0, 14.0 / 128.0, 6.0 / 128.0, 1.0 / 128.0};
      for (int k = 1; k <= 4; ++k) {
        c[k] = w[k - 1] / dx;
        c[-k] = -w[k - 1] / dx;
      }
    }
  } else if (order == 2) {
    if (variant == FdVariant::centered) {
      c[1] = 1.0 / (dx * dx);
      c[0] = -2.0 / (dx * dx);
      c[-1] = 1.0 / (dx * dx);
    } else {
      const double w0 = -10.0 / 64.0;
      const double w[] = {-4.0 / 64.0, 4.0 / 64.0, 4.0 / 64.0, 1.0 / 64.0};
      c[0] = w0 / (dx * dx);
      for (int k = 1; k <= 4; ++k) {
        c[k] = w[k - 1] / (dx * dx);
        c[-k] = w[k - 1] / (dx * dx);
      }
    }
  } else {
    throw Error(ErrorCode::invalid_argument, "fd_mpo supports orders 1 and 2");
  }
  Tolerances tight;  // stencil sums are tiny, compress to machine precision
  tight.simplify_tol = 1e-30;
  return banded_mpo(g, c, tight);
}

Mpo kernel_mpo(const Grid& g, const KernelTable& table, const Tolerances& tol) {
  const std::int64_t w = table.width();
  if (w >= g.points())
    throw Error(ErrorCode::too_coarse,
                "kernel band exceeds the grid; fewer qubits than the kernel needs");
  const double parity = table.parity;
  std::map<std::int64_t, cd> coeffs;
  coeffs[0] = parity * table.coeffs[0];
  for (std::int64_t k = 1; k <= w; ++k) {
    coeffs[-k] = table.coeffs[k];
    coeffs[k] = parity * table.coeffs[k];
  }
  return banded_mpo(g, coeffs, tol);
}

Mpo hdaf_derivative_mpo(const Grid& g, int M, int l, double eps_coef,
                        const Tolerances& tol) {
  if (l < 1)
    throw Error(ErrorCode::invalid_argument, "derivative order must be >= 1");
  HdafSpec spec;
  spec.M = M;
  spec.l = l;
  spec.dx = g.dx();
  spec.tau = 0.0;
  spec.sigma = calibrate_sigma(M, spec.dx, 0.0);
  spec.eps_coef = eps_coef;
  return kernel_mpo(g, hdaf_coefficients(spec), tol);
}

Mpo hdaf_propagator_mpo(const Grid& g, int M, double dt, double eps_coef,
                        const Tolerances& tol) {
  if (!(dt > 0)) throw Error(ErrorCode::invalid_argument, "propagator needs dt > 0");
  HdafSpec spec;
  spec.M = M;
  spec.l = 0;
  spec.dx = g.dx();
  spec.tau = dt;
  spec.sigma = calibrate_sigma(M, spec.dx, dt);
  spec.eps_coef = eps_coef;
  return kernel_mpo(g, hdaf_coefficients(spec), tol);
}

Mpo extend_to_finer_grid(const Mpo& op, int extra_qubits) {
  if (extra_qubits < 0)
    throw Error(ErrorCode::invalid_argument, "extra_qubits must be >= 0");
  Mpo out = op;
  for (int e = 0; e < extra_qubits; ++e) {
    TrainSite site;
    site.blocks.assign(4, Mat::Zero(1, 1));
    site.blocks[0](0, 0) = 1.0;
    site.blocks[3](0, 0) = 1.0;
    out.train.push_back(std::move(site));
  }
  return out;
}

}  // namespace qtt
