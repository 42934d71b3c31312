#include "qtt/loader.hpp"

#include <cmath>

namespace qtt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Grid quench_grid(const QuenchParams& p, int n_qubits) {
  const double half = 8.0 * p.sigma_max();
  return Grid(-half, half, n_qubits);
}

double quench_omega(const QuenchParams& p, double t) {
  const double c = std::cos(p.omega_h * t), s = std::sin(p.omega_h * t);
  const double d = (p.omega_h / p.omega0) * c * c + (p.omega0 / p.omega_h) * s * s;
  return p.omega_h / d;
}

double quench_beta(const QuenchParams& p, double t) {
  return 0.25 * quench_omega(p, t) * (p.omega_h / p.omega0 - p.omega0 / p.omega_h) *
         std::sin(2.0 * p.omega_h * t);
}

double quench_phase_integral(const QuenchParams& p, double t) {
  // int_0^t omega dt' = arctan((omega0/omega_h) tan(omega_h t)), continued
  // across the poles of tan so the phase stays continuous.
  const double u = p.omega_h * t;
  const double m = std::floor(u / kPi + 0.5);
  const double r = u - m * kPi;  // in [-pi/2, pi/2)
  double val;
  if (std::abs(std::abs(r) - 0.5 * kPi) < 1e-12) {
    val = (r > 0 ? 0.5 : -0.5) * kPi;
  } else {
    val = std::atan((p.omega0 / p.omega_h) * std::tan(r));
  }
  return val + m * kPi;
}

cd quench_wavefunction(const QuenchParams& p, double t, double x) {
  const double w = quench_omega(p, t);
  const double beta = quench_beta(p, t);
  const double theta = quench_phase_integral(p, t);
  const cd exponent = -cd(0.5 * w, beta) * x * x - cd(0.0, 0.5 * theta);
  return std::pow(w / kPi, 0.25) * std::exp(exponent);
}

double quench_potential(const QuenchParams& p, double x) {
  double v = 0.5 * p.omega_h * p.omega_h * x * x;
  if (p.u != 0.0)
    v += p.u * std::exp(-x * x / (2.0 * p.sigma_barrier * p.sigma_barrier));
  return v;
}

Loaded load_function(const std::function<cd(double)>& f, const Grid& g,
                     const Tolerances& tol) {
  const std::int64_t npts = g.points();
  if (g.n_qubits > 26)
    throw Error(ErrorCode::invalid_argument, "dense sampling limited to 26 qubits");
  Vec samples(npts);
  for (std::int64_t s = 0; s < npts; ++s) {
    cd v = f(g.x(s));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::non_finite, "function sample is not finite");
    if (std::abs(v) < 1e-300) v = 0.0;  // zero-pad the far tails
    samples(s) = v;
  }
  const double norm_const = samples.squaredNorm();
  Loaded out;
  out.norm_const = norm_const;
  if (norm_const > 0) {
    const double root = std::sqrt(norm_const);
    out.state = mps_from_dense(g, Vec(samples / root), tol);
    out.state.scale = root;
  } else {
    out.state = mps_from_dense(g, samples, tol);
  }
  return out;
}

MpsState analytic_quench(const QuenchParams& p, double t, const Grid& g,
                         const Tolerances& tol) {
  return load_function([&](double x) { return quench_wavefunction(p, t, x); }, g, tol)
      .state;
}

Mpo diagonal_mpo(const MpsState& values) {
  Mpo op;
  const int n = values.n_sites();
  op.train.resize(n);
  for (int k = 0; k < n; ++k) {
    const auto& src = values.train[k];
    detail::TrainSite site;
    site.blocks.assign(4, Mat::Zero(src.dl(), src.dr()));
    site.blocks[0] = src.blocks[0];  // (0,0)
    site.blocks[3] = src.blocks[1];  // (1,1)
    op.train[k] = std::move(site);
  }
  for (auto& b : op.train[0].blocks) b *= values.scale;
  return op;
}

}  // namespace qtt
