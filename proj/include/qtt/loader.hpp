#pragma once

#include <functional>

#include "qtt/mpo.hpp"
#include "qtt/mps.hpp"

namespace qtt {

/// Sudden relaxation of a harmonic trap from omega0 to omega_h, optionally
/// with a Gaussian barrier of height u and width sigma_barrier at x = 0.
struct QuenchParams {
  double omega0 = 1.0;
  double omega_h = 0.1;
  double u = 0.0;
  double sigma_barrier = 1.0;

  bool harmonic() const { return u == 0.0; }
  double expansion_ratio() const { return omega0 / omega_h; }
  double sigma_max() const { return std::sqrt(omega0) / omega_h; }
  double period() const { return 3.14159265358979323846 / omega_h; }
};

/// Domain sized to hold the fully expanded packet: [-8 sigma_max, 8 sigma_max).
Grid quench_grid(const QuenchParams& p, int n_qubits);

double quench_omega(const QuenchParams& p, double t);
double quench_beta(const QuenchParams& p, double t);
/// Accumulated phase integral of omega over [0, t], branch-continued.
double quench_phase_integral(const QuenchParams& p, double t);
/// Wavefunction of the harmonic quench (u = 0), including the global phase.
cd quench_wavefunction(const QuenchParams& p, double t, double x);
/// Potential for t > 0.
double quench_potential(const QuenchParams& p, double x);

struct Loaded {
  MpsState state;       // dense(state) reproduces the samples f(x_s)
  double norm_const;    // N_f = sum_s |f(x_s)|^2; the train alone encodes f/sqrt(N_f)
};

/// Samples f on the grid and compresses. Values below 1e-300 in magnitude
/// are clamped to zero before compression. Throws on non-finite samples.
Loaded load_function(const std::function<cd(double)>& f, const Grid& g,
                     const Tolerances& tol);

/// The analytic quench state at time t (u = 0 only), L2-normalized samples.
MpsState analytic_quench(const QuenchParams& p, double t, const Grid& g,
                         const Tolerances& tol);

/// Diagonal operator diag(dense(values)), scale included.
Mpo diagonal_mpo(const MpsState& values);

}  // namespace qtt
