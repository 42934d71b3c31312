#pragma once

#include <vector>

#include "qtt/common.hpp"

namespace qtt {

/// Parameters of one Hermite kernel: highest Hermite order M (even),
/// width sigma, propagation time tau (0 for differentiation), derivative
/// order l, grid spacing dx and the coefficient cutoff used to bound the
/// band half-width.
struct HdafSpec {
  int M = 40;
  double sigma = 1.0;
  double tau = 0.0;
  int l = 0;
  double dx = 1.0;
  double eps_coef = 1e-16;
};

/// Banded kernel coefficients c_k = dx * delta_M^{(l)}(k dx; sigma, tau)
/// for k = 0..W. Negative offsets follow from c_{-k} = parity * c_k.
struct KernelTable {
  std::vector<cd> coeffs;
  int parity = 1;         // (-1)^l
  bool all_below = false; // width solve found every coefficient under eps
  std::int64_t width() const {
    return static_cast<std::int64_t>(coeffs.size()) - 1;
  }
};

struct WidthResult {
  std::int64_t W = 0;
  bool all_below = false;
};

/// Width sigma_M that makes the discrete kernel equal 1 at the origin.
double sigma_from_order(int M, double dx);

/// Operating width: max(sigma_M, 3 dx) for tau = 0, additionally floored
/// by sqrt(tau) for tau > 0.
double calibrate_sigma(int M, double dx, double tau);

/// Smallest band half-width W with |c_W| below spec.eps_coef, from the
/// quadratic bound on the Hermite envelope. all_below reports the
/// degenerate case where already |c_0| falls under the cutoff.
WidthResult solve_width(const HdafSpec& spec);

/// Kernel value dx * delta_M^{(l)}(x; sigma, tau) at a single point,
/// evaluated with the double recurrence in h_{n,l}.
cd hdaf_point(const HdafSpec& spec, double x);

/// Coefficients for offsets 0..W where W comes from solve_width.
KernelTable hdaf_coefficients(const HdafSpec& spec);

/// Fourier spectrum of the reconstruction kernel,
/// exp(-k^2 sigma^2 / 2) * sum_{m<=M/2} (k^2 sigma^2 / 2)^m / m!.
/// Bounded in [0, 1], equal to 1 at k = 0, non-increasing in |k|.
double filter_spectrum(int M, double sigma, double k);

/// Plateau edge sqrt(M+1)/sigma.
double transition_frequency(int M, double sigma);

}  // namespace qtt
