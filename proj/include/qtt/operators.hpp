#pragma once

#include <map>

#include "qtt/grid.hpp"
#include "qtt/hdaf.hpp"
#include "qtt/mpo.hpp"

namespace qtt {

/// Cyclic displacement by k grid points: the dense form maps samples
/// f(x_s) to f(x_{s+k mod 2^n}). Built directly as a carry adder, bond
/// dimension 2 for any k.
Mpo displacement_mpo(const Grid& g, std::int64_t k);

enum class FdVariant { centered, smooth9 };

/// Finite-difference derivative of the given order (1 or 2) with periodic
/// wrap. smooth9 uses the 9-point noise-robust stencils.
Mpo fd_mpo(const Grid& g, int order, FdVariant variant);

/// Banded circulant operator sum_k coeffs[k] * Sigma^{+k}.
Mpo banded_mpo(const Grid& g, const std::map<std::int64_t, cd>& coeffs,
               const Tolerances& tol);

/// Hermite-kernel l-th derivative, sigma auto-calibrated for tau = 0.
Mpo hdaf_derivative_mpo(const Grid& g, int M, int l, double eps_coef,
                        const Tolerances& tol);

/// Hermite-kernel free propagator exp(+i (dt/2) d^2/dx^2), sigma floored
/// by sqrt(dt).
Mpo hdaf_propagator_mpo(const Grid& g, int M, double dt, double eps_coef,
                        const Tolerances& tol);

/// Appends identity sites at the fine end so a coarse-grid operator acts
/// blockwise on each 2^extra sub-block of the refined grid. Keeps the
/// coarse-grid round-off behavior on the finer grid.
Mpo extend_to_finer_grid(const Mpo& op, int extra_qubits);

/// Kernel table to operator, applying the derivative-orientation sign
/// convention for odd l.
Mpo kernel_mpo(const Grid& g, const KernelTable& table, const Tolerances& tol);

}  // namespace qtt
