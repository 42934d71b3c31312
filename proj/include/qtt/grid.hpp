#pragma once

#include "qtt/common.hpp"

namespace qtt {

/// Uniform periodic grid on [a, b) with 2^n points. Point s sits at
/// x_s = a + s*dx; the binary digits of s map big-endian onto the train
/// sites, most significant digit first.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n_qubits = 2;

  Grid() = default;
  Grid(double a_, double b_, int n) : a(a_), b(b_), n_qubits(n) {
    if (!(b > a)) throw Error(ErrorCode::invalid_argument, "grid needs b > a");
    if (n < 2 || n > 40)
      throw Error(ErrorCode::invalid_argument, "grid needs 2 <= n_qubits <= 40");
  }

  std::int64_t points() const { return std::int64_t{1} << n_qubits; }
  double dx() const { return (b - a) / static_cast<double>(points()); }
  double length() const { return b - a; }
  double x(std::int64_t s) const { return a + static_cast<double>(s) * dx(); }

  friend bool operator==(const Grid&, const Grid&) = default;
};

}  // namespace qtt
