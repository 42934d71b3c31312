#include "qtt/dense.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

namespace qtt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

DenseState dense_from_function(const std::function<cd(double)>& f, const Grid& g) {
  DenseState s;
  s.grid = g;
  s.amp.resize(g.points());
  for (std::int64_t i = 0; i < g.points(); ++i) s.amp(i) = f(g.x(i));
  return s;
}

DenseState analytic_solution_dense(const QuenchParams& p, double t, const Grid& g) {
  return dense_from_function([&](double x) { return quench_wavefunction(p, t, x); }, g);
}

Eigen::VectorXd sample_potential(const QuenchParams& p, const Grid& g) {
  Eigen::VectorXd v(g.points());
  for (std::int64_t i = 0; i < g.points(); ++i) v(i) = quench_potential(p, g.x(i));
  return v;
}

void fft_split_step(DenseState& s, const Eigen::VectorXd& potential, double dt) {
  const std::int64_t n = s.grid.points();
  const double dk = 2.0 * kPi / s.grid.length();
  for (std::int64_t i = 0; i < n; ++i)
    s.amp(i) *= std::exp(cd(0.0, -0.5 * dt * potential(i)));
  Eigen::FFT<double> fft;
  std::vector<cd> freq(n), time(s.amp.data(), s.amp.data() + n);
  fft.fwd(freq, time);
  for (std::int64_t j = 0; j < n; ++j) {
    const double k = dk * static_cast<double>(j < n / 2 ? j : j - n);
    freq[j] *= std::exp(cd(0.0, -0.5 * dt * k * k));
  }
  fft.inv(time, freq);
  for (std::int64_t i = 0; i < n; ++i)
    s.amp(i) = time[i] * std::exp(cd(0.0, -0.5 * dt * potential(i)));
}

Mat dense_kernel_matrix(const KernelTable& table, const Grid& g) {
  const std::int64_t n = g.points();
  const std::int64_t w = table.width();
  if (w >= n)
    throw Error(ErrorCode::too_coarse, "kernel band exceeds the grid");
  Mat k = Mat::Zero(n, n);
  const double parity = table.parity;
  for (std::int64_t i = 0; i < n; ++i) {
    k(i, i) += parity * table.coeffs[0];
    for (std::int64_t m = 1; m <= w; ++m) {
      k(i, (i + m) % n) += parity * table.coeffs[m];  // Sigma^{+m} side
      k(i, ((i - m) % n + n) % n) += table.coeffs[m];
    }
  }
  return k;
}

double dense_epsilon(const Vec& a, const Vec& b, double dx) {
  return std::sqrt((a - b).squaredNorm() * dx);
}

Mat expm(const Mat& m) { return m.exp(); }

}  // namespace qtt
