#include "qtt/hdaf.hpp"

#include <cmath>

namespace qtt {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_spec(const HdafSpec& s) {
  if (s.M < 0 || s.M % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "hdaf order M must be even and >= 0");
  if (!(s.sigma > 0)) throw Error(ErrorCode::invalid_argument, "hdaf sigma must be > 0");
  if (s.tau < 0) throw Error(ErrorCode::invalid_argument, "hdaf tau must be >= 0");
  if (s.l < 0) throw Error(ErrorCode::invalid_argument, "hdaf derivative order must be >= 0");
  if (!(s.dx > 0)) throw Error(ErrorCode::invalid_argument, "hdaf dx must be > 0");
}

// Sum of the kernel series at one point. T is double for tau = 0 and
// complex<double> otherwise, so real kernels come out exactly real.
// zsq = sigma^2 + i tau; z = x / sqrt(2 zsq); c = -sigma^2 / (4 zsq).
template <typename T>
T h_recurrence_sum(int M, int l, T z, T c) {
  // h_{n,l}(z) = H_{2n+l}(z) exp(-z^2) c^n / n!, advanced with
  //   h_{n+1,l}   = 2c/(n+1) [ z h_{n,l+1} - (2n+l+1) h_{n,l} ]
  //   h_{n+1,l+1} = 2z h_{n+1,l} - 2c (2 + l/(n+1)) h_{n,l+1}
  T gauss = std::exp(-z * z);
  // raise the base order from (0, 1) to (l, l+1)
  T h_even = gauss;              // ends as H_l(z) e^{-z^2}
  T h_odd = T(2.0) * z * gauss;  // ends as H_{l+1}(z) e^{-z^2}
  for (int k = 1; k <= l; ++k) {
    T hn = T(2.0) * z * h_odd - T(2.0 * k) * h_even;
    h_even = h_odd;
    h_odd = hn;
  }
  T sum = h_even;
  for (int n = 0; n < M / 2; ++n) {
    T hl_next = c / T(n + 1) * T(2.0) * (z * h_odd - T(2 * n + l + 1) * h_even);
    T hl1_next = T(2.0) * z * hl_next -
                 T(2.0) * c * (T(2.0) + T(l) / T(n + 1)) * h_odd;
    h_even = hl_next;
    h_odd = hl1_next;
    sum += h_even;
    if (!std::isfinite(std::abs(sum)))
      throw Error(ErrorCode::overflow, "hdaf coefficient recurrence overflowed");
  }
  return sum;
}

}  // namespace

double sigma_from_order(int M, double dx) {
  if (M < 0 || M % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "hdaf order M must be even and >= 0");
  // sum_m (-1/4)^m H_{2m}(0)/m! with H_{2m}(0) = (-1)^m (2m)!/m!, i.e.
  // the central binomial series sum_m C(2m,m)/4^m.
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m <= M / 2; ++m) {
    term *= (2.0 * m - 1.0) / (2.0 * m);
    sum += term;
  }
  return dx * sum / std::sqrt(2.0 * kPi);
}

double calibrate_sigma(int M, double dx, double tau) {
  if (!(dx > 0)) throw Error(ErrorCode::invalid_argument, "dx must be > 0");
  if (tau < 0) throw Error(ErrorCode::invalid_argument, "tau must be >= 0");
  double sigma = std::max(sigma_from_order(M, dx), 3.0 * dx);
  if (tau > 0) sigma = std::max(sigma, std::sqrt(tau));
  return sigma;
}

WidthResult solve_width(const HdafSpec& spec) {
  check_spec(spec);
  if (!(spec.eps_coef > 0))
    throw Error(ErrorCode::invalid_argument, "eps_coef must be > 0");
  const double s2 = spec.sigma * spec.sigma;
  const double mod = std::hypot(s2, spec.tau);  // |sigma^2 + i tau|
  const double w2 = s2 + spec.tau * spec.tau / s2;
  const int M = spec.M, l = spec.l;

  const double A = spec.dx * spec.dx / (2.0 * w2);
  const double B = spec.dx * std::sqrt((M + l) / mod);
  // log eta with factorials through lgamma
  const double log_eta = std::log(spec.dx) + 0.5 * std::lgamma(M + l + 1.0) -
                         0.5 * std::log(2.0 * kPi) -
                         0.5 * (l + 1) * std::log(mod) -
                         std::lgamma(M / 2 + 1.0) +
                         0.5 * M * std::log(s2 / (2.0 * mod));
  const double C = std::log(spec.eps_coef) - log_eta;

  const double disc = B * B - 4.0 * A * C;
  if (disc < 0) {
    // the cutoff sits above the envelope peak: only the diagonal survives
    return {0, true};
  }
  const double root = (B + std::sqrt(disc)) / (2.0 * A);
  std::int64_t W = static_cast<std::int64_t>(std::ceil(root));
  if (W < 0) W = 0;
  return {W, false};
}

cd hdaf_point(const HdafSpec& spec, double x) {
  check_spec(spec);
  const double s2 = spec.sigma * spec.sigma;
  const double sign_l = (spec.l % 2 == 0) ? 1.0 : -1.0;
  cd val;
  if (spec.tau == 0.0) {
    const double denom = std::sqrt(2.0 * s2);
    const double z = x / denom;
    const double c = -0.25;
    const double d_l =
        sign_l * spec.dx / (std::pow(denom, spec.l + 1) * std::sqrt(kPi));
    val = cd(d_l * h_recurrence_sum<double>(spec.M, spec.l, z, c), 0.0);
  } else {
    const cd zsq(s2, spec.tau);
    const cd denom = std::sqrt(2.0 * zsq);
    const cd z = x / denom;
    const cd c = -0.25 * s2 / zsq;
    const cd d_l = sign_l * spec.dx / (std::pow(denom, spec.l + 1) * std::sqrt(kPi));
    val = d_l * h_recurrence_sum<cd>(spec.M, spec.l, z, c);
  }
  if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
    throw Error(ErrorCode::overflow, "hdaf kernel value overflowed");
  return val;
}

KernelTable hdaf_coefficients(const HdafSpec& spec) {
  WidthResult wr = solve_width(spec);
  KernelTable table;
  table.parity = (spec.l % 2 == 0) ? 1 : -1;
  table.all_below = wr.all_below;
  table.coeffs.resize(wr.W + 1);
  for (std::int64_t k = 0; k <= wr.W; ++k)
    table.coeffs[k] = hdaf_point(spec, k * spec.dx);
  if (spec.l % 2 == 1) table.coeffs[0] = cd(0.0, 0.0);  // odd Hermite at 0
  return table;
}

double filter_spectrum(int M, double sigma, double k) {
  if (M < 0 || M % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "hdaf order M must be even and >= 0");
  const double x = 0.5 * k * k * sigma * sigma;
  const int N = M / 2;
  if (x <= 700.0) {
    double term = std::exp(-x);
    double sum = term;
    for (int m = 1; m <= N; ++m) {
      term *= x / m;
      sum += term;
    }
    return std::min(sum, 1.0);
  }
  // far tail: sum exp(-x + m log x - lgamma(m+1)) with a max shift
  double max_log = -x;
  std::vector<double> logs(N + 1);
  for (int m = 0; m <= N; ++m) {
    logs[m] = -x + m * std::log(x) - std::lgamma(m + 1.0);
    max_log = std::max(max_log, logs[m]);
  }
  if (max_log < -745.0) return 0.0;
  double sum = 0.0;
  for (int m = 0; m <= N; ++m) sum += std::exp(logs[m] - max_log);
  return std::min(std::exp(max_log) * sum, 1.0);
}

double transition_frequency(int M, double sigma) {
  return std::sqrt(M + 1.0) / sigma;
}

}  // namespace qtt
