#include <cmath>
#include <complex>

#include <doctest.h>

#include "qtt/hdaf.hpp"

using namespace qtt;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Direct Hermite-series evaluation of dx * delta_M^{(l)}(x; sigma, tau) in
// extended precision, independent of the production recurrence.
std::complex<double> hdaf_series_oracle(int M, int l, double sigma, double tau,
                                        double dx, double x) {
  using cl = std::complex<long double>;
  const cl zsq(static_cast<long double>(sigma) * sigma, tau);
  const cl denom = std::sqrt(2.0L * zsq);
  const cl z = static_cast<long double>(x) / denom;
  const cl c = -0.25L * static_cast<long double>(sigma) * sigma / zsq;
  const cl gauss = std::exp(-z * z);
  // Hermite values by the plain three-term recurrence
  std::vector<cl> h(2 * (M / 2) + l + 1);
  h[0] = 1.0L;
  if (h.size() > 1) h[1] = 2.0L * z;
  for (std::size_t n = 2; n < h.size(); ++n)
    h[n] = 2.0L * z * h[n - 1] - 2.0L * (static_cast<long double>(n) - 1.0L) * h[n - 2];
  cl sum = 0.0L;
  cl cpow = 1.0L;
  long double fact = 1.0L;
  for (int m = 0; m <= M / 2; ++m) {
    if (m > 0) {
      cpow *= c;
      fact *= m;
    }
    sum += h[2 * m + l] * cpow / fact;
  }
  const long double sign = (l % 2 == 0) ? 1.0L : -1.0L;
  const cl dl = sign * static_cast<long double>(dx) /
                (std::pow(denom, l + 1) * std::sqrt(static_cast<long double>(kPi)));
  const cl val = dl * gauss * sum;
  return {static_cast<double>(val.real()), static_cast<double>(val.imag())};
}

}  // namespace

TEST_CASE("sigma_from_order matches the direct binomial sum") {
  // H_{2m}(0) = (-1)^m (2m)!/m! turns the series into sum_m C(2m,m)/4^m
  auto direct = [](int M, double dx) {
    double sum = 0.0;
    for (int m = 0; m <= M / 2; ++m) {
      double binom = 1.0;
      for (int i = 1; i <= m; ++i) binom *= (m + i) / static_cast<double>(i);
      sum += binom / std::pow(4.0, m);
    }
    return dx * sum / std::sqrt(2.0 * kPi);
  };
  CHECK(sigma_from_order(0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-14));
  CHECK(sigma_from_order(40, 1.0) == doctest::Approx(direct(40, 1.0)).epsilon(1e-13));
  CHECK(sigma_from_order(88, 2.5) == doctest::Approx(direct(88, 2.5)).epsilon(1e-13));
}

TEST_CASE("calibrate_sigma applies the floors") {
  // M=0: sigma_M ~ 0.3989 dx loses to the 3 dx floor
  CHECK(calibrate_sigma(0, 1.0, 0.0) == doctest::Approx(3.0));
  // tau = 25 dx^2 dominates both floors
  CHECK(calibrate_sigma(0, 1.0, 25.0) == doctest::Approx(5.0));
  // big M: sigma_M wins eventually
  const double dx = 1.0;
  CHECK(calibrate_sigma(200, dx, 0.0) == doctest::Approx(sigma_from_order(200, dx)));
  CHECK(calibrate_sigma(200, dx, 0.0) > 3.0 * dx);
}

TEST_CASE("M=0 coefficients are a plain Gaussian") {
  HdafSpec spec;
  spec.M = 0;
  spec.l = 0;
  spec.dx = 0.5;
  spec.sigma = 3.0 * spec.dx;
  spec.eps_coef = 1e-16;
  KernelTable t = hdaf_coefficients(spec);
  REQUIRE(t.width() >= 5);
  for (std::int64_t k = 0; k <= 5; ++k) {
    const double x = k * spec.dx;
    const double expected = spec.dx *
                            std::exp(-x * x / (2.0 * spec.sigma * spec.sigma)) /
                            (std::sqrt(2.0 * kPi) * spec.sigma);
    CHECK(t.coeffs[k].real() == doctest::Approx(expected).epsilon(1e-13));
    CHECK(t.coeffs[k].imag() == 0.0);
  }
}

TEST_CASE("recurrence matches the extended-precision series") {
  SUBCASE("reconstruction and derivative kernels, tau = 0") {
    for (int M : {8, 40, 88}) {
      for (int l : {0, 1, 2}) {
        const double dx = 0.1;
        const double sigma = calibrate_sigma(M, dx, 0.0);
        HdafSpec spec{M, sigma, 0.0, l, dx, 1e-16};
        KernelTable t = hdaf_coefficients(spec);
        for (std::int64_t k = 0; k <= t.width(); k += 3) {
          const auto ref = hdaf_series_oracle(M, l, sigma, 0.0, dx, k * dx);
          const double scale = std::max(std::abs(ref), 1e-300);
          CHECK(std::abs(t.coeffs[k] - cd(ref)) / scale < 1e-12);
          CHECK(t.coeffs[k].imag() == 0.0);
        }
      }
    }
  }
  SUBCASE("free propagator kernel, tau > 0") {
    const int M = 40;
    const double dx = 0.05, tau = 0.1;
    const double sigma = calibrate_sigma(M, dx, tau);
    HdafSpec spec{M, sigma, tau, 0, dx, 1e-16};
    KernelTable t = hdaf_coefficients(spec);
    CHECK(!t.all_below);
    for (std::int64_t k = 0; k <= t.width(); k += 7) {
      const auto ref = hdaf_series_oracle(M, 0, sigma, tau, dx, k * dx);
      const double scale = std::max(std::abs(ref), 1e-300);
      CHECK(std::abs(t.coeffs[k] - cd(ref)) / scale < 1e-12);
    }
  }
}

TEST_CASE("free propagator kernel reduces to reconstruction at tau=0") {
  const int M = 24;
  const double dx = 0.2;
  const double sigma = calibrate_sigma(M, dx, 0.0);
  HdafSpec rec{M, sigma, 0.0, 0, dx, 1e-16};
  KernelTable a = hdaf_coefficients(rec);
  for (std::int64_t k = 0; k <= a.width(); ++k) {
    const auto direct = hdaf_series_oracle(M, 0, sigma, 0.0, dx, k * dx);
    CHECK(std::abs(a.coeffs[k] - cd(direct)) < 1e-14 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("odd derivative kernels vanish at the origin and carry odd parity") {
  HdafSpec spec{40, 0.3, 0.0, 1, 0.1, 1e-16};
  KernelTable t = hdaf_coefficients(spec);
  CHECK(t.parity == -1);
  CHECK(t.coeffs[0] == cd(0.0, 0.0));
  // antisymmetry of the underlying kernel at +-x
  for (double x : {0.05, 0.2, 0.41}) {
    const cd plus = hdaf_point(spec, x);
    const cd minus = hdaf_point(spec, -x);
    CHECK(std::abs(plus + minus) < 1e-14 * std::max(1.0, std::abs(plus)));
  }
}

TEST_CASE("even kernels are symmetric at +-x") {
  HdafSpec spec{16, 0.45, 0.0, 2, 0.15, 1e-16};
  for (double x : {0.1, 0.33, 0.9}) {
    const cd plus = hdaf_point(spec, x);
    const cd minus = hdaf_point(spec, -x);
    CHECK(std::abs(plus - minus) < 1e-14 * std::max(1.0, std::abs(plus)));
  }
}

TEST_CASE("solve_width") {
  SUBCASE("degenerate budget keeps only the diagonal") {
    HdafSpec spec{8, 0.5, 0.0, 0, 0.1, 1e200};
    WidthResult wr = solve_width(spec);
    CHECK(wr.W == 0);
    CHECK(wr.all_below);
  }
  SUBCASE("bracketed by a brute-force coefficient scan") {
    const int M = 40;
    const double dx = 0.1;
    const double sigma = calibrate_sigma(M, dx, 0.0);
    const double eps = 1e-16;
    HdafSpec spec{M, sigma, 0.0, 0, dx, eps};
    WidthResult wr = solve_width(spec);
    REQUIRE(!wr.all_below);
    // smallest k beyond which every coefficient stays under eps
    std::int64_t w_true = 0;
    for (std::int64_t k = 4096; k >= 0; --k) {
      if (std::abs(hdaf_point(spec, k * dx)) > eps) {
        w_true = k + 1;
        break;
      }
    }
    CHECK(wr.W >= w_true / 2);
    CHECK(wr.W <= 2 * w_true);
    // the coefficient at the solved width is honestly small
    CHECK(std::abs(hdaf_point(spec, wr.W * dx)) <= 10.0 * eps);
  }
  SUBCASE("propagation widens the band monotonically") {
    const int M = 20;
    const double dx = 0.1, sigma = 0.5;
    HdafSpec a{M, sigma, 0.0, 0, dx, 1e-16};
    HdafSpec b{M, sigma, 0.05, 0, dx, 1e-16};
    HdafSpec c{M, sigma, 0.5, 0, dx, 1e-16};
    CHECK(solve_width(a).W < solve_width(b).W);
    CHECK(solve_width(b).W < solve_width(c).W);
  }
}

TEST_CASE("filter spectrum") {
  SUBCASE("equals one at k=0") {
    for (int M : {0, 8, 40, 200}) CHECK(filter_spectrum(M, 1.3, 0.0) == 1.0);
  }
  SUBCASE("large M approaches the true delta") {
    CHECK(filter_spectrum(200, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("bounded, monotone, with the transition near the predicted edge") {
    for (int M : {8, 20, 40, 80}) {
      const double sigma = sigma_from_order(M, 1.0);
      double prev = 1.0;
      for (int i = 1; i <= 200; ++i) {
        const double k = 8.0 * i / 200.0;
        const double v = filter_spectrum(M, sigma, k);
        CHECK(v >= 0.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
      }
      const double at_edge = filter_spectrum(M, sigma, transition_frequency(M, sigma));
      CHECK(at_edge > 0.3);
      CHECK(at_edge < 0.7);
    }
  }
}

TEST_CASE("reconstruction kernel acts as identity on low-degree polynomials") {
  // discrete convolution of the l=0 table against sampled polynomials
  const int M = 8;
  const double dx = 0.1;
  const double sigma = calibrate_sigma(M, dx, 0.0);
  HdafSpec spec{M, sigma, 0.0, 0, dx, 1e-18};
  KernelTable t = hdaf_coefficients(spec);
  const std::int64_t w = t.width();
  auto poly = [](double x) {
    return 1.0 + 0.5 * x - 0.3 * x * x + 0.2 * x * x * x - 0.05 * x * x * x * x +
           0.01 * x * x * x * x * x + 0.002 * x * x * x * x * x * x;
  };
  const int n = 512;
  for (int i = 200; i < 312; ++i) {
    const double x = (i - n / 2) * dx;
    double acc = t.coeffs[0].real() * poly(x);
    for (std::int64_t k = 1; k <= w; ++k)
      acc += t.coeffs[k].real() * (poly(x + k * dx) + poly(x - k * dx));
    CHECK(acc == doctest::Approx(poly(x)).epsilon(1e-10));
  }
}

TEST_CASE("overflow is reported") {
  // the derivative prefactor sigma^{-(l+1)} blows past the double range
  HdafSpec spec{40, 1e-120, 0.0, 2, 1.0, 1e-16};
  CHECK_THROWS_AS((void)hdaf_point(spec, 0.0), Error);
}
