#include <doctest.h>

#include <cmath>
#include <numbers>

#include "psd/soft_rotor.hpp"
#include "psd/specfun.hpp"

using namespace psd;

namespace {

constexpr double kPi = std::numbers::pi;

// Power series of F in s: sum_k (-1)^k (s/2)^(2k) / (k!)^2 * Gamma((k+1)/2) / 4.
double F_series(double s) {
  long double sum = 0, term = 1;
  for (int k = 0; k < 80; ++k) {
    if (k > 0) term *= -(long double)(s * s) / (4.0L * k * k);
    sum += term * std::tgamma((k + 1) / 2.0L) / 4;
  }
  return double(sum);
}

// h'(u) by a plain midpoint rule on the angle.
double h_prime_midpoint(double u) {
  const int N = 200000;
  double s = 0;
  for (int k = 0; k < N; ++k) {
    const double b = (k + 0.5) * (kPi / 2) / N;
    const double x = std::pow(u * std::sin(b), 4);
    s += std::sin(b) * std::exp(-x) * (1 - 4 * x);
  }
  return s * (kPi / 2) / N;
}

}  // namespace

TEST_CASE("kernel tables against the power series and direct quadrature") {
  CHECK(kernel_F(0) == doctest::Approx(std::sqrt(kPi) / 4).epsilon(1e-14));
  for (double s : {0.0, 0.3, 1.0, 2.5, 4.0})
    CHECK(std::abs(kernel_F(s) - F_series(s)) < 1e-12);
  for (double s = 0.05; s < kSoftKernelSMax; s += 0.731) {
    CHECK(std::abs(kernel_F(s) - kernel_F_direct(s)) < 1e-13);
    CHECK(std::abs(kernel_F1(s) - kernel_F1_direct(s)) < 1e-13);
    CHECK(std::abs(kernel_F2(s) - kernel_F2_direct(s)) < 1e-13);
  }
  CHECK(kernel_F(kSoftKernelSMax + 1) == 0);
  // F1 = F'/s and F2 = F'' by finite differences of F
  for (double s : {0.7, 3.0, 8.0}) {
    const double h = 1e-3;
    const double d1 = (kernel_F(s + h) - kernel_F(s - h)) / (2 * h);
    const double d2 = (kernel_F(s + h) - 2 * kernel_F(s) + kernel_F(s - h)) / (h * h);
    CHECK(kernel_F1(s) == doctest::Approx(d1 / s).epsilon(1e-6));
    CHECK(kernel_F2(s) == doctest::Approx(d2).epsilon(1e-5));
  }
}

TEST_CASE("relaxation profile") {
  CHECK(relaxation_profile(0) == doctest::Approx(1).epsilon(1e-14));
  for (double u : {0.5, 1.0, 2.0, 3.0, 7.0, 20.0}) {
    const double ref = h_prime_midpoint(u);
    CHECK(std::abs(relaxation_profile(u) - ref) < 1e-9);
    CHECK(std::abs(relaxation_profile(u, RelaxationRoute::kernel_cosine) - ref) < 1e-9);
  }
  // At three relaxation times the transient is still -5.45 % of its initial size.
  CHECK(relaxation_profile(3) == doctest::Approx(-0.05453).epsilon(1e-3));
}

TEST_CASE("momentum marginals reproduce |Y|^2") {
  for (double a : {0.02, 0.05})
    for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}, {1, -1}})
      for (double th : {0.1, 0.9, 1.6, 2.8}) {
        const SoftRotorParams prm{a, 1, 1};
        const double y = std::norm(spherical_harmonic(l, m, th, 0.5));
        CHECK(std::abs(soft_momentum_marginal(l, m, prm, th, 0.5) - y) < 1e-10);
      }
}

TEST_CASE("moments") {
  const SoftRotorParams prm{0.05, 1, 1};
  for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}, {1, -1}}) {
    const MomentReport r = soft_moments(l, m, prm);
    CHECK(r.normalization == doctest::Approx(1).epsilon(1e-9));
    CHECK(r.l2 == doctest::Approx(l * (l + 1)).epsilon(1e-6));
    CHECK(std::abs(r.lz - m) < 1e-8);
  }
  CHECK(soft_moments(1, 1, prm, SoftSign::transcribed).lz == doctest::Approx(-1).epsilon(1e-8));
}

TEST_CASE("leading-order density tracks the full q integral") {
  for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}}) {
    double worst[2] = {0, 0};
    int i = 0;
    for (double a : {0.02, 0.05}) {
      const SoftRotorParams prm{a, 1, 1};
      const double peak = soft_angular_density(l, m, prm, {0.7, 0.3, 0, 0});
      for (double p : {0.0, 0.5, 1.5, 3.0}) {
        const AngularPhasePoint pt{0.7, 0.3, 0.6 * p, 0.8 * p};
        worst[i] = std::max(worst[i], std::abs(soft_angular_density(l, m, prm, pt) -
                                               soft_angular_density_full(l, m, prm, pt)) /
                                          std::abs(peak));
      }
      ++i;
    }
    CHECK(worst[0] < 5e-3);
    CHECK(worst[1] < 2e-2);
  }
}

TEST_CASE("relaxation of the (1,0) marginal") {
  const SoftRotorParams prm{0.05, 1, 1};
  const double tau = soft_relaxation_time(prm);
  CHECK(tau == doctest::Approx(std::sqrt(0.1)));
  for (double u : {0.0, 0.5, 1.0, 3.0, 20.0})
    for (double th : {0.0, 0.6, 1.4}) {
      CHECK(marginal_relaxation(prm, th, u * tau) ==
            doctest::Approx(marginal_relaxation_closed(prm, th, u * tau)).epsilon(1e-8));
    }
  // t = 0 gives the |Y_10|^2 shape, proportional to cos^2.
  CHECK(marginal_relaxation(prm, kPi / 2, 0) == doctest::Approx(0).scale(1));
  const double m0 = marginal_relaxation(prm, 0, 0), m1 = marginal_relaxation(prm, 0, tau);
  CHECK(std::abs(m1 / m0 - 1) > 0.01);
  CHECK_THROWS_AS(marginal_relaxation(prm, 0.3, -1), DomainError);
}

TEST_CASE("parameter validation and momentum profile") {
  CHECK_THROWS_AS(validate({0, 1, 1}), DomainError);
  CHECK_THROWS_AS(validate({0.05, -1, 1}), DomainError);
  CHECK(validate({0.05, 1, 1}).empty());
  CHECK_FALSE(validate({0.3, 1, 1}).empty());
  CHECK_THROWS_AS(soft_angular_density(2, 0, {}, {}), UnsupportedState);

  const SoftRotorParams prm;
  const auto rows = figure1_grid(prm, 12, 601);
  CHECK(rows.front().density == doctest::Approx(prm.a * prm.r0 / (kPi * kPi) * std::sqrt(kPi) / 4));
  // Falls monotonically to a first zero, then dips negative.
  std::size_t i = 1;
  for (; i < rows.size() && rows[i].density > 0; ++i) CHECK(rows[i].density < rows[i - 1].density);
  CHECK(i < rows.size());
  double lowest = 0;
  for (const auto& r : rows) lowest = std::min(lowest, r.density);
  CHECK(lowest < 0);
  CHECK(std::abs(lowest) < rows.front().density);
}
