#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "psd/quadrature.hpp"
#include "psd/true_rotor.hpp"

using namespace psd;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::pair<int, int>> kStates = {{0, 0}, {1, -1}, {1, 0}, {1, 1}, {2, -2},
                                                  {2, -1}, {2, 0}, {2, 1}, {2, 2}};

cplx Y(int l, int m, const Vec3& v) {
  const Spherical s = to_spherical(v);
  return spherical_harmonic(l, m, s.theta, s.phi);
}

// Damped transform on a plain Cartesian (q_theta, q_phi) grid.
double damped_transform_grid(int l, int m, double th, double ph, double pt, double pf, double eta) {
  const LocalFrame f = local_frame(th, ph);
  const double Q = std::sqrt(40 / eta), h = 0.04;
  const int n = int(Q / h);
  cplx s = 0;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const double qt = i * h, qf = j * h;
      const Vec3 d = qt * f.theta_hat + qf * f.phi_hat;
      const cplx v = std::conj(Y(l, m, f.r_hat + d)) * Y(l, m, f.r_hat - d);
      s += std::polar(std::exp(-eta * (qt * qt + qf * qf)), 2 * (pt * qt + pf * qf)) * v;
    }
  return s.real() * h * h / (kPi * kPi);
}

AngularPhasePoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0, 1);
  const double p = 0.2 + 2.5 * U(rng), a = 2 * kPi * U(rng);
  return {0.15 + (kPi - 0.3) * U(rng), 2 * kPi * U(rng), p * std::sin(a), p * std::cos(a)};
}

}  // namespace

TEST_CASE("normalization, marginals and angular momentum") {
  for (auto [l, m] : kStates)
    for (RotorForm form : {RotorForm::derived, RotorForm::raw}) {
      const MomentReport r = rotor_moments(l, m, form);
      CHECK(r.normalization == doctest::Approx(1).epsilon(1e-10));
      CHECK(r.l2 == doctest::Approx(l * (l + 1)).epsilon(1e-8));
      CHECK(std::abs(r.lz - m) < 1e-8);
      for (double th : {0.05, 0.8, 1.9, 3.0})
        CHECK(std::abs(rotor_marginal(l, m, th, 0.2, form) - std::norm(spherical_harmonic(l, m, th, 0.2))) < 1e-10);
    }
}

TEST_CASE("transcribed (2,1) form keeps marginals but not Lz") {
  const MomentReport r = rotor_moments(2, 1, RotorForm::transcribed);
  CHECK(r.normalization == doctest::Approx(1).epsilon(1e-10));
  CHECK(r.l2 == doctest::Approx(6).epsilon(1e-8));
  CHECK(r.lz == doctest::Approx(-10).epsilon(1e-8));
  std::mt19937_64 rng(2);
  for (auto [l, m] : kStates) {
    if (l == 2 && std::abs(m) == 1) continue;
    const AngularPhasePoint a = random_point(rng);
    CHECK(rotor_smooth(l, m, a, RotorForm::transcribed) == rotor_smooth(l, m, a, RotorForm::derived));
  }
}

TEST_CASE("derived form is the stationary projection of the full transform") {
  // Same alpha average and cos(alpha) coefficient.
  const Rule ar = periodic_trapezoid(64);
  for (auto [l, m] : kStates)
    for (double th : {0.4, 1.3})
      for (double p : {0.3, 1.2}) {
        double k0, k1;
        bessel_k01(2 * p, k0, k1);
        double mean[2] = {0, 0}, c1[2] = {0, 0};
        for (std::size_t j = 0; j < ar.size(); ++j) {
          const double v[2] = {rotor_smooth_polar(l, m, th, p, ar.x[j], RotorForm::derived, k0, k1),
                               rotor_smooth_polar(l, m, th, p, ar.x[j], RotorForm::raw, k0, k1)};
          for (int k = 0; k < 2; ++k) {
            mean[k] += v[k] / ar.size();
            c1[k] += 2 * v[k] * std::cos(ar.x[j]) / ar.size();
          }
        }
        CHECK(std::abs(mean[0] - mean[1]) < 1e-14);
        CHECK(std::abs(c1[0] - c1[1]) < 1e-14);
      }
}

TEST_CASE("full closed form against a Cartesian-grid transform") {
  for (auto [l, m] : {std::pair{1, 0}, {1, 1}, {2, 1}, {2, -2}}) {
    const double th = 1.1, ph = 0.4, eta = 0.05;
    const RotorWignerOracle oracle = RotorWignerOracle::for_harmonic(l, m, th, ph);
    for (auto [p, a] : {std::pair{0.8, 0.5}, {1.7, 2.6}}) {
      const double grid = damped_transform_grid(l, m, th, ph, p * std::sin(a), p * std::cos(a), eta);
      CHECK(oracle.regularized_density(p, a, eta) == doctest::Approx(grid).epsilon(1e-8));
      const auto v = oracle.density(p, a);
      const double closed = rotor_smooth(l, m, {th, ph, p * std::sin(a), p * std::cos(a)}, RotorForm::raw);
      CHECK(std::abs(v.value - closed) < 1e-7);
      CHECK(std::abs(v.imag) < 1e-12);
    }
  }
}

TEST_CASE("delta weights") {
  for (auto [l, m] : kStates)
    for (double th : {0.0, 0.5, 1.2, kPi / 2, 2.7}) {
      // average over directions w in the tangent plane of conj(Y(w)) Y(-w)
      const LocalFrame f = local_frame(th, 0.9);
      double s = 0;
      const int N = 64;
      for (int k = 0; k < N; ++k) {
        const double b = 2 * kPi * k / N;
        const Vec3 w = std::sin(b) * f.theta_hat + std::cos(b) * f.phi_hat;
        s += (std::conj(Y(l, m, w)) * Y(l, m, -w)).real() / N;
      }
      CHECK(rotor_delta_weight(l, m, th) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("smooth parts depend only on p^2 and p_phi sin(theta)") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(0, 1);
  for (auto [l, m] : kStates) {
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const AngularPhasePoint a = random_point(rng);
      const double p = std::hypot(a.p_theta, a.p_phi), lz = a.p_phi * std::sin(a.theta);
      double th = 0;
      do th = 0.05 + (kPi - 0.1) * U(rng);
      while (std::abs(lz / std::sin(th)) > p);
      const double pf = lz / std::sin(th), pt = (U(rng) < 0.5 ? -1 : 1) * std::sqrt(p * p - pf * pf);
      const AngularPhasePoint b{th, 2 * kPi * U(rng), pt, pf};
      worst = std::max(worst, std::abs(rotor_smooth(l, m, a) - rotor_smooth(l, m, b)));
      const RotorInvariants ia = rotor_invariants(a), ib = rotor_invariants(b);
      CHECK(ia.p2 == doctest::Approx(ib.p2));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("transport residual") {
  std::mt19937_64 rng(43);
  for (auto [l, m] : kStates) {
    double stationary = 0, full = 0;
    for (int k = 0; k < 30; ++k) {
      const AngularPhasePoint a = random_point(rng);
      auto d = [l = l, m = m](const AngularPhasePoint& x) { return rotor_smooth(l, m, x); };
      auto r = [l = l, m = m](const AngularPhasePoint& x) { return rotor_smooth(l, m, x, RotorForm::raw); };
      stationary = std::max(stationary, std::abs(liouville_rhs(numeric_gradient(d, a), a)));
      full = std::max(full, std::abs(liouville_rhs(numeric_gradient(r, a), a)));
    }
    CHECK(stationary < 1e-8);
    if (l > 0) CHECK(full > 1e-4);  // the full transform carries non-stationary pieces
  }
}

TEST_CASE("characteristics") {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 50; ++k) {
    const AngularPhasePoint a = random_point(rng);
    const double t = 0.3 + 2 * k / 50.0;
    const AngularPhasePoint e = characteristics_evolve(a, t), r = characteristics_evolve_rk4(a, t, 1e-3);
    const RotorInvariants i0 = rotor_invariants(a), i1 = rotor_invariants(e);
    CHECK(i1.p2 == doctest::Approx(i0.p2).epsilon(1e-12));
    CHECK(i1.lz == doctest::Approx(i0.lz).epsilon(1e-10));
    // RK4 is compared only on paths that keep clear of the poles: min sin(theta) = |Lz| / p.
    if (std::abs(i0.lz) > 0.2 * std::sqrt(i0.p2)) {
      CHECK(e.theta == doctest::Approx(r.theta).epsilon(1e-7));
      CHECK(e.p_theta == doctest::Approx(r.p_theta).epsilon(1e-6));
    }
    for (auto [l, m] : {std::pair{1, 1}, {2, 0}, {2, 1}})
      CHECK(rotor_smooth(l, m, e) == doctest::Approx(rotor_smooth(l, m, a)).epsilon(1e-11));
  }
  const AngularPhasePoint rest{0.4, 1.0, 0, 0};
  CHECK(characteristics_evolve(rest, 5).theta == rest.theta);
}

TEST_CASE("Cartesian momentum moment of (2,0)") {
  const PxSquaredResult px = px_squared_moment();
  CHECK(px.value == doctest::Approx(11.0 / 7).epsilon(1e-10));
  CHECK(px.py_squared == doctest::Approx(11.0 / 7).epsilon(1e-10));
  CHECK(px.rel_change < 1e-8);
  CHECK(px_squared_printed() == doctest::Approx(22 * kPi / 7));
}

TEST_CASE("stationarity functional for spherical harmonics") {
  for (auto [l, m] : {std::pair{1, 0}, {1, 1}, {2, 1}, {2, 2}}) {
    double last = 0;
    for (double q : {0.0, 0.01, 0.1, 0.5}) {
      const StationarityResidual s = stationarity_residual(l, m, 0.8, 0.3, 0.6 * q, 0.8 * q);
      CHECK(std::abs(s.f1) < 1e-6);
      if (q == 0) CHECK(std::abs(s.f2) < 1e-12);
      CHECK(std::abs(s.f2) >= last);
      last = std::abs(s.f2);
    }
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(rotor_smooth(1, 0, {0.5, 0.1, 0, 0}), DomainError);
  CHECK(rotor_smooth(0, 0, {0.5, 0.1, 0, 0}) == 0);
  CHECK_THROWS_AS(rotor_moments(3, 0), UnsupportedState);
  CHECK_THROWS_AS(rotor_delta_weight(1, 2, 0.3), UnsupportedState);
  CHECK_THROWS_AS(liouville_rhs({}, {0, 0, 1, 1}), DomainError);
}
