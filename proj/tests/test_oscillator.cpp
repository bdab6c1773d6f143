#include <doctest.h>

#include <cmath>
#include <random>

#include "psd/oscillator.hpp"

using namespace psd;

TEST_CASE("closed forms match the numerical transform") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> N(0, 0.9);
  for (QuantumLabel q : covered_labels()) {
    for (int sign : {1, -1}) {
      if (sign < 0 && q.mu == 0) continue;
      q.mu *= sign;
      const WaveFunction3D w = oscillator_wavefunction(q);
      for (int k = 0; k < 8; ++k) {
        const Vec3 r{N(rng), N(rng), N(rng)}, p{N(rng), N(rng), N(rng)};
        CHECK(std::abs(density(q, r, p) - wigner_density(w, r, p).value) < 1e-12);
      }
      q.mu *= sign;
    }
  }
}

TEST_CASE("table moments are exact under Gauss-Hermite") {
  for (const QuantumLabel& q : covered_labels()) {
    const MomentReport m = moments(q);
    CHECK(m.normalization == doctest::Approx(1).epsilon(1e-13));
    CHECK(m.lz == doctest::Approx(q.mu).epsilon(1e-12));
    CHECK(m.l2 == doctest::Approx(q.l * (q.l + 1) + 1.5).epsilon(1e-12));
    CHECK(m.extra.at("E") == doctest::Approx(2 * (2 * q.n + q.l + 1.5)).epsilon(1e-12));
    const MomentReport neg = moments({q.n, q.l, -q.mu});
    CHECK(neg.lz == doctest::Approx(-q.mu).epsilon(1e-12));
  }
}

TEST_CASE("densities are invariant under the oscillator flow") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> T(-10, 10);
  for (const QuantumLabel& q : covered_labels()) {
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      const Vec3 r{N(rng), N(rng), N(rng)}, p{N(rng), N(rng), N(rng)};
      const auto [r2, p2] = classical_evolve(r, p, T(rng));
      worst = std::max(worst, std::abs(density(q, r2, p2) - density(q, r, p)));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("invariants") {
  const Vec3 r{1, 2, 3}, p{-1, 0.5, 2};
  const OscInvariants inv = invariants(r, p);
  CHECK(inv.E == doctest::Approx(14 + 5.25));
  CHECK(inv.Ez == doctest::Approx(9 + 4));
  CHECK(inv.Lz == doctest::Approx(1 * 0.5 - 2 * -1));
  const Vec3 L = cross(r, p);
  CHECK(inv.L2 == doctest::Approx(dot(L, L)));
}

TEST_CASE("angular offsets do not depend on the radial function") {
  const RadialFunction a = radial_oscillator(0, 2), b = radial_oscillator(1, 0);
  const RadialFunction c = normalized_radial([](double x) { return x * x * std::exp(-0.7 * x); }, {}, 60);
  for (const RadialFunction* R : {&a, &b, &c}) {
    CHECK(angular_l2_radial_integral(*R) == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(lz_half_average(*R) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("kinetic energy splits into angular and radial parts") {
  for (int n : {0, 1}) {
    const RadialFunction R = radial_oscillator(n, 0);
    WaveFunction3D w;
    w.psi = [R](double x, double y, double z) { return R(std::sqrt(x * x + y * y + z * z)) / std::sqrt(4 * M_PI); };
    w.gaussian_prefactor = 0.5;
    const double p2 = wigner_moments(w).p2;
    CHECK(angular_kinetic_integral(R) + radial_kinetic_integral(R) == doctest::Approx(p2).epsilon(1e-8));
    CHECK(p2 == doctest::Approx(2 * n + 1.5).epsilon(1e-8));
  }
  CHECK(angular_kinetic_integral(radial_oscillator(0, 0)) == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("coverage") {
  CHECK(covered_labels().size() == 9);
  CHECK(is_covered({0, 2, -2}));
  CHECK_FALSE(is_covered({1, 2, 0}));
  CHECK_THROWS_AS(table_row({2, 0, 0}), UnsupportedState);
  CHECK_THROWS_AS(oscillator_wavefunction({0, 3, 0}), UnsupportedState);
}
