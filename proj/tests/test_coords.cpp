#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "psd/coords.hpp"

using namespace psd;

namespace {

double angle_gap(double a, double b) {
  const double d = std::remainder(a - b, 2 * std::numbers::pi);
  return std::abs(d);
}

}  // namespace

TEST_CASE("local frame is orthonormal with theta_hat toward decreasing theta") {
  for (double th : {0.2, 1.0, 2.9})
    for (double ph : {0.0, 1.3, 5.0}) {
      const LocalFrame f = local_frame(th, ph);
      CHECK(dot(f.r_hat, f.r_hat) == doctest::Approx(1));
      CHECK(dot(f.theta_hat, f.theta_hat) == doctest::Approx(1));
      CHECK(dot(f.phi_hat, f.phi_hat) == doctest::Approx(1));
      CHECK(std::abs(dot(f.r_hat, f.theta_hat)) < 1e-15);
      CHECK(std::abs(dot(f.r_hat, f.phi_hat)) < 1e-15);
      CHECK(std::abs(dot(f.theta_hat, f.phi_hat)) < 1e-15);
      // d r_hat / d theta = -theta_hat
      const double h = 1e-6;
      const Vec3 d = (1 / (2 * h)) * (to_cartesian({1, th + h, ph}) - to_cartesian({1, th - h, ph}));
      CHECK(norm(d + f.theta_hat) < 1e-9);
      CHECK(norm(cross(f.theta_hat, f.phi_hat) + f.r_hat) < 1e-15);
    }
}

TEST_CASE("Cartesian and spherical round trips") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int k = 0; k < 200; ++k) {
    const Vec3 v{N(rng), N(rng), N(rng)};
    const Spherical s = to_spherical(v);
    CHECK(s.phi >= 0);
    CHECK(s.phi < 2 * std::numbers::pi);
    CHECK(norm(to_cartesian(s) - v) < 1e-14);
    const Vec3 p{N(rng), N(rng), N(rng)};
    const PhasePoint pt = phase_point_from_cartesian(v, p);
    CHECK(norm(momentum_cartesian(pt) - p) < 1e-14);
    CHECK(cartesian_px_from_radius_components(pt) == doctest::Approx(p.x));
  }
  CHECK(to_spherical({0, 0, 0}).r == 0);
  CHECK(near_pole(0));
  CHECK(near_pole(std::numbers::pi));
  CHECK_FALSE(near_pole(0.01));
}

TEST_CASE("shifted angles agree with the Cartesian construction") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 300; ++k) {
    const Spherical pt{1 + 0.5 * U(rng), 1.5 + 1.4 * U(rng), 3 + 3 * U(rng)};
    const Vec3 q{0.4 * U(rng), 2 * U(rng), 2 * U(rng)};
    const LocalFrame f = local_frame(pt.theta, pt.phi);
    const Vec3 shift = q.x * f.r_hat + q.y * f.theta_hat + q.z * f.phi_hat;
    const Spherical plus = to_spherical(to_cartesian(pt) + shift), minus = to_spherical(to_cartesian(pt) - shift);
    const ShiftedAngles s = shifted_coords(pt, q);
    CHECK(s.r_plus == doctest::Approx(plus.r));
    CHECK(s.theta_plus == doctest::Approx(plus.theta));
    CHECK(angle_gap(s.phi_plus, plus.phi) < 1e-12);
    CHECK(s.r_minus == doctest::Approx(minus.r));
    CHECK(s.theta_minus == doctest::Approx(minus.theta));
    CHECK(angle_gap(s.phi_minus, minus.phi) < 1e-12);
    CHECK_FALSE(s.degenerate);
  }
  CHECK(shifted_coords({1, 0.5, 0.2}, {1, 0, 0}).degenerate);
}

TEST_CASE("momentum components along the local frame") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 100; ++k) {
    const double th = std::numbers::pi * U(rng), ph = 2 * std::numbers::pi * U(rng);
    const MomentumSpherical p{0.3 + 2 * U(rng), std::numbers::pi * U(rng), 2 * std::numbers::pi * U(rng)};
    const Vec3 pv = to_cartesian({p.p, p.theta_p, p.phi_p});
    const LocalFrame f = local_frame(th, ph);
    const RadiusComponents c = momentum_to_radius_components(p, th, ph);
    CHECK(c.p_r == doctest::Approx(dot(pv, f.r_hat)));
    CHECK(c.p_theta == doctest::Approx(dot(pv, f.theta_hat)));
    CHECK(c.p_phi == doctest::Approx(dot(pv, f.phi_hat)));
    // With p_r = 0 the bracket is -p_x.
    const double pt = U(rng) - 0.5, pf = U(rng) - 0.5;
    CHECK(px_bracket(th, ph, pt, pf) == doctest::Approx(-cartesian_px_from_radius_components({1, th, ph, 0, pt, pf})));
  }
}
