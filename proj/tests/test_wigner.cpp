#include <doctest.h>

#include <cmath>
#include <numbers>

#include "psd/oscillator.hpp"
#include "psd/quadrature.hpp"
#include "psd/wigner.hpp"

using namespace psd;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct 3D transform on a 96^3 Gauss-Legendre grid over [-6, 6]^3, no Hermite weighting.
double wigner_brute(const WaveFunction3D& w, const Vec3& r, const Vec3& p) {
  const Rule g = gauss_legendre(96, -6, 6);
  cplx s = 0;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b)
      for (std::size_t c = 0; c < g.size(); ++c) {
        const Vec3 q{g.x[a], g.x[b], g.x[c]};
        const cplx v = std::conj(w.psi(r.x + q.x, r.y + q.y, r.z + q.z)) * w.psi(r.x - q.x, r.y - q.y, r.z - q.z);
        s += g.w[a] * g.w[b] * g.w[c] * std::polar(1.0, 2 * dot(p, q)) * v;
      }
  return s.real() / (kPi * kPi * kPi);
}

}  // namespace

TEST_CASE("Gaussian ground state has the closed-form transform") {
  WaveFunction3D w;
  w.psi = [](double x, double y, double z) { return std::pow(kPi, -0.75) * std::exp(-(x * x + y * y + z * z) / 2); };
  w.gaussian_prefactor = 0.5;
  for (const Vec3& r : {Vec3{0, 0, 0}, Vec3{0.5, -1, 0.3}})
    for (const Vec3& p : {Vec3{0, 0, 0}, Vec3{1.2, 0.4, -0.7}}) {
      const double exact = std::exp(-dot(r, r) - dot(p, p)) / (kPi * kPi * kPi);
      CHECK(wigner_density(w, r, p).value == doctest::Approx(exact).epsilon(1e-12));
      w.gaussian_prefactor = 0;  // the general Legendre path
      CHECK(wigner_density(w, r, p).value == doctest::Approx(exact).epsilon(1e-6));
      QuadratureConfig fine;
      fine.nodes_per_axis = 64;
      CHECK(wigner_density(w, r, p, fine).value == doctest::Approx(exact).epsilon(1e-11));
      w.gaussian_prefactor = 0.5;
    }
}

TEST_CASE("transform of an excited state against a brute-force grid") {
  const WaveFunction3D w = oscillator_wavefunction({0, 2, 1});
  const Vec3 r{0.4, -0.3, 0.6}, p{-0.5, 0.8, 0.2};
  const double brute = wigner_brute(w, r, p);
  CHECK(wigner_density(w, r, p).value == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("marginals of the transform") {
  const QuantumLabel q{0, 1, 1};
  const WaveFunction3D w = oscillator_wavefunction(q);
  const Vec3 r{0.3, 0.5, -0.2};
  CHECK(marginal_position(w, r) == doctest::Approx(std::norm(w.psi(r.x, r.y, r.z))).epsilon(1e-9));
  // For the oscillator the momentum density has the same form as the position density.
  const Vec3 p{0.3, 0.5, -0.2};
  CHECK(marginal_momentum(w, p) == doctest::Approx(std::norm(w.psi(p.x, p.y, p.z))).epsilon(1e-9));
}

TEST_CASE("momentum wavefunction by Hankel transform") {
  // For the oscillator, phi(p) = (-i)^(2n + l) psi(p).
  for (const QuantumLabel& q : {QuantumLabel{0, 1, 1}, QuantumLabel{1, 1, 0}, QuantumLabel{0, 2, -1}}) {
    const RadialFunction plain = radial_oscillator(q.n, q.l, RadialNorm::plain);
    const MomentumSpherical p{1.1, 0.7, 2.2};
    const cplx phase = std::pow(cplx(0, -1), 2 * q.n + q.l);
    const cplx expected = phase * plain(p.p) * spherical_harmonic(q.l, q.mu, p.theta_p, p.phi_p);
    CHECK(std::abs(momentum_wavefunction(plain, q.l, q.mu, p) - expected) < 1e-10);
  }
  CHECK_THROWS_AS(momentum_wavefunction(radial_oscillator(0, 0), 0, 0, {0, 0, 0}), DomainError);
}

TEST_CASE("moments straight from the wavefunction") {
  const WignerMoments m = wigner_moments(oscillator_wavefunction({0, 1, -1}));
  CHECK(m.norm == doctest::Approx(1).epsilon(1e-9));
  CHECK(m.lz == doctest::Approx(-1).epsilon(1e-8));
  CHECK(m.l2 == doctest::Approx(3.5).epsilon(1e-8));
  CHECK(m.r2 == doctest::Approx(2.5).epsilon(1e-8));
  CHECK(m.p2 == doctest::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("batch evaluation matches single calls") {
  const WaveFunction3D w = oscillator_wavefunction({1, 0, 0});
  std::vector<PhaseSample> pts = {{{0.1, 0.2, 0.3}, {0.3, -0.1, 0}}, {{-1, 0, 0.5}, {0, 0.7, 0.7}}};
  const auto v = wigner_density_batch(w, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(v[i].value == wigner_density(w, pts[i].r, pts[i].p).value);
}
