#include "psd/wigner.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "psd/parallel.hpp"
#include "psd/quadrature.hpp"

namespace psd {

namespace {

constexpr double kPi = std::numbers::pi;

// One axis of the q-rule. Weights already include exp(+2 alpha q^2) on the GH path,
// so the sum is plain sum_i w_i f(q_i).
Rule q_axis_rule(const WaveFunction3D& psi, const QuadratureConfig& cfg, double pmax) {
  if (psi.gaussian_prefactor > 0) {
    // The envelope is exp(-2 alpha q^2) and the phase exp(2i p q); the exact integral
    // falls off like exp(-p^2/(2 alpha)), so the node count needed grows with |p|.
    const int n = std::max(cfg.nodes_per_axis, 24 + int(std::ceil(8 * pmax / std::sqrt(psi.gaussian_prefactor))));
    Rule g = gauss_hermite(n);
    const double s = 1 / std::sqrt(2 * psi.gaussian_prefactor);
    for (int i = 0; i < n; ++i) {
      g.w[i] *= s * std::exp(g.x[i] * g.x[i]);
      g.x[i] *= s;
    }
    return g;
  }
  const int n = std::max(32, 8 * int(std::ceil(pmax * cfg.q_cutoff)));
  return gauss_legendre(std::max(n, cfg.nodes_per_axis), -cfg.q_cutoff, cfg.q_cutoff);
}

double max_abs(const Vec3& v) { return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)}); }

}  // namespace

WignerValue wigner_density(const WaveFunction3D& psi, const Vec3& r, const Vec3& p,
                           const QuadratureConfig& cfg) {
  const Rule q = q_axis_rule(psi, cfg, max_abs(p));
  const int n = int(q.size());
  std::vector<cplx> ex(n), ey(n), ez(n);
  for (int i = 0; i < n; ++i) {
    ex[i] = std::polar(q.w[i], 2 * p.x * q.x[i]);
    ey[i] = std::polar(q.w[i], 2 * p.y * q.x[i]);
    ez[i] = std::polar(q.w[i], 2 * p.z * q.x[i]);
  }
  std::vector<double> re(n), im(n);
  std::vector<double> re2(n), im2(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx acc = 0;
      for (int k = 0; k < n; ++k) {
        const double qx = q.x[i], qy = q.x[j], qz = q.x[k];
        const cplx g = std::conj(psi.psi(r.x + qx, r.y + qy, r.z + qz)) * psi.psi(r.x - qx, r.y - qy, r.z - qz);
        acc += ez[k] * g;
      }
      acc *= ey[j];
      re2[j] = acc.real();
      im2[j] = acc.imag();
    }
    const cplx s = ex[i] * cplx(pairwise_sum(re2), pairwise_sum(im2));
    re[i] = s.real();
    im[i] = s.imag();
  }
  WignerValue out;
  out.value = pairwise_sum(re) / (kPi * kPi * kPi);
  out.imag_residue = pairwise_sum(im) / (kPi * kPi * kPi);
  out.nodes_per_axis = n;
  if (!(std::abs(out.imag_residue) <= cfg.tolerance))
    throw NumericError("wigner_density: imaginary residue " + std::to_string(out.imag_residue) +
                       " exceeds tolerance with " + std::to_string(n) + " nodes per axis");
  return out;
}

std::vector<WignerValue> wigner_density_batch(const WaveFunction3D& psi,
                                              const std::vector<PhaseSample>& points,
                                              const QuadratureConfig& cfg, unsigned threads) {
  std::vector<WignerValue> out(points.size());
  parallel_for(
      points.size(), [&](std::size_t i) { out[i] = wigner_density(psi, points[i].r, points[i].p, cfg); },
      threads);
  return out;
}

double marginal_position(const WaveFunction3D& psi, const Vec3& r, const QuadratureConfig& cfg) {
  // p on a Gauss-Hermite grid; exchanging the p and q sums turns the p sum into a
  // separable kernel k(q_x) k(q_y) k(q_z).
  const double alpha = psi.gaussian_prefactor > 0 ? psi.gaussian_prefactor : 0.5;
  Rule gp = gauss_hermite(cfg.p_nodes_per_axis);
  const double sp = std::sqrt(2 * alpha);  // rho decays like exp(-p^2 / (2 alpha))
  for (std::size_t i = 0; i < gp.size(); ++i) {
    gp.w[i] *= sp * std::exp(gp.x[i] * gp.x[i]);
    gp.x[i] *= sp;
  }
  const Rule q = q_axis_rule(psi, cfg, gp.x.back());
  const int n = int(q.size());
  std::vector<double> k(n);
  for (int i = 0; i < n; ++i) {
    cplx s = 0;
    for (std::size_t j = 0; j < gp.size(); ++j) s += gp.w[j] * std::polar(1.0, 2 * gp.x[j] * q.x[i]);
    k[i] = s.real() * q.w[i];  // the imaginary part cancels between +p and -p nodes
  }
  std::vector<double> acc(std::size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int l = 0; l < n; ++l) {
        const double qx = q.x[i], qy = q.x[j], qz = q.x[l];
        const cplx g = std::conj(psi.psi(r.x + qx, r.y + qy, r.z + qz)) * psi.psi(r.x - qx, r.y - qy, r.z - qz);
        s += k[l] * g.real();
      }
      acc[std::size_t(i) * n + j] = k[i] * k[j] * s;
    }
  return pairwise_sum(acc) / (kPi * kPi * kPi);
}

double marginal_momentum(const WaveFunction3D& psi, const Vec3& p, const QuadratureConfig& cfg) {
  Rule v;
  if (psi.gaussian_prefactor > 0) {
    const int n = std::max(cfg.nodes_per_axis,
                           24 + int(std::ceil(8 * max_abs(p) / std::sqrt(psi.gaussian_prefactor))));
    v = gauss_hermite(n);
    const double s = 1 / std::sqrt(psi.gaussian_prefactor);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v.w[i] *= s * std::exp(v.x[i] * v.x[i]);
      v.x[i] *= s;
    }
  } else {
    const double R = psi.decay_radius;
    v = gauss_legendre(std::max({32, cfg.nodes_per_axis, 8 * int(std::ceil(max_abs(p) * R))}), -R, R);
  }
  const int n = int(v.size());
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    cplx si = 0;
    for (int j = 0; j < n; ++j) {
      cplx sj = 0;
      for (int k = 0; k < n; ++k)
        sj += v.w[k] * std::polar(1.0, -p.z * v.x[k]) * psi.psi(v.x[i], v.x[j], v.x[k]);
      si += v.w[j] * std::polar(1.0, -p.y * v.x[j]) * sj;
    }
    si *= v.w[i] * std::polar(1.0, -p.x * v.x[i]);
    re[i] = si.real();
    im[i] = si.imag();
  }
  const cplx phi = cplx(pairwise_sum(re), pairwise_sum(im)) / std::pow(2 * kPi, 1.5);
  return std::norm(phi);
}

cplx momentum_wavefunction(const RadialFunction& R, int l, int m, const MomentumSpherical& p) {
  if (!(p.p > 0)) throw DomainError("momentum_wavefunction: p must be > 0");
  const double tail = std::abs(R.r_max * R.r_max * R(R.r_max));
  if (tail > 1e-10)
    throw NumericError("momentum_wavefunction: radial function not decayed at r_max (" +
                       std::to_string(tail) + ")");
  using boost::math::quadrature::gauss_kronrod;
  double err = 0;
  // Split at multiples of the Bessel period so each piece has a few oscillations.
  const int pieces = 1 + int(p.p * R.r_max / (4 * kPi));
  double radial = 0;
  for (int k = 0; k < pieces; ++k) {
    const double a = R.r_max * k / pieces, b = R.r_max * (k + 1) / pieces;
    double e = 0;
    radial += gauss_kronrod<double, 31>::integrate(
        [&](double r) { return r > 0 ? r * r * R(r) * spherical_bessel_j(l, p.p * r) : 0.0; }, a, b, 15,
        1e-13, &e);
    err += e;
  }
  if (err > 1e-9 * std::max(1.0, std::abs(radial)))
    throw NumericError("momentum_wavefunction: Hankel integral error estimate " + std::to_string(err));
  cplx phase = 1;
  for (int k = 0; k < l; ++k) phase *= cplx(0, -1);
  return phase * std::sqrt(2 / kPi) * radial * spherical_harmonic(l, m, p.theta_p, p.phi_p);
}

WignerMoments wigner_moments(const WaveFunction3D& psi, int r_nodes_per_axis) {
  Rule g;
  if (psi.gaussian_prefactor > 0) {
    g = gauss_hermite(r_nodes_per_axis);
    const double s = 1 / std::sqrt(2 * psi.gaussian_prefactor);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.w[i] *= s * std::exp(g.x[i] * g.x[i]);
      g.x[i] *= s;
    }
  } else {
    g = gauss_legendre(r_nodes_per_axis, -psi.decay_radius, psi.decay_radius);
  }
  const int n = int(g.size());
  const double h = 2e-3;
  // Directions for second derivatives: three axes, then the three sums e_a + e_b.
  const std::array<Vec3, 6> dirs = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1},
                                    Vec3{1, 1, 0}, Vec3{1, 0, 1}, Vec3{0, 1, 1}};
  std::vector<double> c_norm(n * n * n), c_lz(n * n * n), c_l2(n * n * n), c_r2(n * n * n), c_p2(n * n * n);
  parallel_for(std::size_t(n) * n * n, [&](std::size_t idx) {
    const int i = int(idx / (n * n)), j = int(idx / n % n), k = int(idx % n);
    const Vec3 r{g.x[i], g.x[j], g.x[k]};
    const double w = g.w[i] * g.w[j] * g.w[k];
    auto gq = [&](const Vec3& q) { return std::conj(psi.psi(r.x + q.x, r.y + q.y, r.z + q.z)) *
                                          psi.psi(r.x - q.x, r.y - q.y, r.z - q.z); };
    const cplx g0 = gq({0, 0, 0});
    std::array<cplx, 6> d1{}, d2{};
    for (int d = 0; d < 6; ++d) {
      const cplx fp1 = gq(h * dirs[d]), fm1 = gq(-h * dirs[d]);
      const cplx fp2 = gq(2 * h * dirs[d]), fm2 = gq(-2 * h * dirs[d]);
      d1[d] = (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12 * h);
      d2[d] = (-(fp2 + fm2) + 16.0 * (fp1 + fm1) - 30.0 * g0) / (12 * h * h);
    }
    // <p_a> density and <p_a p_b> density at r
    double pa[3], pab[3][3];
    for (int a = 0; a < 3; ++a) {
      pa[a] = (cplx(0, 0.5) * d1[a]).real();
      pab[a][a] = -0.25 * d2[a].real();
    }
    const int pairs[3][3] = {{0, 1, 3}, {0, 2, 4}, {1, 2, 5}};
    for (const auto& pr : pairs) {
      const double mixed = 0.5 * (d2[pr[2]] - d2[pr[0]] - d2[pr[1]]).real();
      pab[pr[0]][pr[1]] = pab[pr[1]][pr[0]] = -0.25 * mixed;
    }
    const double x[3] = {r.x, r.y, r.z};
    const double rr = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    double l2 = 0, p2 = 0;
    for (int a = 0; a < 3; ++a) {
      p2 += pab[a][a];
      for (int b = 0; b < 3; ++b) l2 += ((a == b ? rr : 0.0) - x[a] * x[b]) * pab[a][b];
    }
    c_norm[idx] = w * g0.real();
    c_lz[idx] = w * (x[0] * pa[1] - x[1] * pa[0]);
    c_l2[idx] = w * l2;
    c_r2[idx] = w * rr * g0.real();
    c_p2[idx] = w * p2;
  });
  return {pairwise_sum(c_norm), pairwise_sum(c_lz), pairwise_sum(c_l2), pairwise_sum(c_r2), pairwise_sum(c_p2)};
}

}  // namespace psd
