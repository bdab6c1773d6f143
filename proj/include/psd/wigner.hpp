#pragma once

#include <functional>
#include <vector>

#include "psd/coords.hpp"
#include "psd/specfun.hpp"

namespace psd {

struct WaveFunction3D {
  std::function<cplx(double, double, double)> psi;
  double decay_radius = 8;
  // alpha > 0 when psi = polynomial * exp(-alpha r^2). Enables the Gauss-Hermite path.
  double gaussian_prefactor = 0;
};

struct QuadratureConfig {
  double q_cutoff = 8;
  int nodes_per_axis = 32;
  int p_nodes_per_axis = 12;  // Gauss-Hermite nodes for momentum-space integrals
  double tolerance = 1e-8;    // allowed imaginary residue
};

struct WignerValue {
  double value = 0;
  double imag_residue = 0;
  int nodes_per_axis = 0;
};

// (1/pi^3) int d^3q exp(2i p.q) psi*(r+q) psi(r-q)
WignerValue wigner_density(const WaveFunction3D& psi, const Vec3& r, const Vec3& p,
                           const QuadratureConfig& cfg = {});

struct PhaseSample {
  Vec3 r, p;
};
std::vector<WignerValue> wigner_density_batch(const WaveFunction3D& psi,
                                              const std::vector<PhaseSample>& points,
                                              const QuadratureConfig& cfg = {}, unsigned threads = 0);

// int d^3p rho(r, p), as a nested p and q quadrature of the transform above.
double marginal_position(const WaveFunction3D& psi, const Vec3& r, const QuadratureConfig& cfg = {});

// int d^3r rho(r, p). With u = r+q, v = r-q the r and q integrals factor into
// |(2 pi)^{-3/2} int psi(v) exp(-i p.v) d^3v|^2, which is evaluated directly.
double marginal_momentum(const WaveFunction3D& psi, const Vec3& p, const QuadratureConfig& cfg = {});

// (2 pi)^{-3/2} int psi(r) exp(-i p.r) d^3r for psi = R(r) Y_lm(r_hat):
// (-i)^l sqrt(2/pi) Y_lm(p_hat) int r^2 R(r) j_l(p r) dr, by adaptive Gauss-Kronrod.
cplx momentum_wavefunction(const RadialFunction& R, int l, int m, const MomentumSpherical& p);

// Phase-space moments of rho computed without ever forming rho: the p integrals
// reduce to derivatives of psi*(r+q) psi(r-q) at q = 0, taken by finite differences.
struct WignerMoments {
  double norm = 0;
  double lz = 0;
  double l2 = 0;
  double r2 = 0;
  double p2 = 0;
};
WignerMoments wigner_moments(const WaveFunction3D& psi, int r_nodes_per_axis = 16);

}  // namespace psd
