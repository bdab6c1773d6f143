#pragma once

#include <string>
#include <utility>
#include <vector>

#include "psd/coords.hpp"
#include "psd/report.hpp"
#include "psd/specfun.hpp"
#include "psd/wigner.hpp"

namespace psd {

struct QuantumLabel {
  int n = 0, l = 0, mu = 0;
  friend bool operator==(const QuantumLabel&, const QuantumLabel&) = default;
};
std::string to_string(const QuantumLabel& q);

struct OscInvariants {
  double E = 0, Ez = 0, L2 = 0, Lz = 0;
};
OscInvariants invariants(const Vec3& r, const Vec3& p);

// coef * E^e * Ez^ez * L2^l2 * Lz^lz
struct Monomial {
  double coef;
  int e, ez, l2, lz;
};

// Tabulated states with mu >= 0. Negative mu is served by Lz -> -Lz.
const std::vector<QuantumLabel>& covered_labels();
bool is_covered(const QuantumLabel& q);

// Polynomial P with rho = P(E, Ez, L2, Lz) exp(-E) / pi^3.
const std::vector<Monomial>& table_row(const QuantumLabel& q);
double table_polynomial(const QuantumLabel& q, const OscInvariants& inv);

double density(const QuantumLabel& q, const Vec3& r, const Vec3& p);

// psi = Y_{l,mu}(x,y,z) R(r) with R normalized against r^(2l+2).
RadialFunction oscillator_radial(const QuantumLabel& q);
WaveFunction3D oscillator_wavefunction(const QuantumLabel& q);

// Product Gauss-Hermite, `order` nodes per axis (12 is exact for every table row).
MomentReport moments(const QuantumLabel& q, int order = 12);

// -int r^3 R R' dr and (1/4) int r^2 R^2 dr for a normalized radial function.
double angular_l2_radial_integral(const RadialFunction& R);
double lz_half_average(const RadialFunction& R);

// Kinetic energy split for psi = R(r) Y_00: <p_Omega^2> = -int r R R' dr,
// <p_r^2> = int (r R R' + r^2 R'^2) dr.
double angular_kinetic_integral(const RadialFunction& R);
double radial_kinetic_integral(const RadialFunction& R);

// (r, p) -> (r cos t + p sin t, -r sin t + p cos t)
std::pair<Vec3, Vec3> classical_evolve(const Vec3& r, const Vec3& p, double t);

}  // namespace psd
