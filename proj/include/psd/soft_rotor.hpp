#pragma once

#include <string>
#include <vector>

#include "psd/coords.hpp"
#include "psd/report.hpp"

namespace psd {

struct SoftRotorParams {
  double a = 0.05;  // radial width
  double r0 = 1;    // bond length
  double m = 1;     // reduced mass
};

// Throws DomainError for non-positive parameters; returns warnings (a/r0 > 0.2).
std::vector<std::string> validate(const SoftRotorParams& prm);

// F(s) = int_0^inf q J0(s q) exp(-q^4) dq, with F1 = F'(s)/s and F2 = F''(s).
// Tabulated on [0, 60]; |F| < 1e-16 beyond 40, so larger s returns 0.
double kernel_F(double s);
double kernel_F1(double s);
double kernel_F2(double s);
constexpr double kSoftKernelSMax = 60;

// Same integrals by adaptive Gauss-Kronrod, no tables.
double kernel_F_direct(double s);
double kernel_F1_direct(double s);
double kernel_F2_direct(double s);

enum class SoftSign {
  derived,      // first-derivative term of the (1, +-1) density carries -+ (sin t / r0) d/dp_phi
  transcribed,  // the opposite sign, as printed for m = +1
};

// Leading-order angular density for (l, m) in {(0,0), (1,0), (1,+-1)}.
double soft_angular_density(int l, int m, const SoftRotorParams& prm, const AngularPhasePoint& pt,
                            SoftSign sign = SoftSign::derived);

// Full two-dimensional q integral of the factorized density, no expansion in a/r0.
struct SoftSlowConfig {
  int radial_nodes = 96;
  int angular_nodes = 64;
};
double soft_angular_density_full(int l, int m, const SoftRotorParams& prm, const AngularPhasePoint& pt,
                                 const SoftSlowConfig& cfg = {});

// int d^2p of the density and r0^2 <p^2>, r0 <p_phi sin(theta)> over the sphere.
double soft_momentum_marginal(int l, int m, const SoftRotorParams& prm, double theta, double phi,
                              SoftSign sign = SoftSign::derived);
MomentReport soft_moments(int l, int m, const SoftRotorParams& prm, SoftSign sign = SoftSign::derived);

// Relaxation time m r0 sqrt(2 a r0).
double soft_relaxation_time(const SoftRotorParams& prm);

// h'(u) = int_0^{pi/2} sin(b) exp(-u^4 sin^4 b) (1 - 4 u^4 sin^4 b) db, h'(0) = 1.
enum class RelaxationRoute { angle_integral, kernel_cosine };
double relaxation_profile(double u, RelaxationRoute route = RelaxationRoute::angle_integral);

// Momentum-integrated (1,0) marginal after the free-rotation substitution
// cos(theta) -> cos(theta) cos(t p / m r0) + (p_theta / p) sin(theta) sin(t p / m r0),
// integrated over (p, alpha) numerically.
double marginal_relaxation(const SoftRotorParams& prm, double theta, double t);

// Closed form of the same quantity: (3/4pi) [(1 + X)/4 + (3X - 1)/4 h'(t / tau)], X = cos^2.
double marginal_relaxation_closed(const SoftRotorParams& prm, double theta, double t);

struct Figure1Row {
  double p, density;
};
std::vector<Figure1Row> figure1_grid(const SoftRotorParams& prm, double p_max, int points);

}  // namespace psd
