#pragma once

#include <array>
#include <functional>
#include <vector>

#include "psd/coords.hpp"
#include "psd/report.hpp"
#include "psd/specfun.hpp"

namespace psd {

// Reduced rotor phase space with r = 1. Polar momentum: p_theta = p sin(alpha),
// p_phi = p cos(alpha); u = p_phi sin(theta) / p.

// p^a K_nu(2p) sum_j c_j u^j, all over pi^2.
struct InvariantTerm {
  int p_power;
  int bessel;
  std::array<double, 5> c;
};

// p^a K_nu(2p) cos(n alpha) sum_k c_k sin(theta)^k, all over pi^2.
struct RawTerm {
  int p_power;
  int bessel;
  int harmonic;
  std::array<double, 5> c;
};

enum class RotorForm {
  derived,      // stationary projection onto (p, u); default
  transcribed,  // closed forms exactly as printed, including suspected slips
  raw,          // full transform, including the non-stationary pieces
};

bool rotor_state_supported(int l, int m);  // l <= 2, |m| <= l

// Term tables for m >= 0; negative m uses u -> -u (alpha -> alpha + pi).
const std::vector<InvariantTerm>& rotor_invariant_terms(int l, int m, RotorForm form);
const std::vector<RawTerm>& rotor_raw_terms(int l, int m);

struct RotorInvariants {
  double p2 = 0, lz = 0;
};
RotorInvariants rotor_invariants(const AngularPhasePoint& pt);

struct RotorDensityValue {
  double smooth = 0;
  double delta_weight = 0;  // coefficient of delta(p_theta) delta(p_phi)
};

double rotor_smooth(int l, int m, const AngularPhasePoint& pt, RotorForm form = RotorForm::derived);
double rotor_delta_weight(int l, int m, double theta);
RotorDensityValue rotor_density(int l, int m, const AngularPhasePoint& pt, RotorForm form = RotorForm::derived);

// Smooth part as a function of (theta, p, alpha); K0/K1 may be passed in when the
// caller evaluates many points at one p.
double rotor_smooth_polar(int l, int m, double theta, double p, double alpha, RotorForm form,
                          double k0, double k1);

struct RotorGradient {
  double d_theta = 0, d_phi = 0, d_p_theta = 0, d_p_phi = 0;
};

// d rho / dt implied by the transport terms of the rotor Liouville equation.
double liouville_rhs(const RotorGradient& g, const AngularPhasePoint& pt, double m = 1, double r = 1);

// Central-difference gradient of an arbitrary density.
RotorGradient numeric_gradient(const std::function<double(const AngularPhasePoint&)>& rho,
                               const AngularPhasePoint& pt, double h = 1e-5);

// Free motion on the sphere: exact great-circle rotation, and RK4 on the characteristic ODEs.
AngularPhasePoint characteristics_evolve(const AngularPhasePoint& pt, double t, double m = 1, double r = 1);
AngularPhasePoint characteristics_evolve_rk4(const AngularPhasePoint& pt, double t, double dt, double m = 1,
                                             double r = 1);

// Moments with the delta part added analytically.
struct RotorMomentOptions {
  int theta_nodes = 32;
  int alpha_nodes = 32;
  int p_nodes_per_panel = 16;
};
MomentReport rotor_moments(int l, int m, RotorForm form = RotorForm::derived, const RotorMomentOptions& opt = {});
double rotor_marginal(int l, int m, double theta, double phi, RotorForm form = RotorForm::derived,
                      const RotorMomentOptions& opt = {});

// <p_x^2> for (2,0) with p_r = 0.
struct PxSquaredResult {
  double value = 0;        // finer of the two resolutions
  double coarse = 0;
  double rel_change = 0;   // |fine - coarse| / fine
  double py_squared = 0;   // same integral with x -> y
};
PxSquaredResult px_squared_moment(RotorForm form = RotorForm::derived);
double px_squared_analytic();  // 11/7
double px_squared_printed();   // 22 pi / 7

// Numerical transform of an angular wavefunction:
// (1/pi^2) int d^2q exp(2i (p_theta q_theta + p_phi q_phi)) Theta*(theta+, phi+) Theta(theta-, phi-)
// at fixed (theta, phi), r = 1, q_r = 0. The q integral is regularized with exp(-eta q^2) and
// extrapolated to eta -> 0 over (eta0, eta0/2, eta0/4); valid away from p = 0 (p >= 0.5 for
// the default eta0). The distributional part at p = 0 is returned separately.
struct RotorOracleConfig {
  double eta0 = 4e-3;
  int harmonics = 5;      // Fourier modes |n| <= harmonics in the q angle
  int beta_nodes = 32;
  double panel = 0.25;
  int nodes_per_panel = 12;
};

class RotorWignerOracle {
 public:
  using AngularFunction = std::function<cplx(double, double)>;
  RotorWignerOracle(AngularFunction theta_fn, double theta, double phi, const RotorOracleConfig& cfg = {});
  static RotorWignerOracle for_harmonic(int l, int m, double theta, double phi, const RotorOracleConfig& cfg = {});

  struct Value {
    double value = 0;
    double error = 0;  // Richardson difference
    double imag = 0;
  };
  Value density(double p, double alpha) const;
  double regularized_density(double p, double alpha, double eta) const;
  // alpha-mean and cos(alpha) coefficient of the density at p
  std::pair<double, double> harmonics(double p) const;
  double delta_weight() const;

 private:
  std::vector<cplx> mode_integrals(double p, double eta) const;
  RotorOracleConfig cfg_;
  std::vector<double> q_, wq_;
  std::vector<std::vector<cplx>> hhat_;  // [n + N][q index]
  double delta_ = 0;
};

// Stationarity functional integrand pieces for Theta = Y_lm at (theta, phi) and shift q.
// f1 vanishes identically for spherical harmonics; f2 vanishes as q -> 0.
struct StationarityResidual {
  cplx f1, f2;
};
StationarityResidual stationarity_residual(int l, int m, double theta, double phi, double q_theta, double q_phi,
                                           double r = 1);

}  // namespace psd
