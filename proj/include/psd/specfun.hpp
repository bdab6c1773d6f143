#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace psd {

using cplx = std::complex<double>;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedState : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Y_lm with Condon-Shortley phase.
cplx spherical_harmonic(int l, int m, double theta, double phi);

// Regular solid harmonic r^l Y_lm(r_hat), a homogeneous polynomial in (x,y,z).
cplx solid_harmonic(int l, int m, double x, double y, double z);

double hyp1f1(double a, double b, double z);

// K_0 or K_1 of real x > 0.
double bessel_k(int order, double x);
void bessel_k01(double x, double& k0, double& k1);

// j_l(x) and J_{l+1/2}(x) = sqrt(2x/pi) j_l(x), x > 0.
double spherical_bessel_j(int l, double x);
double bessel_j_half(int l, double x);

enum class RadialNorm {
  plain,  // int r^2 R^2 dr = 1
  solid,  // int r^(2l+2) R^2 dr = 1 (r^l carried by the solid harmonic)
};

struct RadialFunction {
  int n = 0;
  int l = 0;
  double normalization_constant = 1;
  double r_max = 12;  // integrals over [0, r_max] are treated as complete
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // may be empty

  double operator()(double r) const { return value(r); }
  double d(double r) const;  // analytic if available, else 4th-order central difference
};

// N r^l 1F1(-n, l+3/2; r^2) exp(-r^2/2); the solid norm drops r^l.
RadialFunction radial_oscillator(int n, int l, RadialNorm norm = RadialNorm::plain);

// Wraps f (and optionally f') and rescales so int r^2 R^2 dr = 1 on [0, r_max].
RadialFunction normalized_radial(std::function<double(double)> f, std::function<double(double)> df,
                                 double r_max);

}  // namespace psd
