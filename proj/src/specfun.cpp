#include "psd/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "psd/quadrature.hpp"

namespace psd {

namespace {

constexpr double kEuler = 0.57721566490153286061;

void check_lm(int l, int m) {
  if (l < 0 || std::abs(m) > l)
    throw DomainError("invalid (l,m) = (" + std::to_string(l) + "," + std::to_string(m) + ")");
}

}  // namespace

cplx solid_harmonic(int l, int m, double x, double y, double z) {
  check_lm(l, m);
  const int am = std::abs(m);
  const double r2 = x * x + y * y + z * z;
  double fac = 1;
  for (int k = 1; k <= am; ++k) fac *= (2.0 * k - 1) / (2.0 * k);
  double pmm = std::sqrt((2.0 * am + 1) / (4 * std::numbers::pi) * fac);
  if (am % 2) pmm = -pmm;
  double plm = pmm;
  if (l > am) {
    double p0 = pmm;
    double p1 = std::sqrt(2.0 * am + 3) * z * pmm;
    for (int ll = am + 2; ll <= l; ++ll) {
      const double a = std::sqrt((4.0 * ll * ll - 1) / (double(ll) * ll - double(am) * am));
      const double b = std::sqrt((double(ll - 1) * (ll - 1) - double(am) * am) /
                                 (4.0 * (ll - 1) * (ll - 1) - 1));
      const double p2 = a * (z * p1 - b * r2 * p0);
      p0 = p1;
      p1 = p2;
    }
    plm = p1;
  }
  cplx xy(1, 0);
  for (int k = 0; k < am; ++k) xy *= cplx(x, y);
  cplx s = plm * xy;
  if (m < 0) {
    s = std::conj(s);
    if (am % 2) s = -s;
  }
  return s;
}

cplx spherical_harmonic(int l, int m, double theta, double phi) {
  const double st = std::sin(theta);
  return solid_harmonic(l, m, st * std::cos(phi), st * std::sin(phi), std::cos(theta));
}

double hyp1f1(double a, double b, double z) {
  if (b <= 0 && b == std::floor(b))
    throw DomainError("hyp1f1: b is a non-positive integer");
  const bool terminating = a <= 0 && a == std::floor(a);
  const int kmax = terminating ? int(-a) : 100000;
  double sum = 1, comp = 0, term = 1;
  for (int k = 0; k < kmax; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (!terminating && std::abs(term) <= 1e-17 * std::abs(sum) && k > std::abs(z)) return sum;
  }
  if (!terminating)
    throw NumericError("hyp1f1: series did not converge for a=" + std::to_string(a) +
                       " b=" + std::to_string(b) + " z=" + std::to_string(z));
  return sum;
}

void bessel_k01(double x, double& k0, double& k1) {
  if (!(x > 0)) throw DomainError("bessel_k: x must be > 0");
  if (x <= 2) {
    const double t = 0.25 * x * x, lg = std::log(0.5 * x);
    double psi1 = -kEuler;       // psi(k+1)
    double psi2 = 1 - kEuler;    // psi(k+2)
    double a0 = 1;               // t^k / (k!)^2
    double a1 = 1;               // t^k / (k! (k+1)!)
    double i0 = 0, s0 = 0, i1 = 0, s1 = 0;
    for (int k = 0; k < 60; ++k) {
      i0 += a0;
      s0 += psi1 * a0;
      i1 += a1;
      s1 += (psi1 + psi2) * a1;
      if (a0 < 1e-18 * i0 && k > 2) break;
      a0 *= t / ((k + 1.0) * (k + 1.0));
      a1 *= t / ((k + 1.0) * (k + 2.0));
      psi1 += 1.0 / (k + 1);
      psi2 += 1.0 / (k + 2);
    }
    k0 = -lg * i0 + s0;
    k1 = 1 / x + lg * 0.5 * x * i1 - 0.25 * x * s1;
    return;
  }
  // Steed's continued fraction CF2 (Temme's normalization), order 0.
  double b = 2 * (1 + x), d = 1 / b, h = d, delh = d;
  double q1 = 0, q2 = 1;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1, s = 1 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2;
    d = 1 / (b + a * d);
    delh = (b * d - 1) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h *= a1;
  k0 = std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x) / s;
  k1 = k0 * (x + 0.5 - h) / x;
}

double bessel_k(int order, double x) {
  if (order != 0 && order != 1) throw DomainError("bessel_k: order must be 0 or 1");
  double k0, k1;
  bessel_k01(x, k0, k1);
  return order == 0 ? k0 : k1;
}

double spherical_bessel_j(int l, double x) {
  if (l < 0) throw DomainError("spherical_bessel_j: l < 0");
  if (!(x > 0)) throw DomainError("spherical_bessel_j: x must be > 0");
  if (x < 0.5) {
    double pref = 1;
    for (int k = 1; k <= l; ++k) pref *= x / (2.0 * k + 1);
    double term = 1, sum = 1;
    const double t = -0.5 * x * x;
    for (int k = 1; k < 40; ++k) {
      term *= t / (k * (2.0 * l + 2 * k + 1));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return pref * sum;
  }
  const double j0 = std::sin(x) / x;
  if (l == 0) return j0;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  if (x > l) {
    double a = j0, b = j1;
    for (int k = 1; k < l; ++k) {
      const double c = (2.0 * k + 1) / x * b - a;
      a = b;
      b = c;
    }
    return b;
  }
  // Miller's downward recurrence, normalized to j0 or j1.
  const int start = l + 20 + int(std::sqrt(40.0 * (l + 1)));
  double fp = 0, f = 1e-280, fl = 0, f0 = 0, f1 = 0;
  for (int k = start; k >= 1; --k) {
    const double fm = (2.0 * k + 1) / x * f - fp;
    fp = f;
    f = fm;
    if (k - 1 == l) fl = f;
    if (k == 1) f1 = fp;
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      fp *= 1e-250;
      fl *= 1e-250;
      f1 *= 1e-250;
    }
  }
  f0 = f;
  if (l == 1) fl = f1;
  return std::abs(j0) > std::abs(j1) ? fl * j0 / f0 : fl * j1 / f1;
}

double bessel_j_half(int l, double x) {
  return std::sqrt(2 * x / std::numbers::pi) * spherical_bessel_j(l, x);
}

double RadialFunction::d(double r) const {
  if (derivative) return derivative(r);
  const double h = 1e-3 * std::max(1.0, std::abs(r));
  return (8 * (value(r + h) - value(r - h)) - (value(r + 2 * h) - value(r - 2 * h))) / (12 * h);
}

RadialFunction radial_oscillator(int n, int l, RadialNorm norm) {
  if (n < 0 || l < 0) throw DomainError("radial_oscillator: n, l must be >= 0");
  const double b = l + 1.5;
  // 1F1(-n, b; x) = sum_k c_k x^k, exact polynomial
  std::vector<double> c(n + 1);
  c[0] = 1;
  for (int k = 1; k <= n; ++k) c[k] = c[k - 1] * (k - 1.0 - n) / ((b + k - 1) * k);
  // int r^(2s+2) x^(i+j) e^{-x} dr with x = r^2 equals Gamma(s + i + j + 3/2)/2
  const int s = l;  // the integrand carries r^(2l) either way
  double integral = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      integral += c[i] * c[j] * 0.5 * std::tgamma(s + i + j + 1.5);
  RadialFunction R;
  R.n = n;
  R.l = l;
  R.normalization_constant = 1 / std::sqrt(integral);
  const double N = R.normalization_constant;
  // plain carries r^l; solid leaves it to the solid harmonic
  const int e = norm == RadialNorm::plain ? l : 0;
  R.value = [N, c, e](double r) {
    const double x = r * r;
    double p = 0;
    for (int k = int(c.size()) - 1; k >= 0; --k) p = p * x + c[k];
    return N * std::pow(r, e) * p * std::exp(-0.5 * x);
  };
  R.derivative = [N, c, e](double r) {
    const double x = r * r;
    double p = 0, dp = 0;
    for (int k = int(c.size()) - 1; k >= 0; --k) {
      dp = dp * x + p;
      p = p * x + c[k];
    }
    const double re = std::pow(r, e);
    const double dre = e == 0 ? 0 : e * std::pow(r, e - 1);
    return N * (dre * p + re * (2 * r * dp - r * p)) * std::exp(-0.5 * x);
  };
  return R;
}

RadialFunction normalized_radial(std::function<double(double)> f, std::function<double(double)> df,
                                 double r_max) {
  std::vector<double> edges;
  for (int k = 0; k <= 64; ++k) edges.push_back(r_max * k / 64.0);
  const Rule q = composite_legendre(edges, 20);
  double s = 0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.w[i] * q.x[i] * q.x[i] * f(q.x[i]) * f(q.x[i]);
  if (!(s > 0)) throw NumericError("normalized_radial: zero norm");
  const double N = 1 / std::sqrt(s);
  RadialFunction R;
  R.n = -1;
  R.l = 0;
  R.normalization_constant = N;
  R.r_max = r_max;
  R.value = [N, f](double r) { return N * f(r); };
  if (df) R.derivative = [N, df](double r) { return N * df(r); };
  return R;
}

}  // namespace psd
