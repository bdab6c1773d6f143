#include "psd/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace psd {

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1, p2 = 0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2 / ((1 - z * z) * pp * pp);
  }
  return r;
}

Rule gauss_legendre(int n, double a, double b) {
  Rule r = gauss_legendre(n);
  const double h = 0.5 * (b - a), c = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + h * r.x[i];
    r.w[i] *= h;
  }
  return r;
}

// Newton iteration on orthonormal Hermite recurrences, asymptotic initial guesses.
Rule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n < 1");
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  double z = 0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(double(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * r.x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * r.x[1];
    else
      z = 2.0 * z - r.x[i - 2];
    double pp = 0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    r.x[i] = z;
    r.x[n - 1 - i] = -z;
    r.w[i] = r.w[n - 1 - i] = 2 / (pp * pp);
  }
  // stored descending above; flip to ascending order
  for (int i = 0; i < n / 2; ++i) {
    std::swap(r.x[i], r.x[n - 1 - i]);
    std::swap(r.w[i], r.w[n - 1 - i]);
  }
  if (n % 2 == 1) r.x[n / 2] = 0;
  return r;
}

Rule composite_legendre(const std::vector<double>& edges, int n) {
  Rule base = gauss_legendre(n);
  Rule r;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k], b = edges[k + 1];
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (int i = 0; i < n; ++i) {
      r.x.push_back(c + h * base.x[i]);
      r.w.push_back(h * base.w[i]);
    }
  }
  return r;
}

std::vector<double> graded_edges(double lo, double tiny, double knee, double hi,
                                 double ratio, double width) {
  std::vector<double> e{lo};
  for (double t = tiny; t < knee; t *= ratio) e.push_back(lo + t);
  double x = lo + knee;
  e.push_back(x);
  while (x < hi) {
    x = std::min(hi, x + width);
    e.push_back(x);
  }
  return e;
}

Rule periodic_trapezoid(int n) {
  Rule r;
  r.x.resize(n);
  r.w.assign(n, 2 * std::numbers::pi / n);
  for (int i = 0; i < n; ++i) r.x[i] = 2 * std::numbers::pi * i / n;
  return r;
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

ChebyshevTable::ChebyshevTable(const std::function<double(double)>& f, double lo, double hi,
                               int panels, int degree)
    : lo_(lo), hi_(hi), width_((hi - lo) / panels), panels_(panels), degree_(degree) {
  const int n = degree + 1;
  coef_.assign(std::size_t(panels) * n, 0.0);
  std::vector<double> fx(n);
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width_;
    for (int k = 0; k < n; ++k) {
      const double t = std::cos(std::numbers::pi * (k + 0.5) / n);
      fx[k] = f(a + 0.5 * width_ * (t + 1));
    }
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += fx[k] * std::cos(std::numbers::pi * j * (k + 0.5) / n);
      coef_[std::size_t(p) * n + j] = (j == 0 ? 1.0 : 2.0) * s / n;
    }
  }
}

double ChebyshevTable::operator()(double x) const {
  int p = int((x - lo_) / width_);
  if (p < 0) p = 0;
  if (p >= panels_) p = panels_ - 1;
  const double a = lo_ + p * width_;
  const double t = 2 * (x - a) / width_ - 1;
  const double* c = &coef_[std::size_t(p) * (degree_ + 1)];
  double b1 = 0, b2 = 0;
  for (int j = degree_; j >= 1; --j) {
    const double b0 = 2 * t * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

}  // namespace psd
