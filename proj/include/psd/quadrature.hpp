#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace psd {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

// Gauss-Legendre on [-1,1] or mapped to [a,b].
Rule gauss_legendre(int n);
Rule gauss_legendre(int n, double a, double b);

// Gauss-Hermite for the weight exp(-x^2).
Rule gauss_hermite(int n);

// n-point Gauss-Legendre on every panel [edges[i], edges[i+1]].
Rule composite_legendre(const std::vector<double>& edges, int n);

// Panel edges for integrands with a log (or 1/p) singularity at lo:
// geometric from tiny to knee, then panels of width at most `width` up to hi.
std::vector<double> graded_edges(double lo, double tiny, double knee, double hi,
                                 double ratio, double width);

// Equally spaced nodes 2*pi*k/n with weights 2*pi/n.
Rule periodic_trapezoid(int n);

double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

// Piecewise Chebyshev interpolant on [lo, hi] with equal panels.
class ChebyshevTable {
 public:
  ChebyshevTable() = default;
  ChebyshevTable(const std::function<double(double)>& f, double lo, double hi,
                 int panels, int degree);
  double operator()(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_ = 0, hi_ = 0, width_ = 1;
  int panels_ = 0, degree_ = 0;
  std::vector<double> coef_;
};

}  // namespace psd
