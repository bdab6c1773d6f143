#include "psd/oscillator.hpp"

#include <cmath>
#include <numbers>

#include "psd/parallel.hpp"
#include "psd/quadrature.hpp"

namespace psd {

namespace {

constexpr double kPi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;

using Row = std::vector<Monomial>;

// Rows of the ground (n = 0) and first excited (n = 1) vibrational tables, expanded
// into monomials. Exponents are (E, Ez, L2, Lz).
const Row kI00 = {{1, 0, 0, 0, 0}};
const Row kI10 = {{-1, 0, 0, 0, 0}, {2, 0, 1, 0, 0}};
const Row kI11 = {{-1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {-1, 0, 1, 0, 0}, {2, 0, 0, 0, 1}};
const Row kI20 = {{1, 0, 0, 0, 0},      {-2.0 / 3, 1, 0, 0, 0}, {-2, 0, 1, 0, 0},
                  {1.0 / 3, 2, 0, 0, 0}, {-2, 1, 1, 0, 0},      {3, 0, 2, 0, 0},
                  {8.0 / 3, 0, 0, 1, 0}, {-4, 0, 0, 0, 2}};
const Row kI21 = {{1, 0, 0, 0, 0}, {-1, 1, 0, 0, 0}, {-1, 0, 1, 0, 0}, {-2, 0, 0, 0, 1},
                  {2, 1, 1, 0, 0}, {-2, 0, 2, 0, 0}, {4, 0, 1, 0, 1}};
const Row kI22 = {{1, 0, 0, 0, 0},   {-2, 1, 0, 0, 0},  {2, 0, 1, 0, 0}, {-4, 0, 0, 0, 1},
                  {0.5, 2, 0, 0, 0}, {0.5, 0, 2, 0, 0}, {2, 0, 0, 0, 2}, {-1, 1, 1, 0, 0},
                  {2, 1, 0, 0, 1},   {-2, 0, 1, 0, 1}};
const Row kII00 = {{1, 0, 0, 0, 0}, {-4.0 / 3, 1, 0, 0, 0}, {2.0 / 3, 2, 0, 0, 0}, {-8.0 / 3, 0, 0, 1, 0}};
const Row kII10 = {{-1, 0, 0, 0, 0},       {0.4 * 2, 1, 0, 0, 0},  {0.4 * -1, 2, 0, 0, 0},
                   {0.4 * 9, 0, 1, 0, 0},  {0.4 * -8, 1, 1, 0, 0}, {0.4 * 2, 2, 1, 0, 0},
                   {0.4 * 12, 0, 0, 1, 0}, {0.4 * -8, 0, 1, 1, 0}, {0.4 * -8, 0, 0, 0, 2}};
const Row kII11 = {{-1, 0, 0, 0, 0},       {0.2 * 13, 1, 0, 0, 0},  {0.2 * -10, 2, 0, 0, 0},
                   {0.2 * 2, 3, 0, 0, 0},  {0.2 * -9, 0, 1, 0, 0},  {0.2 * 8, 1, 1, 0, 0},
                   {0.2 * -2, 2, 1, 0, 0}, {0.2 * 16, 0, 0, 1, 0},  {0.2 * -8, 1, 0, 1, 0},
                   {0.2 * 8, 0, 1, 1, 0},  {0.2 * 10, 0, 0, 0, 1},  {0.2 * -8, 1, 0, 0, 1},
                   {0.2 * 4, 2, 0, 0, 1},  {0.2 * -16, 0, 0, 1, 1}, {0.2 * 8, 0, 0, 0, 2}};

double ipow(double x, int k) {
  double r = 1;
  while (k-- > 0) r *= x;
  return r;
}

double radial_quad(const RadialFunction& R, const std::function<double(double)>& f) {
  std::vector<double> edges;
  for (int k = 0; k <= 64; ++k) edges.push_back(R.r_max * k / 64.0);
  const Rule q = composite_legendre(edges, 20);
  std::vector<double> terms(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) terms[i] = q.w[i] * f(q.x[i]);
  return pairwise_sum(terms);
}

}  // namespace

std::string to_string(const QuantumLabel& q) {
  return std::to_string(q.n) + "," + std::to_string(q.l) + "," + std::to_string(q.mu);
}

OscInvariants invariants(const Vec3& r, const Vec3& p) {
  const Vec3 L = cross(r, p);
  return {dot(r, r) + dot(p, p), r.z * r.z + p.z * p.z, dot(L, L), L.z};
}

const std::vector<QuantumLabel>& covered_labels() {
  static const std::vector<QuantumLabel> labels = {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 2, 0}, {0, 2, 1},
                                                   {0, 2, 2}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
  return labels;
}

bool is_covered(const QuantumLabel& q) {
  const QuantumLabel a{q.n, q.l, std::abs(q.mu)};
  for (const auto& c : covered_labels())
    if (c == a) return true;
  return false;
}

const std::vector<Monomial>& table_row(const QuantumLabel& q) {
  if (!is_covered(q)) throw UnsupportedState("oscillator state (" + to_string(q) + ") is not tabulated");
  const int mu = std::abs(q.mu);
  if (q.n == 0) {
    if (q.l == 0) return kI00;
    if (q.l == 1) return mu == 0 ? kI10 : kI11;
    return mu == 0 ? kI20 : mu == 1 ? kI21 : kI22;
  }
  if (q.l == 0) return kII00;
  return mu == 0 ? kII10 : kII11;
}

double table_polynomial(const QuantumLabel& q, const OscInvariants& inv) {
  const double lz = q.mu < 0 ? -inv.Lz : inv.Lz;
  double s = 0;
  for (const auto& t : table_row(q))
    s += t.coef * ipow(inv.E, t.e) * ipow(inv.Ez, t.ez) * ipow(inv.L2, t.l2) * ipow(lz, t.lz);
  return s;
}

double density(const QuantumLabel& q, const Vec3& r, const Vec3& p) {
  const OscInvariants inv = invariants(r, p);
  return table_polynomial(q, inv) * std::exp(-inv.E) / kPi3;
}

RadialFunction oscillator_radial(const QuantumLabel& q) {
  if (!is_covered(q)) throw UnsupportedState("oscillator state (" + to_string(q) + ") is not tabulated");
  return radial_oscillator(q.n, q.l, RadialNorm::solid);
}

WaveFunction3D oscillator_wavefunction(const QuantumLabel& q) {
  const RadialFunction R = oscillator_radial(q);
  const int l = q.l, mu = q.mu;
  WaveFunction3D w;
  w.psi = [R, l, mu](double x, double y, double z) {
    return solid_harmonic(l, mu, x, y, z) * R(std::sqrt(x * x + y * y + z * z));
  };
  w.decay_radius = 8;
  w.gaussian_prefactor = 0.5;
  return w;
}

MomentReport moments(const QuantumLabel& q, int order) {
  const Rule g = gauss_hermite(order);
  const int n = order;
  const std::size_t outer = std::size_t(n) * n;
  std::vector<double> s0(outer), s1(outer), s2(outer), s3(outer);
  parallel_for(outer, [&](std::size_t idx) {
    const int a = int(idx / n), b = int(idx % n);
    double t0 = 0, t1 = 0, t2 = 0, t3 = 0;
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e)
          for (int f = 0; f < n; ++f) {
            const Vec3 r{g.x[a], g.x[b], g.x[c]}, p{g.x[d], g.x[e], g.x[f]};
            const double w = g.w[a] * g.w[b] * g.w[c] * g.w[d] * g.w[e] * g.w[f];
            const OscInvariants inv = invariants(r, p);
            const double P = w * table_polynomial(q, inv);
            t0 += P;
            t1 += P * inv.Lz;
            t2 += P * inv.L2;
            t3 += P * inv.E;
          }
    s0[idx] = t0;
    s1[idx] = t1;
    s2[idx] = t2;
    s3[idx] = t3;
  });
  MomentReport m;
  m.normalization = pairwise_sum(s0) / kPi3;
  m.lz = pairwise_sum(s1) / kPi3;
  m.l2 = pairwise_sum(s2) / kPi3;
  m.extra["E"] = pairwise_sum(s3) / kPi3;
  return m;
}

double angular_l2_radial_integral(const RadialFunction& R) {
  return -radial_quad(R, [&](double r) { return r * r * r * R(r) * R.d(r); });
}

double lz_half_average(const RadialFunction& R) {
  return 0.25 * radial_quad(R, [&](double r) { return r * r * R(r) * R(r); });
}

double angular_kinetic_integral(const RadialFunction& R) {
  return -radial_quad(R, [&](double r) { return r * R(r) * R.d(r); });
}

double radial_kinetic_integral(const RadialFunction& R) {
  return radial_quad(R, [&](double r) {
    const double d = R.d(r);
    return r * R(r) * d + r * r * d * d;
  });
}

std::pair<Vec3, Vec3> classical_evolve(const Vec3& r, const Vec3& p, double t) {
  const double c = std::cos(t), s = std::sin(t);
  return {c * r + s * p, -s * r + c * p};
}

}  // namespace psd
