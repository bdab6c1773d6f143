#include "psd/soft_rotor.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "psd/quadrature.hpp"
#include "psd/specfun.hpp"

namespace psd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQMax = 2.75;  // exp(-q^4) < 2e-25 beyond

enum class Kernel { F, F1, F2 };

// Integrand of F, F1 or F2 at (s, q), without the exp(-q^4) factor.
double kernel_integrand(Kernel k, double s, double q) {
  const double x = s * q;
  const double j0 = boost::math::cyl_bessel_j(0, x);
  if (k == Kernel::F) return q * j0;
  // J1(x)/x, by series near 0
  const double j1x = x < 1e-4 ? 0.5 - x * x / 16 : boost::math::cyl_bessel_j(1, x) / x;
  if (k == Kernel::F1) return -q * q * q * j1x;
  return -q * q * q * (j0 - j1x);
}

const Rule& kernel_rule() {
  static const Rule r = [] {
    std::vector<double> edges;
    for (int i = 0; i <= 22; ++i) edges.push_back(kQMax * i / 22);
    Rule q = composite_legendre(edges, 24);
    for (std::size_t i = 0; i < q.size(); ++i) q.w[i] *= std::exp(-std::pow(q.x[i], 4));
    return q;
  }();
  return r;
}

double kernel_by_rule(Kernel k, double s) {
  const Rule& q = kernel_rule();
  double sum = 0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q.w[i] * kernel_integrand(k, s, q.x[i]);
  return sum;
}

struct KernelTables {
  ChebyshevTable f, f1, f2;
};

const KernelTables& tables() {
  static std::once_flag once;
  static KernelTables t;
  std::call_once(once, [] {
    t.f = ChebyshevTable([](double s) { return kernel_by_rule(Kernel::F, s); }, 0, kSoftKernelSMax, 120, 20);
    t.f1 = ChebyshevTable([](double s) { return kernel_by_rule(Kernel::F1, s); }, 0, kSoftKernelSMax, 120, 20);
    t.f2 = ChebyshevTable([](double s) { return kernel_by_rule(Kernel::F2, s); }, 0, kSoftKernelSMax, 120, 20);
  });
  return t;
}

double kernel_direct(Kernel k, double s) {
  if (s < 0) throw DomainError("soft kernel: s must be >= 0");
  using boost::math::quadrature::gauss_kronrod;
  // Panels of about half a Bessel period.
  const int panels = std::max(4, int(std::ceil(kQMax * s / kPi)));
  double sum = 0, err = 0;
  for (int i = 0; i < panels; ++i) {
    double e = 0;
    sum += gauss_kronrod<double, 61>::integrate(
        [&](double q) { return kernel_integrand(k, s, q) * std::exp(-q * q * q * q); }, kQMax * i / panels,
        kQMax * (i + 1) / panels, 2, 1e-12, &e);
    err += e;
  }
  if (err > 1e-10) throw NumericError("soft kernel: quadrature error " + std::to_string(err));
  return sum;
}

double check_s(double s) {
  if (s < 0) throw DomainError("soft kernel: s must be >= 0");
  return s;
}

struct Radial {
  double g, d_tt, d_ff, d_f;  // G and its p_theta/p_phi derivatives
};

Radial radial_parts(const SoftRotorParams& prm, double pt, double pf) {
  const double K = 4 * prm.a * prm.r0 / kPi;
  const double c = 2 * std::sqrt(2 * prm.a * prm.r0);
  const double p = std::hypot(pt, pf);
  const double s = c * p;
  const double g = K * kernel_F(s);
  const double g1 = K * c * c * kernel_F1(s);  // g'(p) / p
  const double g2 = K * c * c * kernel_F2(s);  // g''(p)
  double cos2 = 0.5, sin2 = 0.5;
  if (p > 0) {
    cos2 = pf * pf / (p * p);
    sin2 = pt * pt / (p * p);
  }
  return {g, g2 * sin2 + g1 * cos2, g2 * cos2 + g1 * sin2, g1 * pf};
}

void check_state(int l, int m) {
  if (!((l == 0 && m == 0) || (l == 1 && std::abs(m) <= 1)))
    throw UnsupportedState("soft rotor state (" + std::to_string(l) + "," + std::to_string(m) +
                           ") is not available");
}

// Gauss-Legendre in s = c p on [0, 40], returned as nodes in p with weights for p dp.
Rule momentum_rule(const SoftRotorParams& prm) {
  const double c = 2 * std::sqrt(2 * prm.a * prm.r0);
  std::vector<double> edges;
  for (int i = 0; i <= 160; ++i) edges.push_back(40.0 * i / 160);
  Rule r = composite_legendre(edges, 16);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.w[i] *= r.x[i] / (c * c);
    r.x[i] /= c;
  }
  return r;
}

}  // namespace

std::vector<std::string> validate(const SoftRotorParams& prm) {
  if (!(prm.a > 0) || !(prm.r0 > 0) || !(prm.m > 0))
    throw DomainError("soft rotor: a, r0 and m must be positive");
  std::vector<std::string> warnings;
  if (prm.a / prm.r0 > 0.2)
    warnings.push_back("a/r0 = " + std::to_string(prm.a / prm.r0) +
                       " exceeds 0.2; the small-width expansion is unreliable");
  return warnings;
}

double kernel_F(double s) {
  check_s(s);
  return s >= kSoftKernelSMax ? 0.0 : tables().f(s);
}
double kernel_F1(double s) {
  check_s(s);
  return s >= kSoftKernelSMax ? 0.0 : tables().f1(s);
}
double kernel_F2(double s) {
  check_s(s);
  return s >= kSoftKernelSMax ? 0.0 : tables().f2(s);
}

double kernel_F_direct(double s) { return kernel_direct(Kernel::F, s); }
double kernel_F1_direct(double s) { return kernel_direct(Kernel::F1, s); }
double kernel_F2_direct(double s) { return kernel_direct(Kernel::F2, s); }

double soft_angular_density(int l, int m, const SoftRotorParams& prm, const AngularPhasePoint& pt,
                            SoftSign sign) {
  check_state(l, m);
  validate(prm);
  const Radial g = radial_parts(prm, pt.p_theta, pt.p_phi);
  const double q = 1 / (4 * prm.r0 * prm.r0);
  if (l == 0) return g.g / (4 * kPi);
  const double ct = std::cos(pt.theta), st = std::sin(pt.theta);
  const double X = ct * ct, S = st * st;
  if (m == 0) return 3 / (4 * kPi) * (X * g.g + q * g.d_tt + X * q * g.d_ff);
  const double first = (sign == SoftSign::derived ? -m : m) * st / prm.r0;
  return 3 / (8 * kPi) * (S * g.g + first * g.d_f + q * g.d_tt + (1 + S) * q * g.d_ff);
}

double soft_angular_density_full(int l, int m, const SoftRotorParams& prm, const AngularPhasePoint& pt,
                                 const SoftSlowConfig& cfg) {
  check_state(l, m);
  validate(prm);
  const double cq = std::sqrt(2 * prm.a * prm.r0);
  const Rule qr = gauss_legendre(cfg.radial_nodes, 0, kQMax);
  const Rule br = periodic_trapezoid(cfg.angular_nodes);
  const Spherical at{prm.r0, pt.theta, pt.phi};
  cplx sum = 0;
  for (std::size_t i = 0; i < qr.size(); ++i) {
    const double q = qr.x[i];
    const double wq = qr.w[i] * q * std::exp(-q * q * q * q);
    cplx inner = 0;
    for (std::size_t j = 0; j < br.size(); ++j) {
      const double qf = q * std::cos(br.x[j]), qt = q * std::sin(br.x[j]);
      const ShiftedAngles sh = shifted_coords(at, {0, cq * qt, cq * qf});
      const cplx theta_fn = std::conj(spherical_harmonic(l, m, sh.theta_plus, sh.phi_plus)) *
                            spherical_harmonic(l, m, sh.theta_minus, sh.phi_minus);
      inner += br.w[j] * std::polar(1.0, 2 * cq * (pt.p_theta * qt + pt.p_phi * qf)) * theta_fn;
    }
    sum += wq * inner;
  }
  return 2 * prm.a * prm.r0 / (kPi * kPi) * sum.real();
}

double soft_momentum_marginal(int l, int m, const SoftRotorParams& prm, double theta, double phi,
                              SoftSign sign) {
  const Rule pr = momentum_rule(prm);
  const Rule ar = periodic_trapezoid(16);
  std::vector<double> terms(pr.size());
  for (std::size_t i = 0; i < pr.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < ar.size(); ++j) {
      const AngularPhasePoint pt{theta, phi, pr.x[i] * std::sin(ar.x[j]), pr.x[i] * std::cos(ar.x[j])};
      s += ar.w[j] * soft_angular_density(l, m, prm, pt, sign);
    }
    terms[i] = pr.w[i] * s;
  }
  return pairwise_sum(terms);
}

MomentReport soft_moments(int l, int m, const SoftRotorParams& prm, SoftSign sign) {
  const Rule pr = momentum_rule(prm);
  const Rule ar = periodic_trapezoid(16);
  const Rule tr = gauss_legendre(24, 0, kPi);
  const Rule fr = periodic_trapezoid(8);
  std::vector<double> n0, l2, lz;
  for (std::size_t it = 0; it < tr.size(); ++it)
    for (std::size_t jf = 0; jf < fr.size(); ++jf) {
      const double th = tr.x[it], wa = tr.w[it] * fr.w[jf] * std::sin(th);
      double a0 = 0, a2 = 0, az = 0;
      for (std::size_t i = 0; i < pr.size(); ++i)
        for (std::size_t j = 0; j < ar.size(); ++j) {
          const double p = pr.x[i];
          const AngularPhasePoint pt{th, fr.x[jf], p * std::sin(ar.x[j]), p * std::cos(ar.x[j])};
          const double w = pr.w[i] * ar.w[j] * soft_angular_density(l, m, prm, pt, sign);
          a0 += w;
          a2 += w * p * p;
          az += w * pt.p_phi;
        }
      n0.push_back(wa * a0);
      l2.push_back(wa * a2 * prm.r0 * prm.r0);
      lz.push_back(wa * az * prm.r0 * std::sin(th));
    }
  MomentReport rep;
  rep.normalization = pairwise_sum(n0);
  rep.l2 = pairwise_sum(l2);
  rep.lz = pairwise_sum(lz);
  return rep;
}

double soft_relaxation_time(const SoftRotorParams& prm) {
  validate(prm);
  return prm.m * prm.r0 * std::sqrt(2 * prm.a * prm.r0);
}

double relaxation_profile(double u, RelaxationRoute route) {
  if (u < 0) throw DomainError("relaxation_profile: u must be >= 0");
  if (route == RelaxationRoute::angle_integral) {
    using boost::math::quadrature::gauss_kronrod;
    const double u4 = u * u * u * u;
    double err = 0;
    const double v = gauss_kronrod<double, 61>::integrate(
        [u4](double b) {
          const double s = std::sin(b), s4 = s * s * s * s;
          return s * std::exp(-u4 * s4) * (1 - 4 * u4 * s4);
        },
        0, kPi / 2, 20, 1e-14, &err);
    if (err > 1e-11) throw NumericError("relaxation_profile: error estimate " + std::to_string(err));
    return v;
  }
  std::vector<double> edges;
  for (int i = 0; i <= 160; ++i) edges.push_back(40.0 * i / 160);
  const Rule r = composite_legendre(edges, 16);
  std::vector<double> terms(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) terms[i] = r.w[i] * r.x[i] * kernel_F(r.x[i]) * std::cos(u * r.x[i]);
  return pairwise_sum(terms);
}

double marginal_relaxation(const SoftRotorParams& prm, double theta, double t) {
  if (t < 0) throw DomainError("marginal_relaxation: t must be >= 0");
  validate(prm);
  const Rule pr = momentum_rule(prm);
  const Rule ar = periodic_trapezoid(16);
  const double K = 4 * prm.a * prm.r0 / kPi;
  const double c = 2 * std::sqrt(2 * prm.a * prm.r0);
  const double ct = std::cos(theta), st = std::sin(theta);
  std::vector<double> terms(pr.size());
  for (std::size_t i = 0; i < pr.size(); ++i) {
    const double p = pr.x[i], w = t * p / (prm.m * prm.r0);
    const double g = K * kernel_F(c * p);
    double s = 0;
    for (std::size_t j = 0; j < ar.size(); ++j) {
      const double cos_t = ct * std::cos(w) + std::sin(ar.x[j]) * st * std::sin(w);
      s += ar.w[j] * cos_t * cos_t;
    }
    terms[i] = pr.w[i] * g * s;
  }
  return 3 / (4 * kPi) * pairwise_sum(terms);
}

double marginal_relaxation_closed(const SoftRotorParams& prm, double theta, double t) {
  const double X = std::cos(theta) * std::cos(theta);
  const double h = relaxation_profile(t / soft_relaxation_time(prm));
  return 3 / (4 * kPi) * ((1 + X) / 4 + (3 * X - 1) / 4 * h);
}

std::vector<Figure1Row> figure1_grid(const SoftRotorParams& prm, double p_max, int points) {
  validate(prm);
  if (points < 2 || !(p_max > 0)) throw DomainError("figure1_grid: need points >= 2 and p_max > 0");
  const double c = 2 * std::sqrt(2 * prm.a * prm.r0);
  std::vector<Figure1Row> rows;
  for (int i = 0; i < points; ++i) {
    const double p = p_max * i / (points - 1);
    rows.push_back({p, prm.a * prm.r0 / (kPi * kPi) * kernel_F(c * p)});
  }
  return rows;
}

}  // namespace psd
