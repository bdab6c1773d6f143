#include "psd/true_rotor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "psd/parallel.hpp"
#include "psd/quadrature.hpp"

namespace psd {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

double poly(const std::array<double, 5>& c, double x) {
  return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4])));
}

double ipow(double x, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  for (int i = 0; i > k; --i) r /= x;
  return r;
}

void check_state(int l, int m) {
  if (!rotor_state_supported(l, m))
    throw UnsupportedState("rotor state (" + std::to_string(l) + "," + std::to_string(m) + ") is not available");
}

// Momentum nodes for p dp, graded toward the K0 log singularity at 0.
Rule momentum_rule(int nodes_per_panel) {
  Rule r = composite_legendre(graded_edges(0, 1e-12, 0.5, 24, 4, 0.5), nodes_per_panel);
  for (std::size_t i = 0; i < r.size(); ++i) r.w[i] *= r.x[i];
  return r;
}

struct PolarSmoothMoments {
  double mass = 0, p2 = 0, pu = 0;  // int p dp dalpha of rho, p^2 rho, p u rho
};

// alpha and p integrals of the smooth part at fixed theta.
PolarSmoothMoments smooth_moments_at(int l, int m, double theta, RotorForm form, const Rule& pr,
                                     const std::vector<double>& k0, const std::vector<double>& k1,
                                     int alpha_nodes) {
  PolarSmoothMoments out;
  if (l == 0) return out;
  std::vector<double> a(pr.size()), b(pr.size()), c(pr.size());
  const double s = std::sin(theta);
  if (form == RotorForm::raw) {
    // Fourier orthogonality in alpha: only n = 0 feeds the mass and p^2 moments, n = 1 feeds p u.
    const double sign = m < 0 ? -1 : 1;
    for (std::size_t i = 0; i < pr.size(); ++i) {
      const double p = pr.x[i];
      double mean = 0, cos1 = 0;
      for (const auto& t : rotor_raw_terms(l, m)) {
        const double v = ipow(p, t.p_power) * (t.bessel == 0 ? k0[i] : k1[i]) * poly(t.c, s);
        if (t.harmonic == 0) mean += v;
        if (t.harmonic == 1) cos1 += sign * v;
      }
      const double w = pr.w[i] * 2 * kPi / (kPi * kPi);
      a[i] = w * mean;
      b[i] = w * mean * p * p;
      c[i] = w * 0.5 * cos1 * p * s;
    }
  } else {
    const Rule ar = periodic_trapezoid(alpha_nodes);
    for (std::size_t i = 0; i < pr.size(); ++i) {
      const double p = pr.x[i];
      double sa = 0, sc = 0;
      for (std::size_t j = 0; j < ar.size(); ++j) {
        const double ca = std::cos(ar.x[j]);
        const double v = ar.w[j] * rotor_smooth_polar(l, m, theta, p, ar.x[j], form, k0[i], k1[i]);
        sa += v;
        sc += v * ca;
      }
      a[i] = pr.w[i] * sa;
      b[i] = pr.w[i] * sa * p * p;
      c[i] = pr.w[i] * sc * p * s;
    }
  }
  out.mass = pairwise_sum(a);
  out.p2 = pairwise_sum(b);
  out.pu = pairwise_sum(c);
  return out;
}

void bessel_tables(const Rule& pr, std::vector<double>& k0, std::vector<double>& k1) {
  k0.resize(pr.size());
  k1.resize(pr.size());
  for (std::size_t i = 0; i < pr.size(); ++i) bessel_k01(2 * pr.x[i], k0[i], k1[i]);
}
}  // namespace

bool rotor_state_supported(int l, int m) { return l >= 0 && l <= 2 && std::abs(m) <= l; }

RotorInvariants rotor_invariants(const AngularPhasePoint& pt) {
  return {pt.p_theta * pt.p_theta + pt.p_phi * pt.p_phi, pt.p_phi * std::sin(pt.theta)};
}

double rotor_smooth_polar(int l, int m, double theta, double p, double alpha, RotorForm form, double k0,
                          double k1) {
  check_state(l, m);
  if (l == 0) return 0;
  double sum = 0;
  if (form == RotorForm::raw) {
    const double s = std::sin(theta);
    const double a = m < 0 ? alpha + kPi : alpha;
    for (const auto& t : rotor_raw_terms(l, m))
      sum += ipow(p, t.p_power) * (t.bessel == 0 ? k0 : k1) * std::cos(t.harmonic * a) * poly(t.c, s);
  } else {
    const double u = (m < 0 ? -1 : 1) * std::sin(theta) * std::cos(alpha);
    for (const auto& t : rotor_invariant_terms(l, m, form))
      sum += ipow(p, t.p_power) * (t.bessel == 0 ? k0 : k1) * poly(t.c, u);
  }
  return sum / (kPi * kPi);
}

double rotor_smooth(int l, int m, const AngularPhasePoint& pt, RotorForm form) {
  check_state(l, m);
  if (l == 0) return 0;
  const double p = std::hypot(pt.p_theta, pt.p_phi);
  if (!(p > 0)) throw DomainError("rotor_smooth: the smooth part is singular at p = 0");
  double k0, k1;
  bessel_k01(2 * p, k0, k1);
  return rotor_smooth_polar(l, m, pt.theta, p, std::atan2(pt.p_theta, pt.p_phi), form, k0, k1);
}

double rotor_delta_weight(int l, int m, double theta) {
  check_state(l, m);
  const double S = std::sin(theta) * std::sin(theta);
  const int am = std::abs(m);
  if (l == 0) return 1 / (4 * kPi);
  if (l == 1) return am == 0 ? -3 * S / (8 * kPi) : 3 * (S - 2) / (16 * kPi);
  if (am == 0) return 5 * (27 * S * S - 24 * S + 8) / (128 * kPi);
  if (am == 1) return (60 * S - 45 * S * S) / (64 * kPi);
  return 15 * (3 * S * S - 8 * S + 8) / (256 * kPi);
}

RotorDensityValue rotor_density(int l, int m, const AngularPhasePoint& pt, RotorForm form) {
  return {rotor_smooth(l, m, pt, form), rotor_delta_weight(l, m, pt.theta)};
}

double liouville_rhs(const RotorGradient& g, const AngularPhasePoint& pt, double m, double r) {
  const double st = std::sin(pt.theta);
  if (near_pole(pt.theta)) throw DomainError("liouville_rhs: point is on a pole");
  const double cot = std::cos(pt.theta) / st;
  const double mr = m * r;
  const double theta_dot = -pt.p_theta / mr;
  const double phi_dot = pt.p_phi / (mr * st);
  const double pt_dot = -pt.p_phi * pt.p_phi * cot / mr;
  const double pf_dot = pt.p_phi * pt.p_theta * cot / mr;
  return -(theta_dot * g.d_theta + phi_dot * g.d_phi + pt_dot * g.d_p_theta + pf_dot * g.d_p_phi);
}

RotorGradient numeric_gradient(const std::function<double(const AngularPhasePoint&)>& rho,
                               const AngularPhasePoint& pt, double h) {
  auto d = [&](auto shift) {
    AngularPhasePoint a = pt, b = pt, c = pt, e = pt;
    shift(a, h);
    shift(b, -h);
    shift(c, 2 * h);
    shift(e, -2 * h);
    return (8 * (rho(a) - rho(b)) - (rho(c) - rho(e))) / (12 * h);
  };
  RotorGradient g;
  g.d_theta = d([](AngularPhasePoint& x, double s) { x.theta += s; });
  g.d_phi = d([](AngularPhasePoint& x, double s) { x.phi += s; });
  g.d_p_theta = d([](AngularPhasePoint& x, double s) { x.p_theta += s; });
  g.d_p_phi = d([](AngularPhasePoint& x, double s) { x.p_phi += s; });
  return g;
}

AngularPhasePoint characteristics_evolve(const AngularPhasePoint& pt, double t, double m, double r) {
  const double p = std::hypot(pt.p_theta, pt.p_phi);
  if (t == 0 || p == 0) return pt;
  const LocalFrame f = local_frame(pt.theta, pt.phi);
  const Vec3 v = (pt.p_theta / p) * f.theta_hat + (pt.p_phi / p) * f.phi_hat;
  const double w = p / (m * r) * t;
  const double c = std::cos(w), s = std::sin(w);
  const Vec3 n = c * f.r_hat + s * v;
  const Vec3 P = p * (c * v - s * f.r_hat);
  const Spherical sp = to_spherical(n);
  const LocalFrame g = local_frame(sp.theta, sp.phi);
  return {sp.theta, sp.phi, dot(P, g.theta_hat), dot(P, g.phi_hat)};
}

AngularPhasePoint characteristics_evolve_rk4(const AngularPhasePoint& pt, double t, double dt, double m,
                                             double r) {
  using State = std::array<double, 4>;
  const double mr = m * r;
  auto rhs = [mr](const State& y) {
    const double st = std::sin(y[0]), cot = std::cos(y[0]) / st;
    return State{-y[2] / mr, y[3] / (mr * st), -y[3] * y[3] * cot / mr, y[3] * y[2] * cot / mr};
  };
  State y{pt.theta, pt.phi, pt.p_theta, pt.p_phi};
  const int steps = std::max(1, int(std::ceil(std::abs(t) / dt)));
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const State k1 = rhs(y);
    State y2, y3, y4;
    for (int i = 0; i < 4; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
    const State k2 = rhs(y2);
    for (int i = 0; i < 4; ++i) y3[i] = y[i] + 0.5 * h * k2[i];
    const State k3 = rhs(y3);
    for (int i = 0; i < 4; ++i) y4[i] = y[i] + h * k3[i];
    const State k4 = rhs(y4);
    for (int i = 0; i < 4; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return {y[0], wrap_angle(y[1]), y[2], y[3]};
}

MomentReport rotor_moments(int l, int m, RotorForm form, const RotorMomentOptions& opt) {
  check_state(l, m);
  const Rule pr = momentum_rule(opt.p_nodes_per_panel);
  std::vector<double> k0, k1;
  bessel_tables(pr, k0, k1);
  const Rule tr = gauss_legendre(opt.theta_nodes, 0, kPi);
  std::vector<double> mass(tr.size()), l2(tr.size()), lz(tr.size());
  parallel_for(tr.size(), [&](std::size_t i) {
    const double th = tr.x[i];
    // The densities do not depend on phi.
    const double w = tr.w[i] * std::sin(th) * 2 * kPi;
    const PolarSmoothMoments s = smooth_moments_at(l, m, th, form, pr, k0, k1, opt.alpha_nodes);
    mass[i] = w * (s.mass + rotor_delta_weight(l, m, th));
    l2[i] = w * s.p2;
    lz[i] = w * s.pu;
  });
  MomentReport rep;
  rep.normalization = pairwise_sum(mass);
  rep.l2 = pairwise_sum(l2);
  rep.lz = pairwise_sum(lz);
  return rep;
}

double rotor_marginal(int l, int m, double theta, double phi, RotorForm form, const RotorMomentOptions& opt) {
  check_state(l, m);
  (void)phi;
  const Rule pr = momentum_rule(opt.p_nodes_per_panel);
  std::vector<double> k0, k1;
  bessel_tables(pr, k0, k1);
  return smooth_moments_at(l, m, theta, form, pr, k0, k1, opt.alpha_nodes).mass + rotor_delta_weight(l, m, theta);
}

double px_squared_analytic() { return 11.0 / 7.0; }
double px_squared_printed() { return 22 * kPi / 7; }

PxSquaredResult px_squared_moment(RotorForm form) {
  auto run = [form](int nt, int nf, int na, int np, double& py) {
    const Rule pr = momentum_rule(np);
    std::vector<double> k0, k1;
    bessel_tables(pr, k0, k1);
    const Rule tr = gauss_legendre(nt, 0, kPi), fr = periodic_trapezoid(nf), ar = periodic_trapezoid(na);
    std::vector<double> sx(tr.size() * fr.size()), sy(tr.size() * fr.size());
    parallel_for(sx.size(), [&](std::size_t idx) {
      const std::size_t it = idx / fr.size(), jf = idx % fr.size();
      const double th = tr.x[it], ph = fr.x[jf];
      const LocalFrame f = local_frame(th, ph);
      double ax = 0, ay = 0;
      for (std::size_t i = 0; i < pr.size(); ++i) {
        const double p = pr.x[i];
        double bx = 0, by = 0;
        for (std::size_t j = 0; j < ar.size(); ++j) {
          const double pt = p * std::sin(ar.x[j]), pf = p * std::cos(ar.x[j]);
          const double rho = rotor_smooth_polar(2, 0, th, p, ar.x[j], form, k0[i], k1[i]);
          // p_r = 0 reconstruction along the local frame
          const double px = pt * f.theta_hat.x + pf * f.phi_hat.x;
          const double pyv = pt * f.theta_hat.y + pf * f.phi_hat.y;
          bx += ar.w[j] * px * px * rho;
          by += ar.w[j] * pyv * pyv * rho;
        }
        ax += pr.w[i] * bx;
        ay += pr.w[i] * by;
      }
      const double w = tr.w[it] * fr.w[jf] * std::sin(th);
      sx[idx] = w * ax;
      sy[idx] = w * ay;
    });
    py = pairwise_sum(sy);
    return pairwise_sum(sx);
  };
  PxSquaredResult res;
  double py_coarse = 0;
  res.coarse = run(24, 16, 32, 12, py_coarse);
  res.value = run(48, 32, 64, 20, res.py_squared);
  res.rel_change = std::abs(res.value - res.coarse) / std::abs(res.value);
  return res;
}

RotorWignerOracle::RotorWignerOracle(AngularFunction theta_fn, double theta, double phi,
                                     const RotorOracleConfig& cfg)
    : cfg_(cfg) {
  const double Q = std::sqrt(40 / (cfg.eta0 / 4));
  std::vector<double> edges;
  for (double x = 0; x < Q; x += cfg.panel) edges.push_back(x);
  edges.push_back(Q);
  const Rule qr = composite_legendre(edges, cfg.nodes_per_panel);
  q_ = qr.x;
  wq_ = qr.w;
  const int N = cfg.harmonics, M = cfg.beta_nodes;
  if (M <= 2 * N) throw DomainError("RotorWignerOracle: beta_nodes must exceed twice the harmonic count");
  const LocalFrame f = local_frame(theta, phi);
  const Rule br = periodic_trapezoid(M);
  auto value_at = [&](const Vec3& v) {
    const Spherical s = to_spherical(v);
    return theta_fn(s.theta, s.phi);
  };
  hhat_.assign(2 * N + 1, std::vector<cplx>(q_.size()));
  parallel_for(q_.size(), [&](std::size_t i) {
    std::vector<cplx> h(M);
    for (int j = 0; j < M; ++j) {
      const Vec3 shift = (q_[i] * std::sin(br.x[j])) * f.theta_hat + (q_[i] * std::cos(br.x[j])) * f.phi_hat;
      h[j] = std::conj(value_at(f.r_hat + shift)) * value_at(f.r_hat - shift);
    }
    for (int n = -N; n <= N; ++n) {
      cplx s = 0;
      for (int j = 0; j < M; ++j) s += br.w[j] * std::polar(1.0, n * br.x[j]) * h[j];
      hhat_[n + N][i] = s;
    }
  });
  double d = 0;
  for (int j = 0; j < M; ++j) {
    const Vec3 w = std::sin(br.x[j]) * f.theta_hat + std::cos(br.x[j]) * f.phi_hat;
    d += (std::conj(value_at(w)) * value_at(-w)).real();
  }
  delta_ = d / M;
}

RotorWignerOracle RotorWignerOracle::for_harmonic(int l, int m, double theta, double phi,
                                                  const RotorOracleConfig& cfg) {
  return RotorWignerOracle([l, m](double t, double f) { return spherical_harmonic(l, m, t, f); }, theta, phi, cfg);
}

std::vector<cplx> RotorWignerOracle::mode_integrals(double p, double eta) const {
  const int N = cfg_.harmonics;
  std::vector<cplx> out(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    const int an = std::abs(n);
    const double sign = (n < 0 && an % 2) ? -1 : 1;
    cplx s = 0;
    for (std::size_t i = 0; i < q_.size(); ++i) {
      const double j = boost::math::cyl_bessel_j(an, 2 * p * q_[i]);
      s += wq_[i] * q_[i] * sign * j * std::exp(-eta * q_[i] * q_[i]) * hhat_[n + N][i];
    }
    out[n + N] = s;
  }
  return out;
}

double RotorWignerOracle::regularized_density(double p, double alpha, double eta) const {
  const int N = cfg_.harmonics;
  const std::vector<cplx> I = mode_integrals(p, eta);
  cplx s = 0;
  for (int n = -N; n <= N; ++n) s += std::pow(cplx(0, 1), n) * std::polar(1.0, -n * alpha) * I[n + N];
  return s.real() / (kPi * kPi);
}

RotorWignerOracle::Value RotorWignerOracle::density(double p, double alpha) const {
  if (!(p > 0)) throw DomainError("RotorWignerOracle: p must be > 0");
  const int N = cfg_.harmonics;
  // Bessel values shared by the three regularizations.
  std::vector<std::vector<double>> J(N + 1, std::vector<double>(q_.size()));
  for (int n = 0; n <= N; ++n)
    for (std::size_t i = 0; i < q_.size(); ++i) J[n][i] = boost::math::cyl_bessel_j(n, 2 * p * q_[i]);
  cplx R[3];
  for (int k = 0; k < 3; ++k) {
    const double eta = cfg_.eta0 / (1 << k);
    cplx tot = 0;
    for (int n = -N; n <= N; ++n) {
      const int an = std::abs(n);
      const double sign = (n < 0 && an % 2) ? -1 : 1;
      cplx s = 0;
      for (std::size_t i = 0; i < q_.size(); ++i)
        s += wq_[i] * q_[i] * J[an][i] * std::exp(-eta * q_[i] * q_[i]) * hhat_[n + N][i];
      tot += std::pow(cplx(0, 1), n) * std::polar(1.0, -n * alpha) * sign * s;
    }
    R[k] = tot / (kPi * kPi);
  }
  const cplx r1a = 2.0 * R[1] - R[0], r1b = 2.0 * R[2] - R[1];
  const cplx rho = (4.0 * r1b - r1a) / 3.0;
  return {rho.real(), std::abs(rho - r1b), rho.imag()};
}

std::pair<double, double> RotorWignerOracle::harmonics(double p) const {
  const Rule ar = periodic_trapezoid(4 * cfg_.harmonics + 4);
  double mean = 0, c1 = 0;
  for (std::size_t j = 0; j < ar.size(); ++j) {
    const double v = density(p, ar.x[j]).value;
    mean += v / ar.size();
    c1 += 2 * v * std::cos(ar.x[j]) / ar.size();
  }
  return {mean, c1};
}

double RotorWignerOracle::delta_weight() const { return delta_; }

StationarityResidual stationarity_residual(int l, int m, double theta, double phi, double q_theta, double q_phi,
                                           double r) {
  check_state(l, m);
  const ShiftedAngles sh = shifted_coords({r, theta, phi}, {0, q_theta, q_phi});
  const double h = 1e-4;
  auto Y = [&](double t, double f) { return spherical_harmonic(l, m, t, f); };
  auto d_theta = [&](double t, double f) { return (Y(t + h, f) - Y(t - h, f)) / (2 * h); };
  auto lap = [&](double t, double f) {
    const cplx yy = (Y(t + h, f) - 2.0 * Y(t, f) + Y(t - h, f)) / (h * h);
    const double st = std::sin(t);
    return yy + std::cos(t) / st * d_theta(t, f) - double(m * m) / (st * st) * Y(t, f);
  };
  const double tp = sh.theta_plus, fp = sh.phi_plus, tm = sh.theta_minus, fm = sh.phi_minus;
  const cplx th_p = std::conj(Y(tp, fp)), th_m = Y(tm, fm);
  StationarityResidual res;
  res.f1 = th_p * lap(tm, fm) - th_m * std::conj(lap(tp, fp));
  const double sp = std::sin(tp), sm = std::sin(tm);
  const cplx a = th_p * d_theta(tm, fm) / sm;              // Theta* d Theta / sin, minus branch
  const cplx b = th_m * std::conj(d_theta(tp, fp)) / sp;   // Theta d Theta* / sin, plus branch
  const cplx dphi_m = cplx(0, m) * th_m, dphi_p = cplx(0, -m) * th_p;
  const double q2 = q_theta * q_theta + q_phi * q_phi;
  res.f2 = -q2 / (2 * r) * (std::cos(tp) + std::cos(tm)) * (a - b) - r / 2 * (std::cos(tp) - std::cos(tm)) * (a + b) +
           q_phi * std::sin(theta) * (th_p * dphi_m / (sm * sm) + th_m * dphi_p / (sp * sp));
  return res;
}

}  // namespace psd
