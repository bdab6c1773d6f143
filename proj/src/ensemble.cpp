#include "psd/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "psd/parallel.hpp"
#include "psd/quadrature.hpp"

namespace psd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kMaxAttempts = 10'000'000;

double polynomial_envelope(const QuantumLabel& q, double variance) {
  // |Ez| <= E, L2 <= E^2 / 4, |Lz| <= E / 2, so |P| <= sum_k b_k E^k.
  std::vector<double> b(16, 0.0);
  for (const auto& t : table_row(q)) {
    const int k = t.e + t.ez + 2 * t.l2 + t.lz;
    b[k] += std::abs(t.coef) * std::pow(0.25, t.l2) * std::pow(0.5, t.lz);
  }
  // sup_E E^k exp(-c E) = (k / c)^k e^-k
  const double c = 1 - 1 / (2 * variance);
  double M = b[0];
  for (int k = 1; k < int(b.size()); ++k)
    if (b[k] > 0) M += b[k] * std::pow(k / c, k) * std::exp(-k);
  return M;
}

std::size_t recheck(const std::vector<int>& signs, const std::function<double(std::size_t)>& value) {
  std::vector<double> bad(signs.size());
  parallel_for(signs.size(), [&](std::size_t i) {
    const double v = value(i);
    bad[i] = (v > 0 ? 1 : v < 0 ? -1 : 0) != signs[i];
  });
  return std::size_t(pairwise_sum(bad));
}

void check_acceptance(const ProposalMeta& m) {
  if (m.acceptance_rate() < 1e-4) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s: acceptance rate %.3g below 1e-4 (envelope %.4g, %llu proposals)",
                  m.sampler.c_str(), m.acceptance_rate(), m.envelope, (unsigned long long)m.proposals);
    throw SamplingError(buf);
  }
}

}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double rad = std::sqrt(-2 * std::log(uniform_open())), ang = 2 * kPi * uniform();
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

SignedEnsemble sample_cartesian(const std::function<double(const Vec3&, const Vec3&)>& rho, double variance,
                                double envelope, std::size_t n, std::uint64_t seed, const std::string& id) {
  if (!(variance > 0) || !(envelope > 0)) throw DomainError("sample_cartesian: bad proposal");
  SignedEnsemble e;
  e.space = PhaseSpace::cartesian;
  e.density_id = id;
  e.seed = seed;
  e.cartesian.resize(n);
  e.signs.resize(n);
  std::vector<std::uint64_t> tries(n), viol(n);
  const double sd = std::sqrt(variance);
  parallel_for(n, [&](std::size_t i) {
    CounterRng rng(seed, i);
    for (std::uint64_t k = 1; k <= kMaxAttempts; ++k) {
      Vec3 r{sd * rng.normal(), sd * rng.normal(), sd * rng.normal()};
      Vec3 p{sd * rng.normal(), sd * rng.normal(), sd * rng.normal()};
      const double g = std::exp(-(dot(r, r) + dot(p, p)) / (2 * variance));
      const double v = rho(r, p);
      const double ratio = std::abs(v) / (envelope * g);
      if (ratio > 1) ++viol[i];
      if (rng.uniform() < ratio) {
        e.cartesian[i] = {r, p};
        e.signs[i] = v > 0 ? 1 : -1;
        tries[i] = k;
        return;
      }
    }
    tries[i] = kMaxAttempts + 1;
  });
  e.meta.sampler = "gaussian-rejection";
  e.meta.proposal_scale = variance;
  e.meta.envelope = envelope;
  for (std::size_t i = 0; i < n; ++i) {
    if (tries[i] > kMaxAttempts) throw SamplingError(id + ": rejection sampler hit the attempt cap");
    e.meta.proposals += tries[i];
    e.meta.bound_violations += viol[i];
  }
  e.meta.accepted = n;
  check_acceptance(e.meta);
  return e;
}

SignedEnsemble sample_oscillator(const QuantumLabel& q, std::size_t n, std::uint64_t seed) {
  double best_var = 1, best_cost = INFINITY, best_M = 0;
  for (double var : {0.75, 1.0, 1.25, 1.5, 2.0, 2.5}) {
    const double M = polynomial_envelope(q, var);
    const double cost = M * var * var * var;  // inverse acceptance up to a state constant
    if (cost < best_cost) {
      best_cost = cost;
      best_var = var;
      best_M = M;
    }
  }
  constexpr double pi3 = kPi * kPi * kPi;
  return sample_cartesian([q](const Vec3& r, const Vec3& p) { return density(q, r, p) * pi3; }, best_var, best_M,
                          n, seed, "osc:" + to_string(q));
}

SignedEnsemble sample_rotor(int l, int m, std::size_t n, std::uint64_t seed, RotorForm form) {
  if (form == RotorForm::raw) throw DomainError("sample_rotor: the raw form is not sampled");
  if (!rotor_state_supported(l, m)) rotor_delta_weight(l, m, 0);  // throws
  // Atom bound: delta weight is quadratic in sin^2, a fine scan with a margin is safe.
  double wmax = 0;
  for (int k = 0; k <= 10000; ++k) {
    const double th = std::asin(std::sqrt(k / 10000.0));
    wmax = std::max(wmax, std::abs(rotor_delta_weight(l, m, th)));
  }
  const double Ba = 4 * kPi * wmax * 1.001;
  // Smooth bound over the proposal density exp(-p) / (8 pi^2 p), using |u| <= 1.
  double Bs = 0;
  if (l > 0) {
    const auto& terms = rotor_invariant_terms(l, m, form);
    for (int k = 0; k <= 40000; ++k) {
      const double p = k < 20000 ? std::pow(10.0, -8 + 8.0 * k / 20000) : 1 + 59.0 * (k - 20000) / 20000;
      double k0, k1;
      bessel_k01(2 * p, k0, k1);
      double s = 0;
      for (const auto& t : terms) {
        double c = 0;
        for (double x : t.c) c += std::abs(x);
        s += std::pow(p, t.p_power) * (t.bessel == 0 ? k0 : k1) * c;
      }
      Bs = std::max(Bs, 8 * p * std::exp(p) * s);
    }
    Bs *= 1.05;
  }
  const double M = Ba + Bs, q_atom = Ba / M;

  SignedEnsemble e;
  e.space = PhaseSpace::rotor;
  e.density_id = "rotor:" + std::to_string(l) + "," + std::to_string(m);
  e.seed = seed;
  e.angular.resize(n);
  e.signs.resize(n);
  std::vector<std::uint64_t> tries(n), viol(n), atom(n);
  parallel_for(n, [&](std::size_t i) {
    CounterRng rng(seed, i);
    for (std::uint64_t k = 1; k <= kMaxAttempts; ++k) {
      const bool is_atom = rng.uniform() < q_atom;
      const double th = std::acos(std::clamp(2 * rng.uniform() - 1, -1.0, 1.0));
      const double ph = 2 * kPi * rng.uniform();
      double v, ratio;
      AngularPhasePoint pt{th, ph, 0, 0};
      if (is_atom) {
        v = rotor_delta_weight(l, m, th);
        ratio = std::abs(v) * 4 * kPi / (q_atom * M);
      } else {
        const double p = -std::log(rng.uniform_open());
        const double a = 2 * kPi * rng.uniform();
        pt.p_theta = p * std::sin(a);
        pt.p_phi = p * std::cos(a);
        double k0, k1;
        bessel_k01(2 * p, k0, k1);
        v = rotor_smooth_polar(l, m, th, p, a, form, k0, k1);
        ratio = std::abs(v) * 8 * kPi * kPi * p * std::exp(p) / ((1 - q_atom) * M);
      }
      if (ratio > 1) ++viol[i];
      if (rng.uniform() < ratio) {
        e.angular[i] = pt;
        e.signs[i] = v > 0 ? 1 : -1;
        tries[i] = k;
        atom[i] = is_atom;
        return;
      }
    }
    tries[i] = kMaxAttempts + 1;
  });
  e.meta.sampler = "rotor-mixture-rejection";
  e.meta.proposal_scale = q_atom;
  e.meta.envelope = M;
  for (std::size_t i = 0; i < n; ++i) {
    if (tries[i] > kMaxAttempts) throw SamplingError(e.density_id + ": rejection sampler hit the attempt cap");
    e.meta.proposals += tries[i];
    e.meta.bound_violations += viol[i];
    e.meta.atoms += atom[i];
  }
  e.meta.accepted = n;
  check_acceptance(e.meta);
  return e;
}

Estimate estimate_values(const std::vector<double>& f, const std::vector<int>& signs) {
  const std::size_t N = signs.size();
  if (f.size() != N || N < 2) throw DomainError("estimate: need matching values and at least two points");
  const std::size_t G = std::min<std::size_t>(N, 1000);
  std::vector<double> bf(G), bs(G);
  for (std::size_t b = 0; b < G; ++b) {
    const std::size_t lo = b * N / G, hi = (b + 1) * N / G;
    std::vector<double> a(hi - lo), c(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      a[i - lo] = signs[i] * f[i];
      c[i - lo] = signs[i];
    }
    bf[b] = pairwise_sum(a);
    bs[b] = pairwise_sum(c);
  }
  const double Sf = pairwise_sum(bf), Ss = pairwise_sum(bs);
  Estimate est;
  est.n_effective = Ss * Ss / double(N);
  if (est.n_effective < 10)
    throw DegenerateSigns("sum of signs " + std::to_string(Ss) + " over " + std::to_string(N) +
                          " points is too small for a ratio estimate; increase N");
  est.value = Sf / Ss;
  std::vector<double> th(G);
  for (std::size_t b = 0; b < G; ++b) {
    const double den = Ss - bs[b];
    if (den == 0) throw DegenerateSigns("a jackknife block removes the whole sign sum; increase N");
    th[b] = (Sf - bf[b]) / den;
  }
  const double mean = pairwise_sum(th) / double(G);
  std::vector<double> d(G);
  for (std::size_t b = 0; b < G; ++b) d[b] = (th[b] - mean) * (th[b] - mean);
  est.std_error = std::sqrt(double(G - 1) / double(G) * pairwise_sum(d));
  return est;
}

Estimate estimate(const SignedEnsemble& e, const std::function<double(const CartesianPoint&)>& f) {
  if (e.space != PhaseSpace::cartesian) throw DomainError("estimate: ensemble is not Cartesian");
  std::vector<double> v(e.size());
  parallel_for(v.size(), [&](std::size_t i) { v[i] = f(e.cartesian[i]); });
  return estimate_values(v, e.signs);
}

Estimate estimate(const SignedEnsemble& e, const std::function<double(const AngularPhasePoint&)>& f) {
  if (e.space != PhaseSpace::rotor) throw DomainError("estimate: ensemble is not a rotor ensemble");
  std::vector<double> v(e.size());
  parallel_for(v.size(), [&](std::size_t i) { v[i] = f(e.angular[i]); });
  return estimate_values(v, e.signs);
}

SignedEnsemble propagate(const SignedEnsemble& e, Flow flow, double t) {
  const bool rotor = flow == Flow::rotor;
  if (rotor != (e.space == PhaseSpace::rotor)) throw DomainError("propagate: flow does not match the phase space");
  SignedEnsemble out = e;
  if (rotor) {
    parallel_for(e.size(), [&](std::size_t i) { out.angular[i] = characteristics_evolve(e.angular[i], t); });
  } else {
    parallel_for(e.size(), [&](std::size_t i) {
      const auto& c = e.cartesian[i];
      if (flow == Flow::oscillator) {
        const auto [r, p] = classical_evolve(c.r, c.p, t);
        out.cartesian[i] = {r, p};
      } else {
        out.cartesian[i] = {c.r + t * c.p, c.p};
      }
    });
  }
  return out;
}

std::vector<Observable> default_observables(PhaseSpace space) {
  if (space == PhaseSpace::cartesian) {
    return {
        {"x2", [](const CartesianPoint& c) { return c.r.x * c.r.x; }, {}},
        {"z2", [](const CartesianPoint& c) { return c.r.z * c.r.z; }, {}},
        {"px2", [](const CartesianPoint& c) { return c.p.x * c.p.x; }, {}},
        {"pz2", [](const CartesianPoint& c) { return c.p.z * c.p.z; }, {}},
        {"r.p", [](const CartesianPoint& c) { return dot(c.r, c.p); }, {}},
        {"L2", [](const CartesianPoint& c) { const Vec3 L = cross(c.r, c.p); return dot(L, L); }, {}},
        {"Lz", [](const CartesianPoint& c) { return cross(c.r, c.p).z; }, {}},
    };
  }
  return {
      {"cos2theta", {}, [](const AngularPhasePoint& a) { return std::cos(a.theta) * std::cos(a.theta); }},
      {"x2", {}, [](const AngularPhasePoint& a) {
         const double x = std::sin(a.theta) * std::cos(a.phi);
         return x * x;
       }},
      {"ptheta2", {}, [](const AngularPhasePoint& a) { return a.p_theta * a.p_theta; }},
      {"pphi2", {}, [](const AngularPhasePoint& a) { return a.p_phi * a.p_phi; }},
      {"L2", {}, [](const AngularPhasePoint& a) { return a.p_theta * a.p_theta + a.p_phi * a.p_phi; }},
      {"Lz", {}, [](const AngularPhasePoint& a) { return a.p_phi * std::sin(a.theta); }},
  };
}

std::vector<StationarityRow> propagate_and_reestimate(const SignedEnsemble& e, Flow flow, double t,
                                                      const std::vector<Observable>& observables) {
  const SignedEnsemble moved = propagate(e, flow, t);
  std::vector<StationarityRow> rows;
  for (const auto& o : observables) {
    StationarityRow r;
    r.observable = o.name;
    if (e.space == PhaseSpace::cartesian) {
      r.before = estimate(e, o.cartesian);
      r.after = estimate(moved, o.cartesian);
    } else {
      r.before = estimate(e, o.angular);
      r.after = estimate(moved, o.angular);
    }
    r.combined_sigma = std::hypot(r.before.std_error, r.after.std_error);
    r.pass = std::abs(r.after.value - r.before.value) < 3 * r.combined_sigma ||
             std::abs(r.after.value - r.before.value) <= 1e-12 * std::max(1.0, std::abs(r.before.value));
    rows.push_back(r);
  }
  return rows;
}

std::size_t recheck_signs(const SignedEnsemble& e, const std::function<double(const CartesianPoint&)>& rho) {
  return recheck(e.signs, [&](std::size_t i) { return rho(e.cartesian[i]); });
}

std::size_t recheck_rotor_signs(const SignedEnsemble& e, int l, int m, RotorForm form) {
  return recheck(e.signs, [&](std::size_t i) {
    const auto& a = e.angular[i];
    if (a.p_theta == 0 && a.p_phi == 0) return rotor_delta_weight(l, m, a.theta);
    return rotor_smooth(l, m, a, form);
  });
}

void write_ensemble(const SignedEnsemble& e, const std::string& stem,
                    const std::vector<std::pair<std::string, Estimate>>& estimates) {
  std::FILE* f = std::fopen((stem + ".csv").c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + stem + ".csv");
  if (e.space == PhaseSpace::cartesian) {
    std::fprintf(f, "x,y,z,px,py,pz,sign\n");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& c = e.cartesian[i];
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", c.r.x, c.r.y, c.r.z, c.p.x, c.p.y, c.p.z,
                   e.signs[i]);
    }
  } else {
    std::fprintf(f, "theta,phi,p_theta,p_phi,sign\n");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& a = e.angular[i];
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%d\n", a.theta, a.phi, a.p_theta, a.p_phi, e.signs[i]);
    }
  }
  std::fclose(f);

  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["density"] = e.density_id;
  j["seed"] = e.seed;
  j["n"] = e.size();
  j["sampler"] = {{"name", e.meta.sampler},
                  {"proposal_scale", e.meta.proposal_scale},
                  {"envelope", e.meta.envelope},
                  {"proposals", e.meta.proposals},
                  {"acceptance_rate", e.meta.acceptance_rate()},
                  {"bound_violations", e.meta.bound_violations},
                  {"atoms", e.meta.atoms}};
  for (const auto& [name, est] : estimates)
    j["estimates"][name] = {{"value", est.value}, {"std_error", est.std_error}, {"n_effective", est.n_effective}};
  std::ofstream(stem + ".json") << j.dump(2) << "\n";
}

}  // namespace psd
