#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "psd/ensemble.hpp"

using namespace psd;

namespace {

constexpr double kPi = std::numbers::pi;

double fraction_negative(const SignedEnsemble& e) {
  std::size_t neg = 0;
  for (int s : e.signs) neg += s < 0;
  return double(neg) / double(e.size());
}

}  // namespace

TEST_CASE("counter RNG is reproducible and stream-separated") {
  CounterRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
    CHECK(x != d.next());
  }
  CounterRng g(1, 0);
  double m = 0, v = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double z = g.normal();
    m += z / n;
    v += z * z / n;
  }
  CHECK(std::abs(m) < 5 / std::sqrt(double(n)));
  CHECK(std::abs(v - 1) < 5 * std::sqrt(2.0 / n));
}

TEST_CASE("ensembles do not depend on the thread count") {
  ::setenv("PSD_THREADS", "1", 1);
  const SignedEnsemble a = sample_oscillator({0, 1, 1}, 5000, 9);
  const SignedEnsemble ra = sample_rotor(2, 1, 5000, 9);
  ::setenv("PSD_THREADS", "5", 1);
  const SignedEnsemble b = sample_oscillator({0, 1, 1}, 5000, 9);
  const SignedEnsemble rb = sample_rotor(2, 1, 5000, 9);
  ::unsetenv("PSD_THREADS");
  CHECK(a.signs == b.signs);
  CHECK(a.meta.proposals == b.meta.proposals);
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i)
    same = same && a.cartesian[i].r.x == b.cartesian[i].r.x && a.cartesian[i].p.z == b.cartesian[i].p.z;
  for (std::size_t i = 0; i < ra.size(); ++i)
    same = same && ra.angular[i].theta == rb.angular[i].theta && ra.angular[i].p_phi == rb.angular[i].p_phi;
  CHECK(same);
  CHECK(ra.signs == rb.signs);
}

TEST_CASE("ground state is positive with the right energy") {
  const SignedEnsemble e = sample_oscillator({0, 0, 0}, 100000, 1);
  CHECK(fraction_negative(e) == 0);
  CHECK(e.meta.bound_violations == 0);
  const Estimate E = estimate(e, [](const CartesianPoint& c) { return dot(c.r, c.r) + dot(c.p, c.p); });
  CHECK(E.n_effective == doctest::Approx(100000));
  CHECK(std::abs(E.value - 3) < 3 * E.std_error);
  // Var(E) = 3, six squared normals of variance 1/2
  CHECK(E.std_error == doctest::Approx(std::sqrt(3.0 / 100000)).epsilon(0.1));
}

TEST_CASE("negative mass of the first z excitation") {
  const QuantumLabel q{0, 1, 0};
  // rho = (2 Ez - 1) exp(-E) / pi^3, with Ez exponentially distributed under the Gaussian.
  CHECK(density(q, {0, 0, 0}, {0, 0, 0}) == doctest::Approx(-1 / (kPi * kPi * kPi)));
  CHECK(density(q, {0, 0, 1}, {0, 0, 0}) == doctest::Approx(std::exp(-1.0) / (kPi * kPi * kPi)));
  const double neg = 2 * std::exp(-0.5) - 1, pos = 2 * std::exp(-0.5);
  const double expected = neg / (neg + pos);
  const std::size_t n = 100000;
  const SignedEnsemble e = sample_oscillator(q, n, 5);
  const double sigma = std::sqrt(expected * (1 - expected) / n);
  CHECK(std::abs(fraction_negative(e) - expected) < 4 * sigma);
  CHECK(e.meta.bound_violations == 0);
  CHECK(recheck_signs(e, [&](const CartesianPoint& c) { return density(q, c.r, c.p); }) == 0);
  const Estimate ez = estimate(e, [](const CartesianPoint& c) { return c.r.z * c.r.z + c.p.z * c.p.z; });
  CHECK(std::abs(ez.value - 3) < 4 * ez.std_error);
}

TEST_CASE("ratio estimator") {
  std::vector<int> s(1000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i % 3 == 0 ? -1 : 1;
  const Estimate c = estimate_values(std::vector<double>(s.size(), 2.5), s);
  CHECK(c.value == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(c.std_error < 1e-12);
  CHECK(c.n_effective == doctest::Approx(332.0 * 332.0 / 1000).epsilon(0.01));
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i % 2 ? -1 : 1;
  CHECK_THROWS_AS(estimate_values(std::vector<double>(s.size(), 1.0), s), DegenerateSigns);
}

TEST_CASE("rotor atom carries the integrated delta weight") {
  for (auto [l, m] : {std::pair{0, 0}, {1, 0}, {1, 1}, {2, 1}}) {
    double delta_mass = 0;
    const int N = 400;
    for (int k = 0; k < N; ++k) {
      const double th = (k + 0.5) * kPi / N;
      delta_mass += 2 * kPi * rotor_delta_weight(l, m, th) * std::sin(th) * kPi / N;
    }
    const SignedEnsemble e = sample_rotor(l, m, 100000, 11);
    CHECK(e.meta.bound_violations == 0);
    CHECK(recheck_rotor_signs(e, l, m) == 0);
    const Estimate a = estimate(e, [](const AngularPhasePoint& x) { return x.p_theta == 0 && x.p_phi == 0 ? 1.0 : 0.0; });
    if (l == 0) CHECK(a.value == 1);
    else CHECK(std::abs(a.value - delta_mass) < 4 * a.std_error);
    const Estimate lz = estimate(e, [](const AngularPhasePoint& x) { return x.p_phi * std::sin(x.theta); });
    CHECK(std::abs(lz.value - m) < 4 * lz.std_error + 1e-12);
  }
  CHECK_THROWS(sample_rotor(1, 1, 10, 1, RotorForm::raw));
}

TEST_CASE("stationary under its own flow, not under free flight") {
  const SignedEnsemble e = sample_oscillator({0, 1, 1}, 100000, 13);
  for (const auto& row : propagate_and_reestimate(e, Flow::oscillator, 1.3, default_observables(PhaseSpace::cartesian)))
    CHECK_MESSAGE(row.pass, row.observable);
  const SignedEnsemble g = sample_oscillator({0, 0, 0}, 100000, 13);
  const double t = 1.5;
  const SignedEnsemble f = propagate(g, Flow::free, t);
  const Estimate x2 = estimate(f, [](const CartesianPoint& c) { return c.r.x * c.r.x; });
  CHECK(std::abs(x2.value - (0.5 + t * t / 2)) < 4 * x2.std_error);
  bool failed = false;
  for (const auto& row : propagate_and_reestimate(g, Flow::free, t, default_observables(PhaseSpace::cartesian)))
    if (row.observable == "x2") failed = !row.pass;
  CHECK(failed);
  const SignedEnsemble r = sample_rotor(1, 1, 50000, 13);
  for (const auto& row : propagate_and_reestimate(r, Flow::rotor, 2.0, default_observables(PhaseSpace::rotor)))
    CHECK_MESSAGE(row.pass, row.observable);
}

TEST_CASE("sampler gives up on a hopeless envelope") {
  auto rho = [](const Vec3& r, const Vec3& p) { return std::exp(-dot(r, r) - dot(p, p)) / (kPi * kPi * kPi); };
  CHECK_THROWS_AS(sample_cartesian(rho, 1, 1e6, 20, 1, "gauss"), SamplingError);
  const SignedEnsemble ok = sample_cartesian(rho, 1, 1 / (kPi * kPi * kPi), 2000, 1, "gauss");
  CHECK(ok.meta.bound_violations == 0);
  CHECK(ok.meta.acceptance_rate() == doctest::Approx(0.125).epsilon(0.1));
}

TEST_CASE("ensemble files") {
  const SignedEnsemble e = sample_rotor(1, 0, 200, 3);
  const auto stem = (std::filesystem::temp_directory_path() / "psd_test_ensemble").string();
  write_ensemble(e, stem, {{"Lz", {0.01, 0.02, 150}}});
  std::ifstream csv(stem + ".csv");
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  CHECK(line == "theta,phi,p_theta,p_phi,sign");
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 200);
  const auto j = nlohmann::json::parse(std::ifstream(stem + ".json"));
  CHECK(j.contains("schema_version"));
  CHECK(j.at("seed").get<std::uint64_t>() == 3);
  std::filesystem::remove(stem + ".csv");
  std::filesystem::remove(stem + ".json");
}
