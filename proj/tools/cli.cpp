#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "psd/ensemble.hpp"
#include "psd/oscillator.hpp"
#include "psd/soft_rotor.hpp"
#include "psd/true_rotor.hpp"
#include "psd/verify.hpp"

using json = nlohmann::ordered_json;
using namespace psd;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { kOk = 0, kUsage = 1, kDisagree = 2, kDegenerate = 3, kNonStationary = 4 };

struct RunConfig {
  std::string command;
  std::string state;
  std::string form = "derived";
  std::string n;  // empty: the command default
  std::uint64_t seed = 42;
  double t = 2.0;
  double a = 0.05, r0 = 1;
  double p_max = 10;
  int points = 0;  // 0 means the command's own default
  unsigned threads = 0;
  std::string out;
  std::string json_out;
  int criterion = 0;

  json to_json() const {
    return {{"command", command}, {"state", state}, {"form", form},     {"n", n},          {"seed", seed},
            {"t", t},             {"a", a},         {"r0", r0},         {"p_max", p_max},  {"points", points},
            {"threads", threads}, {"out", out}};
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t parse_count(const std::string& s, std::size_t fallback) {
  if (s.empty()) return fallback;
  double v = 0;
  try {
    v = std::stod(s);
  } catch (...) {
    throw UsageError("--n must be a number, got '" + s + "'");
  }
  if (!(v >= 1) || v != std::floor(v)) throw UsageError("--n must be a positive integer");
  return std::size_t(v);
}

RotorForm parse_form(const std::string& s) {
  if (s == "derived") return RotorForm::derived;
  if (s == "transcribed") return RotorForm::transcribed;
  if (s == "raw") return RotorForm::raw;
  throw UsageError("--form must be derived, transcribed or raw");
}

json report(const RunConfig& cfg) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = cfg.to_json();
  return j;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << "\n";
  }
}

// CSV goes to --out when given, else stdout.
struct CsvSink {
  explicit CsvSink(const std::string& path) : file_(path.empty() ? stdout : std::fopen(path.c_str(), "w")) {
    if (!file_) throw std::runtime_error("cannot write " + path);
  }
  ~CsvSink() {
    if (file_ != stdout) std::fclose(file_);
  }
  std::FILE* get() const { return file_; }

 private:
  std::FILE* file_;
};

int cmd_table(const RunConfig& cfg, const std::string& which) {
  int w = 0;
  if (which == "I" || which == "1") w = 1;
  if (which == "II" || which == "2") w = 2;
  if (!w) throw UsageError("table must be I or II");
  const int points = cfg.points > 0 ? cfg.points : 100;
  const auto rows = table_rows(w, points, cfg.seed);
  CsvSink out(cfg.out);
  std::fprintf(out.get(), "n,l,mu,Lz_closed,Lz_oracle,L2_closed,L2_oracle,max_density_discrepancy\n");
  int code = kOk;
  for (const auto& r : rows) {
    std::fprintf(out.get(), "%d,%d,%d,%.12f,%.12f,%.12f,%.12f,%.3e\n", r.label.n, r.label.l, r.label.mu, r.lz_closed,
                 r.lz_oracle, r.l2_closed, r.l2_oracle, r.max_density_discrepancy);
    const double l2 = r.label.l * (r.label.l + 1) + 1.5;
    const bool ok = std::abs(r.lz_closed - r.lz_oracle) <= 1e-8 && std::abs(r.l2_closed - r.l2_oracle) <= 1e-8 &&
                    std::abs(r.l2_oracle - l2) <= 1e-8 && r.max_density_discrepancy <= 1e-6;
    if (!ok) {
      std::fprintf(stderr, "row (%s) disagrees: Lz %.12f vs %.12f, L2 %.12f vs %.12f, density %.3e\n",
                   to_string(r.label).c_str(), r.lz_closed, r.lz_oracle, r.l2_closed, r.l2_oracle,
                   r.max_density_discrepancy);
      code = kDisagree;
    }
  }
  return code;
}

int cmd_rotor(const RunConfig& cfg, const std::string& sub, int l, int m) {
  const RotorForm form = parse_form(cfg.form);
  json j = report(cfg);
  j["l"] = l;
  j["m"] = m;
  if (sub == "moments") {
    const MomentReport r = rotor_moments(l, m, form);
    j["normalization"] = r.normalization;
    j["L2"] = r.l2;
    j["Lz"] = r.lz;
    emit(j, cfg.out);
    return kOk;
  }
  if (sub == "marginal") {
    const int points = cfg.points > 0 ? cfg.points : 33;
    CsvSink out(cfg.out);
    std::fprintf(out.get(), "theta,phi,marginal,abs_Y_squared,difference\n");
    double worst = 0;
    for (int i = 0; i < points; ++i) {
      const double th = std::numbers::pi * (i + 0.5) / points, ph = 0.0;
      const double v = rotor_marginal(l, m, th, ph, form);
      const double y = std::norm(spherical_harmonic(l, m, th, ph));
      worst = std::max(worst, std::abs(v - y));
      std::fprintf(out.get(), "%.12f,%.12f,%.15e,%.15e,%.3e\n", th, ph, v, y, v - y);
    }
    if (worst > 1e-8) {
      std::fprintf(stderr, "marginal differs from |Y|^2 by %.3e\n", worst);
      return kDisagree;
    }
    return kOk;
  }
  if (sub == "audit") {
    const RotorAudit a = rotor_audit(l, m, cfg.seed);
    j["pass"] = a.pass;
    j["max_point_error"] = a.max_point_error;
    j["max_projection_error"] = a.max_projection_error;
    j["delta_weight_error"] = a.delta_oracle_max_error;
    for (const auto& p : a.points)
      j["points"].push_back({{"theta", p.theta},
                             {"p", p.p},
                             {"alpha", p.alpha},
                             {"numerical", p.oracle},
                             {"numerical_error", p.oracle_error},
                             {"closed_full", p.raw}});
    for (const auto& p : a.projections)
      j["projections"].push_back({{"theta", p.theta},
                                  {"p", p.p},
                                  {"mean_numerical", p.mean_oracle},
                                  {"mean_closed", p.mean_closed},
                                  {"cos_numerical", p.cos_oracle},
                                  {"cos_closed", p.cos_closed}});
    emit(j, cfg.out);
    return a.pass ? kOk : kDisagree;
  }
  // pxsq
  const PxSquaredResult px = px_squared_moment(form);
  const double printed = px_squared_printed();
  j.erase("l");
  j.erase("m");
  j["printed"] = printed;
  j["quadrature"] = px.value;
  j["quadrature_coarse"] = px.coarse;
  j["quadrature_relative_change"] = px.rel_change;
  j["closed_form"] = px_squared_analytic();
  j["py_squared"] = px.py_squared;
  j["relative_difference"] = std::abs(px.value - printed) / printed;
  j["erratum_candidate"] = std::abs(px.value - printed) / printed > 1e-3;
  emit(j, cfg.out);
  return kOk;
}

struct StateId {
  enum Kind { osc, rotor, free } kind;
  QuantumLabel q;
  int l = 0, m = 0;
};

StateId parse_state(const std::string& s) {
  std::smatch mt;
  if (std::regex_match(s, mt, std::regex(R"(osc:(\d+),(\d+),(-?\d+))")))
    return {StateId::osc, {std::stoi(mt[1]), std::stoi(mt[2]), std::stoi(mt[3])}};
  if (std::regex_match(s, mt, std::regex(R"(rotor:(\d+),(-?\d+))")))
    return {StateId::rotor, {}, std::stoi(mt[1]), std::stoi(mt[2])};
  if (s == "free") return {StateId::free, {0, 0, 0}};
  throw UsageError("state must be osc:n,l,mu, rotor:l,m or free");
}

SignedEnsemble draw(const StateId& id, std::size_t n, std::uint64_t seed, RotorForm form) {
  if (id.kind == StateId::rotor) return sample_rotor(id.l, id.m, n, seed, form);
  SignedEnsemble e = sample_oscillator(id.q, n, seed);
  if (id.kind == StateId::free) e.density_id = "free";
  return e;
}

json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"n_effective", e.n_effective}};
}

int cmd_sample(const RunConfig& cfg) {
  const StateId id = parse_state(cfg.state);
  const std::size_t n = parse_count(cfg.n, 100000);
  const SignedEnsemble e = draw(id, n, cfg.seed, parse_form(cfg.form));
  std::vector<std::pair<std::string, Estimate>> est;
  for (const auto& o : default_observables(e.space))
    est.emplace_back(o.name, e.space == PhaseSpace::cartesian ? estimate(e, o.cartesian) : estimate(e, o.angular));
  if (e.space == PhaseSpace::cartesian)
    est.emplace_back("E", estimate(e, [](const CartesianPoint& c) { return dot(c.r, c.r) + dot(c.p, c.p); }));
  json j = report(cfg);
  j["density"] = e.density_id;
  j["acceptance_rate"] = e.meta.acceptance_rate();
  for (const auto& [name, v] : est) j["estimates"][name] = estimate_json(v);
  if (!cfg.out.empty()) {
    write_ensemble(e, cfg.out, est);
    j["files"] = {cfg.out + ".csv", cfg.out + ".json"};
  }
  emit(j, cfg.json_out);
  return kOk;
}

int cmd_evolve(const RunConfig& cfg) {
  const StateId id = parse_state(cfg.state);
  const std::size_t n = parse_count(cfg.n, 100000);
  const SignedEnsemble e = draw(id, n, cfg.seed, parse_form(cfg.form));
  const Flow flow = id.kind == StateId::rotor ? Flow::rotor : id.kind == StateId::osc ? Flow::oscillator : Flow::free;
  const auto rows = propagate_and_reestimate(e, flow, cfg.t, default_observables(e.space));
  json j = report(cfg);
  j["density"] = e.density_id;
  bool pass = true;
  for (const auto& r : rows) {
    pass = pass && r.pass;
    j["observables"].push_back({{"name", r.observable},
                                {"before", estimate_json(r.before)},
                                {"after", estimate_json(r.after)},
                                {"combined_sigma", r.combined_sigma},
                                {"pass", r.pass}});
  }
  j["verdict"] = pass ? "PASS" : "FAIL";
  if (!cfg.out.empty()) {
    std::vector<std::pair<std::string, Estimate>> est;
    for (const auto& r : rows) {
      est.emplace_back(r.observable, r.before);
      est.emplace_back(r.observable + "@t", r.after);
    }
    write_ensemble(e, cfg.out, est);
  }
  emit(j, cfg.json_out);
  return pass ? kOk : kNonStationary;
}

int cmd_figure1(const RunConfig& cfg) {
  const SoftRotorParams prm{cfg.a, cfg.r0, 1};
  for (const auto& w : validate(prm)) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const int points = cfg.points > 0 ? cfg.points : 401;
  CsvSink out(cfg.out);
  std::fprintf(out.get(), "p,density\n");
  for (const auto& r : figure1_grid(prm, cfg.p_max, points)) std::fprintf(out.get(), "%.10f,%.15e\n", r.p, r.density);
  return kOk;
}

int cmd_soft(const RunConfig& cfg, const std::string& sub) {
  const SoftRotorParams prm{cfg.a, cfg.r0, 1};
  for (const auto& w : validate(prm)) std::fprintf(stderr, "warning: %s\n", w.c_str());
  CsvSink out(cfg.out);
  if (sub == "kernel") {
    const int points = cfg.points > 0 ? cfg.points : 241;
    std::fprintf(out.get(), "s,F,F1,F2\n");
    for (int i = 0; i < points; ++i) {
      const double s = kSoftKernelSMax * i / (points - 1);
      std::fprintf(out.get(), "%.10f,%.15e,%.15e,%.15e\n", s, kernel_F(s), kernel_F1(s), kernel_F2(s));
    }
    return kOk;
  }
  // relax: (1,0) marginal against theta at time t (in units of the relaxation time)
  const int points = cfg.points > 0 ? cfg.points : 91;
  const double t = cfg.t * soft_relaxation_time(prm);
  std::fprintf(out.get(), "theta,t,marginal,marginal_closed\n");
  for (int i = 0; i < points; ++i) {
    const double th = std::numbers::pi * i / (points - 1);
    std::fprintf(out.get(), "%.10f,%.10f,%.15e,%.15e\n", th, t, marginal_relaxation(prm, th, t),
                 marginal_relaxation_closed(prm, th, t));
  }
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.mc_samples = parse_count(cfg.n, opt.mc_samples);
  if (cfg.points > 0) opt.table_points = cfg.points;
  std::vector<CriterionResult> results;
  auto run = [&](int k) {
    switch (k) {
      case 1: return verify_table(1, opt);
      case 2: return verify_table(2, opt);
      case 3: return verify_universal_offsets();
      case 4: return verify_soft_rotor();
      case 5: return verify_true_rotor(opt);
      case 6: return verify_px_squared();
      case 7: return verify_signed_monte_carlo(opt);
      default: return verify_stationarity(opt);
    }
  };
  if (cfg.criterion != 0 && (cfg.criterion < 1 || cfg.criterion > 8)) throw UsageError("--criterion must be 1..8");
  json j = report(cfg);
  j["config"]["mc_samples"] = opt.mc_samples;
  j["config"]["table_points"] = opt.table_points;
  bool all_pass = true, errata = false;
  for (int k = 1; k <= 8; ++k) {
    if (cfg.criterion && k != cfg.criterion) continue;
    const CriterionResult r = run(k);
    std::printf("[%s] %d. %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
    for (const auto& d : r.details) std::printf("      %s\n", d.c_str());
    for (const auto& e : r.errata) std::printf("      erratum candidate: %s\n", e.c_str());
    std::fflush(stdout);
    all_pass = all_pass && r.pass;
    errata = errata || !r.errata.empty();
    j["criteria"].push_back({{"id", r.id},
                             {"title", r.title},
                             {"pass", r.pass},
                             {"seconds", r.seconds},
                             {"details", r.details},
                             {"errata", r.errata}});
  }
  j["all_pass"] = all_pass;
  j["documented_errata"] = documented_errata();
  if (!cfg.json_out.empty()) emit(j, cfg.json_out);
  return all_pass && !errata ? kOk : kDisagree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space densities of angular-momentum states"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; flags given on the command line win");

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--n", cfg.n, "sample count, accepts 1e6 (sample/evolve: 1e5, verify: 1e6)");
  app.add_option("--t", cfg.t, "propagation time (soft relax: in units of the relaxation time)")
      ->capture_default_str();
  app.add_option("--form", cfg.form, "rotor closed form: derived | transcribed | raw")->capture_default_str();
  app.add_option("--a", cfg.a, "soft rotor radial width")->capture_default_str();
  app.add_option("--r0", cfg.r0, "soft rotor bond length")->capture_default_str();
  app.add_option("--pmax", cfg.p_max, "figure1 momentum range")->capture_default_str();
  app.add_option("--points", cfg.points, "grid or test-point count (command default when 0)");
  app.add_option("--threads", cfg.threads, "worker threads (default: PSD_THREADS or all cores)");
  app.add_option("--out", cfg.out, "output file (CSV commands) or file stem (sample, evolve)");
  app.add_option("--json", cfg.json_out, "write the JSON report here instead of stdout");

  std::string which;
  auto* table = app.add_subcommand("table", "reproduce table I or II against the oracle");
  table->add_option("which", which, "I or II")->required();

  int l = 0, m = 0;
  auto* rotor = app.add_subcommand("rotor", "true rigid rotor");
  rotor->require_subcommand(1);
  for (auto [name, help] : {std::pair{"moments", "norm, <L^2> and <Lz> by quadrature"},
                             {"marginal", "angular marginal against |Y_lm|^2 on a theta grid"},
                             {"audit", "closed forms against the numerical transform"}}) {
    auto* s = rotor->add_subcommand(name, help);
    s->add_option("l", l)->required();
    s->add_option("m", m)->required();
  }
  rotor->add_subcommand("pxsq", "<p_x^2> for (2,0) against the printed value");

  auto* sample = app.add_subcommand("sample", "draw a signed ensemble");
  sample->add_option("state", cfg.state, "osc:n,l,mu | rotor:l,m | free")->required();
  auto* evolve = app.add_subcommand("evolve", "sample, propagate and test stationarity");
  evolve->add_option("state", cfg.state, "osc:n,l,mu | rotor:l,m | free")->required();

  app.add_subcommand("figure1", "soft rotor ground-state density against p");
  auto* soft = app.add_subcommand("soft", "soft rotor kernels and relaxation");
  soft->require_subcommand(1);
  soft->add_subcommand("kernel", "F, F1, F2 on [0, 60]");
  soft->add_subcommand("relax", "(1,0) marginal against theta at --t relaxation times");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  bool all = false;
  verify->add_flag("--all", all, "run every check");
  verify->add_option("--criterion", cfg.criterion, "run one check (1..8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (cfg.threads > 0) setenv("PSD_THREADS", std::to_string(cfg.threads).c_str(), 1);

  try {
    if (*table) {
      cfg.command = "table " + which;
      return cmd_table(cfg, which);
    }
    if (*rotor) {
      for (auto* s : rotor->get_subcommands()) {
        cfg.command = "rotor " + s->get_name();
        if (s->get_name() != "pxsq") cfg.state = "rotor:" + std::to_string(l) + "," + std::to_string(m);
        return cmd_rotor(cfg, s->get_name(), l, m);
      }
    }
    if (*sample) {
      cfg.command = "sample";
      return cmd_sample(cfg);
    }
    if (*evolve) {
      cfg.command = "evolve";
      return cmd_evolve(cfg);
    }
    if (app.got_subcommand("figure1")) {
      cfg.command = "figure1";
      return cmd_figure1(cfg);
    }
    if (*soft) {
      const std::string sub = soft->get_subcommands().front()->get_name();
      cfg.command = "soft " + sub;
      return cmd_soft(cfg, sub);
    }
    if (*verify) {
      if (!all && cfg.criterion == 0) throw UsageError("verify needs --all or --criterion k");
      cfg.command = "verify";
      return cmd_verify(cfg);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const UnsupportedState& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  } catch (const DegenerateSigns& e) {
    std::fprintf(stderr, "degenerate signs: %s\n", e.what());
    return kDegenerate;
  } catch (const SamplingError& e) {
    std::fprintf(stderr, "sampler failure: %s\n", e.what());
    return kDegenerate;
  }
  return kUsage;
}
