#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "psd/coords.hpp"
#include "psd/oscillator.hpp"
#include "psd/true_rotor.hpp"

namespace psd {

// Rejection sampling gave up (acceptance below 1e-4, or an index hit the attempt cap).
struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sum of signs too small for a ratio estimate.
struct DegenerateSigns : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// splitmix64 on (seed, stream, counter). Each sample index gets its own stream,
// so results do not depend on how indices are spread over threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}
  std::uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform_open() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }  // (0, 1)
  double normal();

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0;
  bool has_spare_ = false;
};

enum class PhaseSpace { cartesian, rotor };

struct CartesianPoint {
  Vec3 r, p;
};

struct ProposalMeta {
  std::string sampler;
  double proposal_scale = 0;     // Gaussian variance (cartesian) or atom probability (rotor)
  double envelope = 0;           // bound M on |rho| / proposal
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t bound_violations = 0;  // proposals where |rho| / proposal exceeded M
  std::uint64_t atoms = 0;             // rotor: points drawn from the p = 0 atom
  double acceptance_rate() const { return proposals ? double(accepted) / double(proposals) : 0; }
};

struct SignedEnsemble {
  PhaseSpace space = PhaseSpace::cartesian;
  std::string density_id;
  std::uint64_t seed = 0;
  std::vector<CartesianPoint> cartesian;
  std::vector<AngularPhasePoint> angular;
  std::vector<int> signs;
  ProposalMeta meta;
  std::size_t size() const { return signs.size(); }
};

// Generic Cartesian sampler: proposal N(0, variance) on each of the six coordinates.
// `envelope` must bound |rho(r, p)| / exp(-(|r|^2 + |p|^2) / (2 variance)).
SignedEnsemble sample_cartesian(const std::function<double(const Vec3&, const Vec3&)>& rho, double variance,
                                double envelope, std::size_t n, std::uint64_t seed, const std::string& id);

// Oscillator table density; the proposal variance is picked from a short list by the envelope it allows.
SignedEnsemble sample_oscillator(const QuantumLabel& q, std::size_t n, std::uint64_t seed);

// True rotor: mixture of the p = 0 atom and the smooth part (uniform angles, p ~ Exp(1)).
SignedEnsemble sample_rotor(int l, int m, std::size_t n, std::uint64_t seed, RotorForm form = RotorForm::derived);

struct Estimate {
  double value = 0;
  double std_error = 0;
  double n_effective = 0;
};

// sum(s f) / sum(s) with a delete-a-block jackknife error (up to 1000 contiguous blocks).
// n_effective = (sum s)^2 / N. Throws DegenerateSigns when n_effective < 10.
Estimate estimate_values(const std::vector<double>& f, const std::vector<int>& signs);
Estimate estimate(const SignedEnsemble& e, const std::function<double(const CartesianPoint&)>& f);
Estimate estimate(const SignedEnsemble& e, const std::function<double(const AngularPhasePoint&)>& f);

enum class Flow {
  oscillator,  // harmonic rotation in (r, p)
  free,        // r -> r + p t
  rotor,       // great-circle motion on the unit sphere
};

SignedEnsemble propagate(const SignedEnsemble& e, Flow flow, double t);

struct Observable {
  std::string name;
  std::function<double(const CartesianPoint&)> cartesian;
  std::function<double(const AngularPhasePoint&)> angular;
};

// Observables tracked by the stationarity test. Conserved ones (L2, Lz) are included as a sanity floor.
std::vector<Observable> default_observables(PhaseSpace space);

struct StationarityRow {
  std::string observable;
  Estimate before, after;
  double combined_sigma = 0;  // sqrt(sigma_before^2 + sigma_after^2)
  bool pass = false;          // |after - before| < 3 combined_sigma
};

std::vector<StationarityRow> propagate_and_reestimate(const SignedEnsemble& e, Flow flow, double t,
                                                      const std::vector<Observable>& observables);

// Counts points whose stored sign differs from the sign of the density re-evaluated there.
std::size_t recheck_signs(const SignedEnsemble& e, const std::function<double(const CartesianPoint&)>& rho);
std::size_t recheck_rotor_signs(const SignedEnsemble& e, int l, int m, RotorForm form = RotorForm::derived);

// Columnar CSV (stem.csv) plus a JSON sidecar (stem.json) holding seed, N, density id,
// sampler diagnostics and the given estimates.
void write_ensemble(const SignedEnsemble& e, const std::string& stem,
                    const std::vector<std::pair<std::string, Estimate>>& estimates);

}  // namespace psd
