#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psd/oscillator.hpp"

namespace psd {

struct VerifyOptions {
  std::size_t mc_samples = 1'000'000;
  int table_points = 100;
  std::uint64_t seed = 42;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;
  std::vector<std::string> errata;  // ids from documented_errata()
  double seconds = 0;
};

// Erratum ids that may be reported while a criterion still passes.
const std::vector<std::string>& documented_errata();

struct TableRow {
  QuantumLabel label;
  double lz_closed = 0, lz_oracle = 0;
  double l2_closed = 0, l2_oracle = 0;
  double norm_closed = 0, norm_oracle = 0;
  double max_density_discrepancy = 0;
};

// Rows of table I (n = 0) or II (n = 1): closed-form moments by Gauss-Hermite, oracle
// moments straight from the wavefunction, and the worst density mismatch against the
// numerical transform at `points` random phase-space points.
std::vector<TableRow> table_rows(int which, int points, std::uint64_t seed);

struct RotorAuditRow {
  double theta = 0, p = 0, alpha = 0;
  double oracle = 0, oracle_error = 0, raw = 0;
};
struct RotorProjectionRow {
  double theta = 0, p = 0;
  double mean_oracle = 0, mean_closed = 0;  // alpha average
  double cos_oracle = 0, cos_closed = 0;    // cos(alpha) coefficient
};
struct RotorAudit {
  int l = 0, m = 0;
  std::vector<RotorAuditRow> points;           // numerical transform vs the full closed form
  std::vector<RotorProjectionRow> projections;  // vs the stationary (default) form
  double delta_oracle_max_error = 0;            // |numerical - closed| delta weight, worst theta
  double max_point_error = 0, max_projection_error = 0;
  bool pass = false;
};
// 20 pointwise comparisons per state over four polar angles, p in [0.5, 3].
RotorAudit rotor_audit(int l, int m, std::uint64_t seed = 7);

CriterionResult verify_table(int which, const VerifyOptions& opt);  // criteria 1 and 2
CriterionResult verify_universal_offsets();                          // 3
CriterionResult verify_soft_rotor();                                 // 4
CriterionResult verify_true_rotor(const VerifyOptions& opt);         // 5
CriterionResult verify_px_squared();                                 // 6
CriterionResult verify_signed_monte_carlo(const VerifyOptions& opt); // 7
CriterionResult verify_stationarity(const VerifyOptions& opt);       // 8

std::vector<CriterionResult> verify_all(const VerifyOptions& opt);

}  // namespace psd
