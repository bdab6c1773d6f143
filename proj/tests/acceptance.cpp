// One PASS/FAIL line per acceptance criterion. Criterion 9 runs the CLI end to end.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "psd/verify.hpp"

using namespace psd;

namespace {

constexpr double kCliBudgetSeconds = 30 * 60;

void report(const CriterionResult& r) {
  std::printf("[%s] criterion %d: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
  for (const auto& d : r.details) std::printf("    %s\n", d.c_str());
  for (const auto& e : r.errata) std::printf("    erratum: %s\n", e.c_str());
  std::fflush(stdout);
}

CriterionResult cli_round_trip(const std::string& cli) {
  CriterionResult r;
  r.id = 9;
  r.title = "psd verify --all exits cleanly within the time budget";
  const auto json = (std::filesystem::temp_directory_path() / "psd_acceptance_verify.json").string();
  const std::string cmd = "\"" + cli + "\" verify --all --json \"" + json + "\" > /dev/null";
  const auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.details.push_back("exit code " + std::to_string(code));

  bool all_pass = false, errata_known = true;
  try {
    const auto j = nlohmann::json::parse(std::ifstream(json));
    all_pass = j.at("all_pass").get<bool>();
    const auto& known = documented_errata();
    for (const auto& c : j.at("criteria"))
      for (const auto& e : c.at("errata")) {
        const std::string id = e.get<std::string>();
        r.errata.push_back(id);
        errata_known = errata_known && std::find(known.begin(), known.end(), id) != known.end();
      }
  } catch (const std::exception& e) {
    r.details.push_back(std::string("cannot read verify report: ") + e.what());
  }
  std::filesystem::remove(json);
  const bool code_ok = code == 0 ? r.errata.empty() : code == 2 && !r.errata.empty();
  r.pass = all_pass && errata_known && code_ok && r.seconds < kCliBudgetSeconds;
  if (!errata_known) r.details.push_back("undocumented erratum id reported");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  const VerifyOptions opt;
  bool ok = true;
  for (int k = 1; k <= 8; ++k) {
    CriterionResult r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      switch (k) {
        case 1: r = verify_table(1, opt); break;
        case 2: r = verify_table(2, opt); break;
        case 3: r = verify_universal_offsets(); break;
        case 4: r = verify_soft_rotor(); break;
        case 5: r = verify_true_rotor(opt); break;
        case 6: r = verify_px_squared(); break;
        case 7: r = verify_signed_monte_carlo(opt); break;
        case 8: r = verify_stationarity(opt); break;
      }
    } catch (const std::exception& e) {
      r.id = k;
      r.title = "threw";
      r.pass = false;
      r.details.push_back(e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(r);
    ok = ok && r.pass;
  }

  if (cli.empty()) {
    std::printf("[FAIL] criterion 9: no --cli path given\n");
    return 1;
  }
  const CriterionResult r9 = cli_round_trip(cli);
  report(r9);
  ok = ok && r9.pass;
  return ok ? 0 : 1;
}
