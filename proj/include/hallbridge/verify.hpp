#ifndef HALLBRIDGE_VERIFY_HPP
#define HALLBRIDGE_VERIFY_HPP

// Batch verification: runs the identity checks over an enumerated universe
// and emits a machine-readable report.

#include <set>
#include <string>
#include <vector>

#include "hallbridge/hall.hpp"

namespace hallbridge {

struct CheckOutcome {
  std::string name;
  long long pairs_tested = 0;
  std::vector<std::string> failures;
  double seconds = 0.0;
};

struct VerifyReport {
  std::string algebra_fingerprint;
  unsigned q = 0;
  int bound = 0;
  int gldim = -1;
  long long budget = 0;
  int workers = 1;
  unsigned long long seed = 0;
  std::vector<CheckOutcome> checks;

  bool passed() const;
  std::string to_json() const;
};

struct VerifyOptions {
  int max_total_dim = 2;
  std::set<std::string> checks;  // empty = all
  Budgets budgets;
  int workers = 1;
  unsigned long long seed = 12345;
};

// Known check names, in report order.
const std::vector<std::string>& verify_check_names();

struct VerifyRun {
  VerifyReport report;
  int exit_code = 0;  // 0 pass, 1 mathematical counterexample, 2 resource/validation
};

VerifyRun run_verify(const std::string& input_text, const VerifyOptions& opts);

// Structure-constant tables (CLI `table` subcommand).
std::string hall_table_json(const std::string& input_text, int max_total_dim, Budgets bud);
std::string dh_table_json(const std::string& input_text, int max_total_dim, Budgets bud);
std::string enumerate_json(const std::string& input_text, int max_total_dim, Budgets bud);

}  // namespace hallbridge

#endif
