#pragma once

#include <string>
#include <vector>

namespace rlab {

struct CheckLine {
  std::string name;
  double value = 0.0, reference = 0.0, deviation = 0.0, tolerance = 0.0;
  bool pass = false;
  std::string note;  // replaces the numeric columns when set
};

struct CheckResult {
  int id = 0;
  std::string title;
  std::vector<CheckLine> lines;
  std::string error;  // exception text if the check could not run
  bool pass() const;
};

struct VerifyOptions {
  std::vector<int> only;         // empty: all twelve
  int rerun_workers = 0;         // worker count for the determinism rerun, 0: choose one that differs
};

std::vector<CheckResult> run_verify(const VerifyOptions& opt = {});
CheckResult run_check(int id);
// flat text, no timing; identical inputs give identical bytes
std::string verify_report(const std::vector<CheckResult>& results, int digits = 12);
// first failing check, or nullptr
const CheckResult* first_failure(const std::vector<CheckResult>& results);

}  // namespace rlab
