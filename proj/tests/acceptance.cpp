// One line per criterion; details for failing ones. Exit status 0 iff all pass.
#include <iostream>

#include "rlab/verify.hpp"

int main() {
  auto results = rlab::run_verify();
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass() ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << "\n";
    if (!r.pass()) {
      ++failed;
      std::cout << rlab::verify_report({r});
    }
  }
  std::cout << "\n" << rlab::verify_report(results);
  std::cout << (failed == 0 ? "all criteria pass\n" : std::to_string(failed) + " criteria failed\n");
  return failed == 0 ? 0 : 1;
}
