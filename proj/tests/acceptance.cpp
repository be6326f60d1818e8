// Acceptance run: one PASS/FAIL line per criterion 1-8, then the extra
// serialization check.
//
// Exit status is 0 when the failing criteria are exactly those listed with
// --expect-fail (default: none), so a known, analysed failure stays visible
// without hiding new ones.

#include "twistor/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <set>

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  twistor::VerifyOptions opt;
  std::vector<int> expect_fail;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  app.add_option("--frames", opt.frames)->capture_default_str();
  app.add_option("--tolerance-scale", opt.tolerance_scale)->capture_default_str();
  app.add_option("--seed", opt.seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::set<int> failed;
  twistor::run_acceptance(opt, [&](const twistor::CheckResult& r) {
    if (!r.pass) failed.insert(r.id);
    std::cout << (r.id > 8 ? "extra check " : "criterion ") << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << " -- " << r.detail
              << std::endl;
  });

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (failed == expected) {
    const auto core_failed = std::count_if(failed.begin(), failed.end(), [](int id) { return id <= 8; });
    std::cout << "acceptance: " << 8 - core_failed << "/8 pass";
    if (!failed.empty()) std::cout << "; the failures are the expected ones";
    std::cout << "\n";
    return 0;
  }
  std::cout << "acceptance: failures differ from the expected set\n";
  return 1;
}
