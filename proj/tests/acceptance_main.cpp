#include <iostream>

#include "dunklpot/acceptance.hpp"

int main(int argc, char** argv) {
  dunklpot::SuiteOptions opts;
  if (argc > 1) opts.outDir = argv[1];
  int failed = 0;
  dunklpot::runSuite("all", opts, [&](const dunklpot::CriterionResult& r) {
    std::cout << r.line() << std::endl;
    failed += r.pass() ? 0 : 1;
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
