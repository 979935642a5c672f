// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <bol/verify.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  std::string only = argc > 1 ? argv[1] : "all";
  int failed = 0;
  bol::verify::run_all(only, 20240601, [&](const bol::verify::CriterionResult& r) {
    std::cout << bol::verify::summary_line(r) << "  (" << r.seconds << " s)" << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria passed")
            << std::endl;
  return failed ? EXIT_FAILURE : EXIT_SUCCESS;
}
