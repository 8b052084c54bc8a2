#include "doctest.h"

#include <chrono>
#include <cstdio>

#include "support/properties.hpp"

TEST_CASE("randomized invariant suites") {
  for (const props::Property& p : props::all()) {
    const auto start = std::chrono::steady_clock::now();
    const props::Outcome out = props::run(p);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-9s %-58s %5d cases %4d failures %6.2fs\n", p.module.c_str(), p.name.c_str(), out.cases,
                out.failures, secs);
    CAPTURE(p.module);
    CAPTURE(p.name);
    CHECK_MESSAGE(out.failures == 0, out.first_failure);
    CHECK(out.cases >= 1000);
  }
}
