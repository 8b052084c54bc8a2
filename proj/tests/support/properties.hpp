#pragma once

// Randomized invariant suites. Each property checks one random case per call
// and returns an empty string on success or a description of the failure.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace props {

struct Property {
  std::string module;
  std::string name;
  std::function<std::string(std::mt19937_64&)> check;
  int cases = 1000;
};

const std::vector<Property>& all();

struct Outcome {
  int cases = 0;
  int failures = 0;
  std::string first_failure;
};

Outcome run(const Property& property, std::uint64_t seed = 20240601);

}  // namespace props
