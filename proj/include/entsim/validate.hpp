// validate.hpp: sparse-engine vs dense-oracle equivalence suite.
//
// Seeded random parameter draws over the generation and measurement
// circuits; every check compares the sparse engine against the dense
// reference and reports its worst error. Backs the `validate` CLI
// subcommand.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace entsim::validate {

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

// draws = number of random parameter points per circuit family.
ValidationReport run_validation(std::uint64_t seed, int draws);

}  // namespace entsim::validate
