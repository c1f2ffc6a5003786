// cli.hpp: command-line front end (generate | chsh | scan | validate).
//
// Configuration comes from flags and an optional flat key=value config
// file; flags override file values, unknown keys are rejected. A run is
// fully determined by (config, seed): identical seeds produce
// byte-identical CSV outputs.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "entsim/chsh.hpp"
#include "entsim/protocol.hpp"

namespace entsim::cli {

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  std::string command;  // generate | chsh | scan | validate
  protocol::ProtocolParams params;
  chsh::ChshSettings settings;
  long trials = 100000;
  std::uint64_t seed = 42;
  std::vector<double> alpha_grid;
  std::string output_path;  // per-command default when empty
  bool unconditioned_e = false;
  long max_attempts = 10000000;

  double alpha() const { return params.alpha(); }
};

// Exit codes: 0 success, 1 usage, 2 runtime (no data / exhaustion),
// 3 validation failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitValidation = 3;

// Throws UsageError (or CLI11 errors wrapped into it) on bad input.
RunConfig parse_config(const std::vector<std::string>& args);

int run(const RunConfig& config);

// Full entry point: parse, run, map errors to exit codes.
int main_entry(int argc, char** argv);

}  // namespace entsim::cli
