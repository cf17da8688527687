#pragma once

// Command-line front end. Kept as a library so the tests can drive it
// in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ouestim/kernels.hpp"
#include "ouestim/pathgen.hpp"

namespace ouestim::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kVerification = 3 };

struct RunConfig {
  std::string subcommand;
  KernelSpec kernel = KernelSpec::fbm(0.7);
  double theta = 1.0;
  std::vector<double> horizons{10.0};
  double n_per_unit = 409.6;
  std::size_t replicates = 1000;
  std::optional<std::uint64_t> seed;
  SamplerChoice sampler = SamplerChoice::kAuto;
  std::string out_dir = ".";
  std::size_t quad_size = 4096;
};

struct ParseResult {
  std::optional<RunConfig> config;  // empty when the run should stop
  int exit_code = kOk;
};

// Flags override the --config file, which overrides defaults. Parse errors
// and invalid parameters print a message and yield kUsage.
ParseResult parse(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// parse + execute; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// The deterministic-oracle suite behind `selftest`. Prints one line per
// check and returns true when all pass.
bool selftest(std::ostream& out);

}  // namespace ouestim::cli
