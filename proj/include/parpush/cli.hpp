#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "parpush/error.hpp"
#include "parpush/oracle.hpp"
#include "parpush/scenario.hpp"

namespace parpush::cli {

enum ExitCode : int { kSuccess = 0, kMathFailure = 1, kMalformedInput = 2 };

struct Options {
  std::string command;
  std::optional<std::filesystem::path> file;
  std::optional<std::filesystem::path> all;  // batch directory
  std::optional<std::filesystem::path> out;  // file, or directory in batch mode
  bool keep_trivial = false;
  std::uint64_t seed = 0;
  int count = 200;
  std::size_t precision = oracle::kDefaultPrecision;
};

/// Text table for stdout plus the machine-readable document.
struct CommandOutput {
  int exit_code = kSuccess;
  std::string text;
  nlohmann::json document;
};

/// Malformed input (2) versus failed mathematics (1).
int exit_code_for(ErrorCode code);

/// "1,1@0/1,1/2": graded dims, then weights.
std::string format_flag(const WeightedFlag& flag);

/// Commands on one parsed scenario: validate, direct-image, pardeg, torus,
/// reconstruct, roundtrip, oracle. Module errors propagate.
CommandOutput run_on_scenario(const std::string& command, const Scenario& s, const Options& options);

/// Randomized property sweep (`check`): direct-image and round-trip checks on generated
/// instances, reproducible from the seed.
CommandOutput run_property_sweep(const Options& options);

/// Full driver: reads files, handles batch mode and --out, reports errors
/// as "error: <Name>: <details>" on `err`.
int run(const Options& options, std::ostream& out, std::ostream& err);

}  // namespace parpush::cli
