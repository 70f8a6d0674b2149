#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "savns/verification.hpp"

namespace savns::cli {

enum class Command { Simulate, Converge, EpsSweep, Energy };

struct RunConfig {
  Command command = Command::Simulate;
  /// Case id, or the stem of the initial-field file.
  std::string case_label = "example1";
  std::vector<SchemeKind> schemes;
  /// Everything but scheme and dt.
  RunSpec spec;
  std::vector<double> dts;
  /// The dt values as written, for directory names.
  std::vector<std::string> dt_text;
  std::vector<double> eps_list;
  int snapshot_every = 0;
  int jobs = 1;
  std::filesystem::path out;
  /// Resolved key/value pairs, written to run.json. Feeding run.json back
  /// through --config reproduces the run.
  std::map<std::string, std::string> resolved;
};

/// Flags override values from --config. Throws ConfigError naming the
/// offending field; CLI11 parse errors are rethrown as-is.
RunConfig parse_config(int argc, const char* const* argv);

/// Runs the command and writes the artifacts. Returns 0, or 1 when a run or
/// sweep row failed.
int execute(const RunConfig& cfg);

/// parse_config + execute with the exit-code convention 0 ok, 1 runtime
/// failure, 2 configuration error.
int main(int argc, const char* const* argv);

}  // namespace savns::cli
