#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cantordyn {

/// Inputs to one CLI command. File contents are passed as text.
struct CommandOptions {
  std::string command;
  std::string spec_text;
  std::string requests_text;
  std::string halting_text;
  std::string predicate_text;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> stages;
  std::optional<std::size_t> cmax;
  std::optional<std::string> point;
  std::uint64_t seed = 1;
  bool trace = false;
};

struct CommandResult {
  /// Canonical JSON report with sorted keys. "timing_ms" is the only
  /// run-dependent field.
  std::string report;
  bool verified = false;
  /// First failing certificate, or the error message.
  std::string failure;
};

const std::vector<std::string>& command_names();

/// Runs a command and re-verifies its certificates. Library errors are
/// caught and reported with verified = false.
CommandResult run_command(const CommandOptions& options);

}  // namespace cantordyn
