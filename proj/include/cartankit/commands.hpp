#pragma once

#include <string>
#include <vector>

#include "cartankit/report.hpp"

namespace cartankit {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command names with their positional arguments, for usage text.
struct CommandInfo {
  std::string name;
  std::string args;
  std::string help;
};
const std::vector<CommandInfo>& command_table();

/// Settings from the document, then CARTANKIT_MODE. Flags are applied by the caller afterwards.
Settings effective_settings(const json& doc);

/// Runs a command on a validated document. Throws ProblemError / UsageError on bad input;
/// numerical failures inside a check are recorded as failing checks instead.
Report run_command(const json& doc, const Settings& settings, const std::string& command,
                   const std::vector<std::string>& args);

}  // namespace cartankit
