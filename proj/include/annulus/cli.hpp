#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>

#include "annulus/config.hpp"

namespace annulus {

enum class Command { Period, Symmetry, Reversibility, Verify };

std::optional<Command> parse_command(std::string_view name);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int transversality = 3;
}  // namespace exit_code

/// Runs one command, writing files under cfg.out, the one-line summary to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run_command(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Loads the config and runs the command; config problems map to exit code 2.
int run(Command command, const std::filesystem::path& config, const ConfigOverrides& overrides, std::ostream& out,
        std::ostream& err);

}  // namespace annulus
