#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "annulus/field.hpp"
#include "annulus/flow.hpp"
#include "annulus/reversibility.hpp"
#include "annulus/section.hpp"
#include "annulus/symmetry.hpp"

namespace annulus {

/// Settings for one CLI run, read from a flat `key = value` file.
///
///   field = pendulum            built-in name, or
///   field_file = my.field       P/Q/domain file relative to the config, or
///   P = ... / Q = ... / domain = [...]   inline definition
///   rtol, atol, max_steps, max_time
///   section = x-axis [0.2, 2]   or sx = ..., sy = ..., s_range = [a, b]
///   section_grid = 33
///   params = [0.5, 1, 1.5]      section parameters for the period table
///   samples = 10, times = [0.3, 1, 2.5], seed = 1, out = results
///   tol.symmetry.<check> = x, tol.reversibility.<check> = x
struct RunConfig {
  PlanarField field = builtin_field("linear-center");
  IntegratorConfig integrator;
  SectionSpec section;
  std::optional<std::vector<double>> params;
  std::size_t samples = 10;
  std::optional<std::vector<double>> times;
  std::uint64_t seed = 1;
  std::filesystem::path out = ".";
  SymmetryTolerances symmetry_tol;
  ReversibilityTolerances reversibility_tol;

  /// Normalized settings after overrides, one `key = value` per line.
  std::map<std::string, std::string> entries;

  /// FNV-1a of the normalized settings; independent of file location and layout.
  std::string digest() const;
  std::vector<double> sample_times() const;
};

/// Overrides applied on top of the file (command-line flags).
struct ConfigOverrides {
  std::optional<std::filesystem::path> out;
  std::optional<double> rtol;
  std::optional<std::uint64_t> seed;
};

/// Parses config text; `base` resolves relative field_file and out paths.
/// Every problem is reported as Error(Config).
RunConfig parse_config(std::string_view text, const std::filesystem::path& base = ".",
                       const ConfigOverrides& overrides = {});
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

}  // namespace annulus
