#include <iostream>

#include "CLI11.hpp"
#include "annulus/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Flow-defined symmetry and reversibility involutions on planar period annuli"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out;
  std::optional<double> rtol;
  std::optional<std::uint64_t> seed;
  for (const char* name : {"period", "symmetry", "reversibility", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "run configuration (key = value)")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--rtol", rtol, "integrator relative tolerance");
    sub->add_option("--seed", seed, "sample sequence seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : annulus::exit_code::config;
  }

  const auto command = annulus::parse_command(app.get_subcommands().front()->get_name());
  annulus::ConfigOverrides overrides;
  if (out) overrides.out = *out;
  overrides.rtol = rtol;
  overrides.seed = seed;
  return annulus::run(*command, config, overrides, std::cout, std::cerr);
}
