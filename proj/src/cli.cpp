#include "annulus/cli.hpp"

#include <sstream>

#include "annulus/io.hpp"
#include "annulus/period.hpp"
#include "annulus/reversibility.hpp"
#include "annulus/symmetry.hpp"

namespace annulus {

namespace {

bool section_failure(ErrorKind kind) {
  return kind == ErrorKind::Transversality || kind == ErrorKind::DegenerateTangent ||
         kind == ErrorKind::NotASection;
}

// Sample construction failures become one more gate so the report stays complete.
CheckResult sampling_check(const AnnulusPoints& samples) {
  CheckResult c;
  c.name = "sampling";
  c.max_residual = static_cast<double>(samples.failures.size());
  c.tolerance = 0.0;
  c.evaluated = samples.points.size() + samples.failures.size();
  c.errors = samples.failures;
  c.pass = samples.failures.empty();
  return c;
}

std::string pairs_csv(const std::vector<Point>& points, const PlanarMap& sigma, std::ostream& err) {
  std::ostringstream os;
  os << "x,y,sigma_x,sigma_y\n";
  for (const Point& z : points) {
    Point image(std::nan(""), std::nan(""));
    try {
      image = sigma(z);
    } catch (const std::exception& e) {
      err << "sigma(" << format_number(z.x()) << ", " << format_number(z.y()) << ") failed: " << e.what() << '\n';
    }
    os << format_number(z.x()) << ',' << format_number(z.y()) << ',' << format_number(image.x()) << ','
       << format_number(image.y()) << '\n';
  }
  return os.str();
}

std::string json_text(const VerificationReport& report) { return to_json(report).dump(2) + "\n"; }

void diagnose(const VerificationReport& report, std::ostream& err) {
  for (const auto& c : report.checks) {
    if (c.pass) continue;
    err << "check " << c.name << " failed: residual " << format_number(c.max_residual)
        << (c.comparison == Comparison::AtMost ? " > " : " < ") << format_number(c.tolerance) << '\n';
    for (std::size_t i = 0; i < c.errors.size() && i < 3; ++i) err << "  " << c.errors[i] << '\n';
    if (c.errors.size() > 3) err << "  ... " << c.errors.size() - 3 << " more\n";
  }
}

int summarize(std::size_t passed, std::size_t total, std::ostream& out) {
  const bool ok = passed == total;
  out << (ok ? "PASS " : "FAIL ") << passed << '/' << total << '\n';
  return ok ? exit_code::ok : exit_code::failure;
}

Provenance provenance(const RunConfig& cfg, const std::string& section) {
  return {cfg.field.name(), section, cfg.digest()};
}

int cmd_period(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Section seed = make_section(cfg.section, cfg.field);
  const std::vector<double> params = cfg.params.value_or(seed.grid);
  const AnnulusSample sample = sample_annulus(cfg.field, seed, params, cfg.integrator);
  std::ostringstream csv;
  write_csv(csv, sample);
  write_file_atomic(cfg.out / "periods.csv", csv.str());
  for (const auto& f : sample.failures) {
    err << "s=" << format_number(f.parameter) << ": " << to_string(f.kind) << ": " << f.message << '\n';
  }
  return summarize(params.size() - sample.failures.size(), params.size(), out);
}

VerificationReport symmetry_report(const RunConfig& cfg, const Section& seed, const AnnulusPoints& samples) {
  VerificationReport report =
      verify_sigma_symmetry(cfg.field, samples.points, cfg.sample_times(), cfg.integrator, cfg.symmetry_tol);
  report.checks.insert(report.checks.begin(), sampling_check(samples));
  report.provenance = provenance(cfg, seed.description);
  return report;
}

VerificationReport reversibility_report(const RunConfig& cfg, const ReversibilityInvolution& sigma,
                                        const AnnulusPoints& samples) {
  VerificationReport report = verify_reversibility(sigma, samples.points, cfg.sample_times(), cfg.reversibility_tol);
  report.checks.insert(report.checks.begin(), sampling_check(samples));
  report.provenance = provenance(cfg, sigma.section().description);
  return report;
}

int cmd_symmetry(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Section seed = make_section(cfg.section, cfg.field);
  const AnnulusPoints samples = annulus_samples(cfg.field, seed, cfg.samples, cfg.seed, cfg.integrator);
  const SymmetryInvolution sigma(cfg.field, cfg.integrator);
  const VerificationReport report = symmetry_report(cfg, seed, samples);
  write_file_atomic(cfg.out / "symmetry_pairs.csv",
                    pairs_csv(samples.points, [&](const Point& z) { return sigma(z); }, err));
  write_file_atomic(cfg.out / "symmetry_report.json", json_text(report));
  write_file_atomic(cfg.out / "symmetry_summary.csv", summary_csv(report));
  diagnose(report, err);
  return summarize(report.passed(), report.checks.size(), out);
}

int cmd_reversibility(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ReversibilityInvolution sigma(cfg.field, make_section(cfg.section, cfg.field), cfg.integrator);
  std::ostringstream conjugate;
  write_csv(conjugate, sigma.conjugate());
  const AnnulusPoints samples = annulus_samples(cfg.field, sigma.section(), cfg.samples, cfg.seed, cfg.integrator);
  const VerificationReport report = reversibility_report(cfg, sigma, samples);
  write_file_atomic(cfg.out / "conjugate_section.csv", conjugate.str());
  write_file_atomic(cfg.out / "reversibility_pairs.csv",
                    pairs_csv(samples.points, [&](const Point& z) { return sigma(z); }, err));
  write_file_atomic(cfg.out / "reversibility_report.json", json_text(report));
  write_file_atomic(cfg.out / "reversibility_summary.csv", summary_csv(report));
  diagnose(report, err);
  return summarize(report.passed(), report.checks.size(), out);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ReversibilityInvolution sigma(cfg.field, make_section(cfg.section, cfg.field), cfg.integrator);
  const AnnulusPoints samples = annulus_samples(cfg.field, sigma.section(), cfg.samples, cfg.seed, cfg.integrator);

  VerificationReport report;
  report.provenance = provenance(cfg, sigma.section().description);
  for (auto part : {symmetry_report(cfg, sigma.section(), samples), reversibility_report(cfg, sigma, samples)}) {
    const std::string prefix = report.checks.empty() ? "symmetry." : "reversibility.";
    for (auto& c : part.checks) {
      c.name = prefix + c.name;
      report.checks.push_back(std::move(c));
    }
  }
  write_file_atomic(cfg.out / "verify_report.json", json_text(report));
  write_file_atomic(cfg.out / "verify_summary.csv", summary_csv(report));
  diagnose(report, err);
  return summarize(report.passed(), report.checks.size(), out);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "period") return Command::Period;
  if (name == "symmetry") return Command::Symmetry;
  if (name == "reversibility") return Command::Reversibility;
  if (name == "verify") return Command::Verify;
  return std::nullopt;
}

int run_command(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::filesystem::create_directories(cfg.out);
    switch (command) {
      case Command::Period: return cmd_period(cfg, out, err);
      case Command::Symmetry: return cmd_symmetry(cfg, out, err);
      case Command::Reversibility: return cmd_reversibility(cfg, out, err);
      case Command::Verify: return cmd_verify(cfg, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    out << "FAIL 0/1\n";
    if (section_failure(e.kind())) return exit_code::transversality;
    if (e.kind() == ErrorKind::Config) return exit_code::config;
    return exit_code::failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  out << "FAIL 0/1\n";
  return exit_code::failure;
}

int run(Command command, const std::filesystem::path& config, const ConfigOverrides& overrides, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config, overrides);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    out << "FAIL 0/1\n";
    return exit_code::config;
  }
  return run_command(command, cfg, out, err);
}

}  // namespace annulus
