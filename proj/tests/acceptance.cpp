// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "annulus/cli.hpp"
#include "annulus/period.hpp"
#include "annulus/reversibility.hpp"
#include "annulus/symmetry.hpp"
#include "oracles.hpp"

using namespace annulus;
using oracle::kPi;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double v, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Section section(const PlanarField& field, const std::string& text) {
  return make_section(parse_section_shorthand(text), field);
}

std::vector<Point> samples_for(const PlanarField& field, const Section& seed, std::size_t n, std::uint64_t s) {
  const AnnulusPoints pts = annulus_samples(field, seed, n, s);
  if (!pts.failures.empty()) throw std::runtime_error("sampling failed: " + pts.failures.front());
  return pts.points;
}

Verdict linear_period() {
  Verdict v;
  const PlanarField lin = builtin_field("linear-center");
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double r = 0.2 + 1.8 * i / 19.0;
    const double a = 2.399963 * i;
    worst = std::max(worst, std::abs(period(lin, Point(r * std::cos(a), r * std::sin(a))) - 2 * kPi));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(worst <= 1e-9, "max |T - 2 pi| = " + num(worst));
  v.require(seconds < 5.0, "took " + num(seconds) + " s");
  v.detail = v.pass ? "max |T - 2 pi| = " + num(worst) + " over 20 cycles in " + num(seconds) + " s" : v.detail;
  return v;
}

Verdict pendulum_period() {
  Verdict v;
  const double reference = oracle::pendulum_period(kPi / 2);
  const double t = period(builtin_field("pendulum"), Point(kPi / 2, 0));
  v.require(std::abs(t - reference) <= 1e-6, "|T - 4K| = " + num(std::abs(t - reference)));
  v.require(std::abs(reference - 7.416298) <= 1e-6, "4K(sin(pi/4)) = " + num(reference, 12));
  if (v.pass) v.detail = "T = " + num(t, 12) + ", 4K(sin(pi/4)) = " + num(reference, 12);
  return v;
}

Verdict degenerate_scaling() {
  Verdict v;
  const PlanarField cubic = builtin_field("cubic-center");
  const double base = period(cubic, Point(1, 0));
  double worst = 0;
  for (double lambda : {0.25, 0.5, 1.0, 2.0}) {
    worst = std::max(worst, std::abs(period(cubic, Point(lambda, 0)) * lambda * lambda - base) / base);
  }
  const double ratio = period(cubic, Point(0.1, 0)) / base;
  v.require(worst <= 1e-5, "relative spread of T lambda^2 = " + num(worst));
  v.require(ratio >= 99 && ratio <= 101, "T(0.1)/T(1) = " + num(ratio));
  if (v.pass) v.detail = "spread " + num(worst) + ", T(0.1)/T(1) = " + num(ratio, 10);
  return v;
}

Verdict symmetry_construction() {
  Verdict v;
  const std::vector<double> times = {0.3, 0.9, 1.4, 2.1, 2.8};
  double inv = 0, comm = 0, per = 0, fc = 0;
  for (const std::string& name : builtin_names()) {
    const PlanarField field = builtin_field(name);
    const Section seed = section(field, builtin_default_section(name));
    const std::vector<Point> pts = samples_for(field, seed, 10, 3);
    const VerificationReport r = verify_sigma_symmetry(field, pts, times);
    inv = std::max(inv, r.at("involution").max_residual);
    comm = std::max(comm, r.at("flow_commutation").max_residual);
    per = std::max(per, r.at("period_invariance").max_residual);
    fc = std::max(fc, r.at("field_condition").max_residual);
  }
  v.require(inv <= 1e-7, "involution " + num(inv));
  v.require(comm <= 1e-6, "commutation " + num(comm));
  v.require(per <= 1e-7, "period " + num(per));
  v.require(fc <= 1e-4, "field condition " + num(fc));

  const PlanarField lin = builtin_field("linear-center");
  const SymmetryInvolution sigma(lin);
  double minus = 0;
  for (const Point& z : samples_for(lin, section(lin, "x-axis [0.2, 2]"), 10, 5)) {
    minus = std::max(minus, (sigma(z) + z).norm());
  }
  v.require(minus <= 1e-8, "linear |sigma(z) + z| = " + num(minus));
  if (v.pass) {
    v.detail = "involution " + num(inv) + ", commutation " + num(comm) + ", period " + num(per) + ", field " +
               num(fc) + ", |sigma + id| " + num(minus);
  }
  return v;
}

Verdict uniqueness() {
  Verdict v;
  const PlanarField lin = builtin_field("linear-center");
  const Point z(1, 0);
  const double half = uniqueness_probe(lin, z, 0.5);
  double smallest = INFINITY;
  for (double f : uniqueness_fractions()) smallest = std::min(smallest, uniqueness_probe(lin, z, f));
  v.require(half <= 1e-8, "f = 0.5 residual " + num(half));
  v.require(smallest >= 1e-3, "smallest off-half residual " + num(smallest));
  if (v.pass) v.detail = "f = 0.5: " + num(half) + ", min over other fractions: " + num(smallest);
  return v;
}

Verdict reversibility_construction() {
  Verdict v;
  const PlanarField lin = builtin_field("linear-center");
  const std::vector<double> times = {0.3, 1.0, 2.5};
  struct Case {
    const char* section;
    std::function<Point(const Point&)> expected;
  };
  for (const Case& c : {Case{"x-axis [0.2, 2]", [](const Point& z) { return Point(z.x(), -z.y()); }},
                        Case{"diagonal [0.2, 2]", [](const Point& z) { return Point(z.y(), z.x()); }}}) {
    const ReversibilityInvolution sigma(lin, section(lin, c.section));
    const std::vector<Point> pts = samples_for(lin, sigma.section(), 20, 8);
    double match = 0;
    for (const Point& z : pts) match = std::max(match, (sigma(z) - c.expected(z)).norm());
    ReversibilityTolerances tol;
    tol.anticommutation = 1e-8;
    tol.involution = 1e-8;
    tol.well_posedness = 1e-8;
    tol.field_condition = 1e-6;
    const VerificationReport r = verify_reversibility(sigma, pts, times, tol);
    const std::string tag = std::string(c.section).substr(0, c.section[0] == 'x' ? 6 : 8) + ": ";
    v.require(match <= 1e-8, tag + "closed form mismatch " + num(match));
    for (const char* name : {"flow_anticommutation", "involution", "well_posedness", "field_condition"}) {
      v.require(r.at(name).pass, tag + name + " " + num(r.at(name).max_residual));
    }
    if (v.pass) {
      v.detail += (v.detail.empty() ? "" : "; ") + tag + "match " + num(match) + ", anti " +
                  num(r.at("flow_anticommutation").max_residual) + ", field " +
                  num(r.at("field_condition").max_residual);
    }
  }
  return v;
}

Verdict fixed_curve() {
  Verdict v;
  double on_delta = 0, off = 0;
  std::size_t fixed = 0;
  for (const std::string& name : builtin_names()) {
    const PlanarField field = builtin_field(name);
    // Default sections are x-axis segments below any separatrix.
    const ReversibilityInvolution sigma(field, section(field, builtin_default_section(name)));
    std::vector<Point> pts = samples_for(field, sigma.section(), 20, 13);
    for (double s : sigma.section().grid) pts.push_back(sigma.section()(s));
    const PlanarMap map = [&](const Point& z) { return sigma(z); };
    const FixedSetCheck c = fixed_set_distance(map, pts, sigma.section().curve, 1e-8, 1e-6, 1e-8);
    v.require(c.delta_fixed.pass, name + " delta points move by " + num(c.delta_fixed.max_residual));
    v.require(c.fixed_on_delta.pass, name + " fixed point off delta by " + num(c.fixed_on_delta.max_residual));
    on_delta = std::max(on_delta, c.delta_fixed.max_residual);
    off = std::max(off, c.fixed_on_delta.max_residual);
    fixed += c.fixed_samples;
  }
  if (v.pass) {
    v.detail = "max |sigma(z) - z| on delta " + num(on_delta) + ", max distance of " + std::to_string(fixed) +
               " fixed samples to delta " + num(off);
  }
  return v;
}

Verdict distinctness() {
  Verdict v;
  const PlanarField lin = builtin_field("linear-center");
  const ReversibilityInvolution axis(lin, section(lin, "x-axis [0.2, 2]"));
  const ReversibilityInvolution diagonal(lin, section(lin, "diagonal [0.2, 2]"));
  double gap = 0;
  for (const Point& z : samples_for(lin, axis.section(), 10, 21)) gap = std::max(gap, (axis(z) - diagonal(z)).norm());
  v.require(gap > 0.1, "max |sigma1 - sigma2| = " + num(gap));
  if (v.pass) v.detail = "max |sigma1 - sigma2| = " + num(gap);
  return v;
}

Verdict negative_controls(const fs::path& scratch) {
  Verdict v;
  const PlanarField lin = builtin_field("linear-center");
  const PlanarMap mirror = [](const Point& z) { return Point(z.x(), -z.y()); };
  const std::vector<Point> pts = samples_for(lin, section(lin, "x-axis [0.2, 2]"), 10, 2);
  const std::vector<double> times = {0.3, 1.0, 2.5};
  const CheckResult c = check_commutation(lin, mirror, +1, pts, times, {}, 1e-6);
  v.require(!c.pass && c.max_residual > 0.5, "mirror commutation residual " + num(c.max_residual));

  ConfigOverrides o;
  o.out = scratch / "loose";
  o.rtol = 1e-3;
  std::ostringstream out, err;
  const int code = run_command(Command::Symmetry, parse_config("field = pendulum\nsamples = 10", ".", o), out, err);
  v.require(code == exit_code::failure, "rtol 1e-3 exit code " + std::to_string(code));
  if (v.pass) v.detail = "mirror residual " + num(c.max_residual) + "; rtol 1e-3 run: exit 1, " + out.str().substr(0, out.str().size() - 1);
  return v;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict determinism(const fs::path& scratch) {
  Verdict v;
  const std::string text = "field = pendulum\nsection = x-axis [0.2, 2.5]\nparams = [0.5, 1, 2]\nsamples = 8\nseed = 5";
  std::size_t files = 0;
  for (Command c : {Command::Period, Command::Symmetry, Command::Reversibility, Command::Verify}) {
    for (const char* run : {"a", "b"}) {
      ConfigOverrides o;
      o.out = scratch / run;
      std::ostringstream out, err;
      run_command(c, parse_config(text, ".", o), out, err);
    }
  }
  for (const auto& entry : fs::directory_iterator(scratch / "a")) {
    ++files;
    const fs::path twin = scratch / "b" / entry.path().filename();
    v.require(slurp(entry.path()) == slurp(twin), entry.path().filename().string() + " differs");
  }
  v.require(files >= 10, "only " + std::to_string(files) + " files written");
  if (v.pass) v.detail = std::to_string(files) + " CSV/JSON files byte-identical across two runs";
  return v;
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "annulus-acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"linear-center period", linear_period},
      {"pendulum period vs quadrature", pendulum_period},
      {"degenerate-center scaling", degenerate_scaling},
      {"symmetry involution construction", symmetry_construction},
      {"uniqueness probe", uniqueness},
      {"reversibility construction", reversibility_construction},
      {"fixed-curve identity", fixed_curve},
      {"distinct reversibilities", distinctness},
      {"negative controls", [&] { return negative_controls(scratch / "negative"); }},
      {"determinism", [&] { return determinism(scratch / "determinism"); }},
  };

  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %2d %s: %s (%s)\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  }
  std::printf("%s %zu/%zu\n", failed == 0 ? "PASS" : "FAIL", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
