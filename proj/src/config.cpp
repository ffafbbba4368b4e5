#include "annulus/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "annulus/io.hpp"
#include "annulus/verify.hpp"

namespace annulus {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorKind::Config, message); }

double parse_real(const std::string& key, const std::string& value) {
  try {
    return expr::evaluate(expr::parse(value), 0.0, 0.0);
  } catch (const Error&) {
    config_error(key + ": not a number: " + value);
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  std::uint64_t n = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || end != value.data() + value.size()) config_error(key + ": expected a non-negative integer");
  return n;
}

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error(std::string("cannot read ") + what + " '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

using TolTable = std::map<std::string, double*>;

TolTable symmetry_table(SymmetryTolerances& t) {
  return {{"involution", &t.involution},           {"commutation", &t.commutation},
          {"period", &t.period},                   {"field_condition", &t.field_condition},
          {"non_triviality", &t.non_triviality},   {"uniqueness_half", &t.uniqueness_half},
          {"uniqueness_other", &t.uniqueness_other}};
}

TolTable reversibility_table(ReversibilityTolerances& t) {
  return {{"anticommutation", &t.anticommutation}, {"involution", &t.involution},
          {"delta_fixed", &t.delta_fixed},         {"fixed_distance", &t.fixed_distance},
          {"well_posedness", &t.well_posedness},   {"field_condition", &t.field_condition},
          {"period", &t.period}};
}

}  // namespace

std::string RunConfig::digest() const {
  std::string text;
  for (const auto& [k, v] : entries) {
    if (k == "out") continue;
    text += k + " = " + v + "\n";
  }
  return fnv1a_hex(text);
}

std::vector<double> RunConfig::sample_times() const {
  if (times) return *times;
  return annulus::sample_times(5, seed);
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base, const ConfigOverrides& overrides) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) config_error("line " + std::to_string(line_no) + ": empty key or value");
    if (!kv.emplace(key, value).second) config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  if (overrides.rtol) kv["rtol"] = format_number(*overrides.rtol);
  if (overrides.seed) kv["seed"] = std::to_string(*overrides.seed);
  if (overrides.out) kv["out"] = overrides.out->string();

  RunConfig cfg;
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  // Field: exactly one source.
  const auto builtin = take("field");
  const auto file = take("field_file");
  const bool inline_pq = kv.count("P") || kv.count("Q");
  if ((builtin ? 1 : 0) + (file ? 1 : 0) + (inline_pq ? 1 : 0) != 1) {
    config_error("give exactly one of 'field', 'field_file' or inline P/Q");
  }
  std::string default_section;
  try {
    if (builtin) {
      const auto& names = builtin_names();
      if (std::find(names.begin(), names.end(), *builtin) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        config_error("unknown built-in field '" + *builtin + "' (known: " + list + ")");
      }
      cfg.field = builtin_field(*builtin);
      default_section = builtin_default_section(*builtin);
    } else if (file) {
      const std::filesystem::path path = base / *file;
      cfg.field = parse_field_definition(read_file(path, "field file"), path.stem().string());
      kv["field_file"] = *file + " #" + fnv1a_hex(read_file(path, "field file"));
    } else {
      std::string def;
      for (const char* key : {"P", "Q", "domain"}) {
        if (auto v = take(key)) def += std::string(key) + " = " + *v + "\n";
      }
      cfg.field = parse_field_definition(def, take("name").value_or("custom"));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(std::string("field: ") + e.what());
  }
  if (kv.count("domain") && !inline_pq) config_error("'domain' belongs in the field definition");

  if (auto v = take("rtol")) cfg.integrator.rtol = parse_real("rtol", *v);
  if (auto v = take("atol")) cfg.integrator.atol = parse_real("atol", *v);
  if (auto v = take("max_steps")) cfg.integrator.max_steps = static_cast<std::size_t>(parse_count("max_steps", *v));
  if (auto v = take("max_time")) cfg.integrator.max_time = parse_real("max_time", *v);
  cfg.integrator.validate();

  try {
    const auto shorthand = take("section");
    const bool expressions = kv.count("sx") || kv.count("sy") || kv.count("s_range");
    if (shorthand && expressions) config_error("give either 'section' or sx/sy/s_range, not both");
    if (expressions) {
      const auto sx = take("sx"), sy = take("sy"), range = take("s_range");
      if (!sx || !sy || !range) config_error("an expression section needs sx, sy and s_range");
      const auto r = parse_number_list(*range);
      if (r.size() != 2) config_error("s_range must be [a, b]");
      cfg.section = section_from_expressions(*sx, *sy, r[0], r[1]);
    } else if (shorthand || !default_section.empty()) {
      cfg.section = parse_section_shorthand(shorthand ? *shorthand : default_section);
    } else {
      config_error("a custom field needs a section");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(std::string("section: ") + e.what());
  }
  if (auto v = take("section_grid")) {
    cfg.section.grid_size = static_cast<std::size_t>(parse_count("section_grid", *v));
    if (cfg.section.grid_size < 2) config_error("section_grid must be at least 2");
  }

  if (auto v = take("params")) cfg.params = parse_number_list(*v);
  if (auto v = take("times")) cfg.times = parse_number_list(*v);
  if (auto v = take("samples")) {
    cfg.samples = static_cast<std::size_t>(parse_count("samples", *v));
    if (cfg.samples == 0) config_error("samples must be positive");
  }
  if (auto v = take("seed")) cfg.seed = parse_count("seed", *v);
  if (overrides.out) {
    cfg.out = *overrides.out;
  } else if (auto v = take("out")) {
    cfg.out = base / *v;
  }

  static const std::vector<std::string> plain = {"field", "field_file", "P", "Q", "domain", "name", "rtol",
                                                 "atol", "max_steps", "max_time", "section", "sx", "sy", "s_range",
                                                 "section_grid", "params", "times", "samples", "seed", "out"};
  auto symmetry = symmetry_table(cfg.symmetry_tol);
  auto reversibility = reversibility_table(cfg.reversibility_tol);
  for (const auto& [key, value] : kv) {
    if (std::find(plain.begin(), plain.end(), key) != plain.end()) continue;
    TolTable* table = nullptr;
    std::string name;
    if (key.rfind("tol.symmetry.", 0) == 0) {
      table = &symmetry;
      name = key.substr(13);
    } else if (key.rfind("tol.reversibility.", 0) == 0) {
      table = &reversibility;
      name = key.substr(18);
    }
    if (!table || !table->count(name)) config_error("unknown key '" + key + "'");
    const double tol = parse_real(key, value);
    if (!(tol >= 0.0)) config_error(key + " must be non-negative");
    *(*table)[name] = tol;
  }
  cfg.entries = std::move(kv);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
  return parse_config(read_file(path, "config"), path.parent_path(), overrides);
}

}  // namespace annulus
