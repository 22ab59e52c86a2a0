#include "planemhd/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace planemhd {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"n_cells"}},
      {"physics", {"lambda", "mu", "nu", "gamma", "c_v", "kappa1", "kappa2", "q"}},
      {"initial", {"preset", "table"}},
      {"boundary", {"preset", "amplitude", "ramp_period"}},
      {"time", {"t_end", "cfl", "dt_max", "dt_min", "snapshot_stride", "linear_solver_tol"}},
      {"output", {"directory", "formats"}},
      {"sweep", {"mu_values", "reference", "bl_tol", "tau_deltas", "workers"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(SectionMap m) : map_(std::move(m)) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = map_.find(section);
    if (s == map_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  int line_of(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    return e ? e->line : 0;
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& why) const {
    throw ConfigError(section, key, line_of(section, key), why);
  }

  double number(const std::string& section, const std::string& key, double fallback,
                const std::function<bool(double)>& ok, const char* requirement) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    const double v = parse_double(section, key, e->value);
    if (!ok(v)) fail(section, key, std::string("must be ") + requirement + " (got " + e->value + ")");
    return v;
  }

  int integer(const std::string& section, const std::string& key, int fallback, int min_value) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    int v = 0;
    const auto* first = e->value.data();
    const auto* last = first + e->value.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) fail(section, key, "expected an integer, got '" + e->value + "'");
    if (v < min_value) fail(section, key, "must be >= " + std::to_string(min_value) + " (got " + e->value + ")");
    return v;
  }

  std::vector<double> numbers(const std::string& section, const std::string& key, std::vector<double> fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(e->value)) out.push_back(parse_double(section, key, item));
    if (out.empty()) fail(section, key, "expected a non-empty list");
    return out;
  }

  double parse_double(const std::string& section, const std::string& key, const std::string& text) const {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = first + text.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || text.empty()) fail(section, key, "expected a number, got '" + text + "'");
    if (!std::isfinite(v)) fail(section, key, "must be finite");
    return v;
  }

 private:
  SectionMap map_;
};

SectionMap tokenize(std::string_view text) {
  SectionMap map;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(section, "", line, "malformed section header '" + s + "'");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!known_keys().count(section)) throw ConfigError(section, "", line, "unknown section [" + section + "]");
      map[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(section, "", line, "expected key = value, got '" + s + "'");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    const auto hash = value.find('#');
    if (hash != std::string::npos) value = trim(std::string_view(value).substr(0, hash));
    if (section.empty()) throw ConfigError("", key, line, "key outside of any section");
    if (key.empty()) throw ConfigError(section, key, line, "empty key");
    if (!known_keys().at(section).count(key)) throw ConfigError(section, key, line, "unknown key");
    if (map[section].count(key)) {
      throw ConfigError(section, key, line,
                        "duplicate key (first set on line " + std::to_string(map[section][key].line) + ")");
    }
    map[section][key] = Entry{value, line};
  }
  return map;
}

auto positive = [](double v) { return v > 0.0; };
auto nonnegative = [](double v) { return v >= 0.0; };

void check_cross_fields(const RunConfig& c, const Reader& r) {
  if (c.time.dt_min > c.time.dt_max) r.fail("time", "dt_min", "must not exceed time.dt_max");
  if (c.boundary_preset == BoundaryPreset::cosine_ramp && !(c.ramp_period > 0.0)) {
    r.fail("boundary", "ramp_period", "must be > 0 for the cosine-ramp preset");
  }
  for (std::size_t k = 0; k < c.sweep.mu_values.size(); ++k) {
    if (!(c.sweep.mu_values[k] > 0.0)) r.fail("sweep", "mu_values", "entries must be > 0");
    if (k > 0 && !(c.sweep.mu_values[k] < c.sweep.mu_values[k - 1])) {
      r.fail("sweep", "mu_values", "must be strictly decreasing");
    }
  }
  for (double d : c.sweep.tau_deltas) {
    if (!(d > 0.0 && d < 0.5)) r.fail("sweep", "tau_deltas", "entries must lie in (0, 1/2)");
  }
  if (c.initial_preset == InitialPreset::wb_zero && c.initial_table.empty() &&
      c.boundary_preset == BoundaryPreset::constant && c.amplitude != 0.0) {
    r.fail("initial", "preset", "wb-zero needs boundary data vanishing at t = 0; constant amplitude is nonzero");
  }
}

}  // namespace

ConfigError::ConfigError(std::string section_, std::string key_, int line_, const std::string& what)
    : InvalidInput([&] {
        std::string where = line_ > 0 ? "config line " + std::to_string(line_) : std::string("config");
        std::string name = key_.empty() ? "[" + section_ + "]" : section_ + "." + key_;
        if (section_.empty() && key_.empty()) return where + ": " + what;
        return where + ": " + name + ": " + what;
      }()),
      section(std::move(section_)),
      key(std::move(key_)),
      line(line_) {}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

GridSpec RunConfig::grid() const { return GridSpec::uniform(n_cells); }

BoundaryData RunConfig::boundary() const {
  switch (boundary_preset) {
    case BoundaryPreset::zero:
      return BoundaryData::zero();
    case BoundaryPreset::constant:
      return BoundaryData::constant(amplitude);
    case BoundaryPreset::cosine_ramp:
      return BoundaryData::cosine_ramp(amplitude, ramp_period);
    case BoundaryPreset::custom:
      break;
  }
  throw InvalidInput("boundary.preset custom cannot be configured from text");
}

FlowState RunConfig::initial_state(const GridSpec& g) const {
  if (initial_table.empty()) return make_initial_state(g, initial_preset, boundary());
  std::filesystem::path p(initial_table);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return make_initial_state(g, load_profile_table(p), boundary());
}

Scenario RunConfig::scenario() const {
  Scenario sc;
  sc.grid = grid();
  sc.params = physics;
  sc.bdry = boundary();
  sc.initial = initial_state(sc.grid);
  sc.time = time;
  return sc;
}

SweepPlan RunConfig::sweep_plan() const {
  SweepPlan plan;
  plan.mu_values = sweep.mu_values;
  plan.scenario = scenario();
  plan.reference = sweep.reference;
  plan.bl_tol = sweep.bl_tol;
  plan.tau_deltas = sweep.tau_deltas;
  plan.max_workers = sweep.workers;
  return plan;
}

bool same_settings(const RunConfig& a, const RunConfig& b) { return emit_config(a) == emit_config(b); }

RunConfig parse_config(std::string_view text) {
  const Reader r(tokenize(text));
  RunConfig c;

  if (!r.find("grid", "n_cells")) throw ConfigError("grid", "n_cells", 0, "missing required key");
  c.n_cells = r.integer("grid", "n_cells", 0, 8);

  PhysParams& p = c.physics;
  p.lambda = r.number("physics", "lambda", p.lambda, positive, "> 0");
  p.mu = r.number("physics", "mu", p.mu, nonnegative, ">= 0");
  p.nu = r.number("physics", "nu", p.nu, positive, "> 0");
  p.gamma = r.number("physics", "gamma", p.gamma, positive, "> 0");
  p.c_v = r.number("physics", "c_v", p.c_v, positive, "> 0");
  p.kappa_model.kappa1 = r.number("physics", "kappa1", p.kappa_model.kappa1, positive, "> 0");
  p.kappa_model.kappa2 = r.number("physics", "kappa2", p.kappa_model.kappa2, nonnegative, ">= 0");
  p.kappa_model.q = r.number("physics", "q", p.kappa_model.q, positive, "> 0");

  const Entry* preset = r.find("initial", "preset");
  const Entry* table = r.find("initial", "table");
  if (preset && table) r.fail("initial", "table", "preset and table are mutually exclusive");
  if (preset) {
    try {
      c.initial_preset = initial_preset_from_string(preset->value);
    } catch (const InvalidInput& e) {
      r.fail("initial", "preset", e.what());
    }
  }
  if (table) {
    if (table->value.empty()) r.fail("initial", "table", "empty path");
    c.initial_table = table->value;
  }

  if (const Entry* e = r.find("boundary", "preset")) {
    try {
      c.boundary_preset = boundary_preset_from_string(e->value);
    } catch (const InvalidInput& ex) {
      r.fail("boundary", "preset", ex.what());
    }
    if (c.boundary_preset == BoundaryPreset::custom) r.fail("boundary", "preset", "custom is not configurable");
  }
  c.amplitude = r.number("boundary", "amplitude", c.amplitude, [](double) { return true; }, "finite");
  c.ramp_period = r.number("boundary", "ramp_period", c.ramp_period, positive, "> 0");

  TimeConfig& t = c.time;
  if (!r.find("time", "t_end")) throw ConfigError("time", "t_end", 0, "missing required key");
  t.t_end = r.number("time", "t_end", t.t_end, nonnegative, ">= 0");
  t.cfl = r.number("time", "cfl", t.cfl, [](double v) { return v > 0.0 && v <= 1.0; }, "in (0, 1]");
  t.dt_max = r.number("time", "dt_max", t.dt_max, positive, "> 0");
  t.dt_min = r.number("time", "dt_min", t.dt_min, positive, "> 0");
  t.snapshot_stride = r.integer("time", "snapshot_stride", t.snapshot_stride, 1);
  t.linear_solver_tol = r.number("time", "linear_solver_tol", t.linear_solver_tol, positive, "> 0");

  if (const Entry* e = r.find("output", "directory")) {
    if (e->value.empty()) r.fail("output", "directory", "empty path");
    c.output_directory = e->value;
  }
  if (const Entry* e = r.find("output", "formats")) {
    c.formats.clear();
    for (const auto& f : split_list(e->value)) {
      if (f != "csv" && f != "json") r.fail("output", "formats", "unknown format '" + f + "' (expected csv, json)");
      if (!c.wants(f)) c.formats.push_back(f);
    }
    if (c.formats.empty()) r.fail("output", "formats", "expected at least one format");
    std::sort(c.formats.begin(), c.formats.end());
  }

  SweepSettings& s = c.sweep;
  s.mu_values = r.numbers("sweep", "mu_values", s.mu_values);
  if (const Entry* e = r.find("sweep", "reference")) {
    try {
      s.reference = reference_kind_from_string(e->value);
    } catch (const InvalidInput& ex) {
      r.fail("sweep", "reference", ex.what());
    }
  }
  if (const Entry* e = r.find("sweep", "bl_tol"); e && e->value != "auto") {
    s.bl_tol = r.number("sweep", "bl_tol", 0.0, positive, "> 0 or auto");
  }
  s.tau_deltas = r.numbers("sweep", "tau_deltas", s.tau_deltas);
  s.workers = r.integer("sweep", "workers", s.workers, 0);

  check_cross_fields(c, r);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str());
  c.base_dir = path.parent_path();
  return c;
}

std::string emit_config(const RunConfig& c) {
  auto list = [](const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_double(v[k]);
    return out;
  };
  std::ostringstream os;
  os << "[grid]\n"
     << "n_cells = " << c.n_cells << "\n\n"
     << "[physics]\n"
     << "lambda = " << format_double(c.physics.lambda) << "\n"
     << "mu = " << format_double(c.physics.mu) << "\n"
     << "nu = " << format_double(c.physics.nu) << "\n"
     << "gamma = " << format_double(c.physics.gamma) << "\n"
     << "c_v = " << format_double(c.physics.c_v) << "\n"
     << "kappa1 = " << format_double(c.physics.kappa_model.kappa1) << "\n"
     << "kappa2 = " << format_double(c.physics.kappa_model.kappa2) << "\n"
     << "q = " << format_double(c.physics.kappa_model.q) << "\n\n"
     << "[initial]\n";
  if (c.initial_table.empty()) {
    os << "preset = " << to_string(c.initial_preset) << "\n\n";
  } else {
    os << "table = " << c.initial_table << "\n\n";
  }
  os << "[boundary]\n"
     << "preset = " << to_string(c.boundary_preset) << "\n"
     << "amplitude = " << format_double(c.amplitude) << "\n"
     << "ramp_period = " << format_double(c.ramp_period) << "\n\n"
     << "[time]\n"
     << "t_end = " << format_double(c.time.t_end) << "\n"
     << "cfl = " << format_double(c.time.cfl) << "\n"
     << "dt_max = " << format_double(c.time.dt_max) << "\n"
     << "dt_min = " << format_double(c.time.dt_min) << "\n"
     << "snapshot_stride = " << c.time.snapshot_stride << "\n"
     << "linear_solver_tol = " << format_double(c.time.linear_solver_tol) << "\n\n"
     << "[output]\n"
     << "directory = " << c.output_directory << "\n"
     << "formats = ";
  for (std::size_t k = 0; k < c.formats.size(); ++k) os << (k ? ", " : "") << c.formats[k];
  os << "\n\n"
     << "[sweep]\n"
     << "mu_values = " << list(c.sweep.mu_values) << "\n"
     << "reference = " << to_string(c.sweep.reference) << "\n"
     << "bl_tol = " << (c.sweep.bl_tol > 0.0 ? format_double(c.sweep.bl_tol) : std::string("auto")) << "\n"
     << "tau_deltas = " << list(c.sweep.tau_deltas) << "\n"
     << "workers = " << c.sweep.workers << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : emit_config(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_overrides(RunConfig& cfg, std::optional<double> mu, std::optional<int> n_cells,
                     std::optional<double> t_end) {
  if (mu) {
    if (!(*mu >= 0.0) || !std::isfinite(*mu)) throw InvalidInput("--mu must be >= 0");
    cfg.physics.mu = *mu;
  }
  if (n_cells) {
    if (*n_cells < 8) throw InvalidInput("--n-cells must be >= 8");
    cfg.n_cells = *n_cells;
  }
  if (t_end) {
    if (!(*t_end >= 0.0) || !std::isfinite(*t_end)) throw InvalidInput("--t-end must be >= 0");
    cfg.time.t_end = *t_end;
  }
}

TabulatedProfile load_profile_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile table " + path.string());
  const std::vector<std::string> expected{"x", "rho", "u", "w1", "w2", "b1", "b2", "theta"};
  TabulatedProfile t;
  std::string raw;
  int line = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto cols = split_list(s);
    if (!header) {
      if (cols != expected) {
        throw InvalidInput(path.string() + ":" + std::to_string(line) + ": expected header x,rho,u,w1,w2,b1,b2,theta");
      }
      header = true;
      continue;
    }
    if (cols.size() != expected.size()) {
      throw InvalidInput(path.string() + ":" + std::to_string(line) + ": expected 8 columns");
    }
    double v[8];
    for (int k = 0; k < 8; ++k) {
      const auto* first = cols[k].data();
      const auto* last = first + cols[k].size();
      const auto [p, ec] = std::from_chars(first, last, v[k]);
      if (ec != std::errc() || p != last || cols[k].empty()) {
        throw InvalidInput(path.string() + ":" + std::to_string(line) + ": bad number in column " + expected[k]);
      }
    }
    t.rho.push_back(v[1]);
    t.u.push_back(v[2]);
    t.w.push_back(Vec2{v[3], v[4]});
    t.b.push_back(Vec2{v[5], v[6]});
    t.theta.push_back(v[7]);
  }
  if (!header) throw InvalidInput(path.string() + ": empty profile table");
  return t;
}

}  // namespace planemhd
