#include "raywave/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace raywave {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& text,
                                  const std::string& context) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      throw ConfigError(context + ": expected a number, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key.find(' ') != std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": malformed key '" + key + "'");
    if (cfg.entries_.count(key))
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "' (first at line " +
                        std::to_string(cfg.entries_[key].line) + ")");
    cfg.entries_[key] = Entry{value, lineno, false};
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string Config::where(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return name_ + ": key '" + key + "'";
  return name_ + ":" + std::to_string(it->second.line) + ": key '" + key + "'";
}

const std::string* Config::fetch(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.used = true;
  resolved_[key] = it->second.value;
  return &it->second.value;
}

void Config::note_default(const std::string& key, const std::string& value) {
  if (!resolved_.count(key)) resolved_[key] = value;
}

double Config::get_double(const std::string& key) {
  const std::string* raw = fetch(key);
  if (!raw) throw ConfigError(name_ + ": missing required key '" + key + "'");
  const auto v = parse_numbers(*raw, where(key));
  if (v.size() != 1)
    throw ConfigError(where(key) + ": expected a single number");
  return v[0];
}

double Config::get_double(const std::string& key, double fallback) {
  if (!has(key)) {
    std::ostringstream os;
    os << fallback;
    note_default(key, os.str());
    return fallback;
  }
  return get_double(key);
}

int Config::get_int(const std::string& key, int fallback) {
  const double v = get_double(key, static_cast<double>(fallback));
  if (v != std::floor(v))
    throw ConfigError(where(key) + ": expected an integer");
  return static_cast<int>(v);
}

std::string Config::get_string(const std::string& key) {
  const std::string* raw = fetch(key);
  if (!raw) throw ConfigError(name_ + ": missing required key '" + key + "'");
  return *raw;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  if (!has(key)) {
    note_default(key, fallback);
    return fallback;
  }
  return get_string(key);
}

std::vector<double> Config::get_doubles(const std::string& key) {
  const std::string* raw = fetch(key);
  if (!raw) throw ConfigError(name_ + ": missing required key '" + key + "'");
  return parse_numbers(*raw, where(key));
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        std::vector<double> fallback) {
  if (!has(key)) {
    std::ostringstream os;
    for (std::size_t i = 0; i < fallback.size(); ++i)
      os << (i ? " " : "") << fallback[i];
    note_default(key, os.str());
    return fallback;
  }
  return get_doubles(key);
}

std::vector<std::vector<double>> Config::get_groups(const std::string& key,
                                                    std::size_t group_size) {
  const std::string* raw = fetch(key);
  if (!raw) throw ConfigError(name_ + ": missing required key '" + key + "'");
  std::vector<std::vector<double>> out;
  std::string text = *raw;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto semi = text.find(';', pos);
    const std::string part =
        text.substr(pos, semi == std::string::npos ? std::string::npos
                                                   : semi - pos);
    const auto nums = parse_numbers(part, where(key));
    if (nums.size() != group_size)
      throw ConfigError(where(key) + ": each ';' group needs " +
                        std::to_string(group_size) + " numbers");
    out.push_back(nums);
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return out;
}

void Config::check_unused() const {
  for (const auto& [key, entry] : entries_)
    if (!entry.used)
      throw ConfigError(name_ + ":" + std::to_string(entry.line) +
                        ": unknown key '" + key + "'");
}

std::string Config::echo() const {
  std::ostringstream os;
  for (const auto& [key, value] : resolved_) os << key << " = " << value
                                                << "\n";
  return os.str();
}

RunSetup load_run_setup(Config& cfg, bool need_grid, bool need_oracle) {
  RunSetup rs;
  rs.scales.lambda = cfg.get_double("scales.lambda");
  rs.scales.mu = cfg.get_double("scales.mu");
  rs.scales.c0 = cfg.get_double("scales.c0", 1.0);
  rs.scales.nu = cfg.get_double("scales.nu", 1.0);
  rs.scales.validate();
  const double omega_max = cfg.get_double("scales.omega_max", 100.0);
  if (rs.scales.omega() > omega_max)
    throw ConfigError("scales: omega = c0/(lambda mu) = " +
                      std::to_string(rs.scales.omega()) +
                      " exceeds scales.omega_max = " +
                      std::to_string(omega_max));

  rs.spatial.A = cfg.get_double("spatial.A", 1.0);
  rs.spatial.b1 = cfg.get_double("spatial.b1");
  rs.spatial.b2 = cfg.get_double("spatial.b2");
  rs.spatial.theta = cfg.get_double("spatial.theta", 0.0);
  rs.spatial.d1 = cfg.get_int("spatial.d1", 0);
  rs.spatial.d2 = cfg.get_int("spatial.d2", 0);
  rs.spatial.validate();

  const std::string tkind = cfg.get_string("temporal.kind", "sine");
  if (tkind == "sine") {
    rs.temporal = TemporalSource::sine(cfg.get_double("temporal.alpha", 2.0),
                                       cfg.get_double("temporal.phi0", 0.0));
  } else if (tkind == "polynomial") {
    rs.temporal = TemporalSource::polynomial(
        cfg.get_doubles("temporal.coeffs"));
  } else if (tkind == "tabulated") {
    const std::string spath = cfg.get_string("temporal.samples_file");
    std::ifstream ss(spath);
    if (!ss)
      throw ConfigError("temporal.samples_file: cannot open '" + spath + "'");
    std::vector<double> samples;
    double v;
    while (ss >> v) samples.push_back(v);
    rs.temporal =
        TemporalSource::tabulated(samples, cfg.get_double("temporal.tau_max"));
  } else {
    throw ConfigError("temporal.kind: expected sine, polynomial or "
                      "tabulated, got '" + tkind + "'");
  }

  const std::string vkind = cfg.get_string("velocity.kind", "constant");
  if (vkind == "constant") {
    rs.velocity = VelocityField::constant(rs.scales.c0);
  } else if (vkind == "gaussian_sum") {
    std::vector<GaussianBump> bumps;
    for (const auto& g : cfg.get_groups("velocity.bumps", 4))
      bumps.push_back({g[0], g[1], g[2], g[3]});
    rs.velocity = VelocityField::gaussian_sum(rs.scales.c0, std::move(bumps));
  } else {
    throw ConfigError("velocity.kind: expected constant or gaussian_sum, "
                      "got '" + vkind + "'");
  }

  if (need_grid || cfg.has("grid.nx")) {
    const auto origin = cfg.get_doubles("grid.origin");
    const auto spacing = cfg.get_doubles("grid.spacing");
    if (origin.size() != 2 || spacing.size() != 2)
      throw ConfigError("grid.origin / grid.spacing: expected two numbers");
    rs.grid.origin = {origin[0], origin[1]};
    rs.grid.spacing = {spacing[0], spacing[1]};
    rs.grid.nx = cfg.get_int("grid.nx", 0);
    rs.grid.ny = cfg.get_int("grid.ny", 0);
    if (rs.grid.nx <= 0 || rs.grid.ny <= 0)
      throw ConfigError("grid.nx / grid.ny: positive sizes required");
  }

  rs.snapshots = cfg.get_doubles("snapshots", {});
  std::sort(rs.snapshots.begin(), rs.snapshots.end());

  rs.band = cfg.get_double("band", 0.0);
  rs.focal_threshold = cfg.get_double("focal_threshold", 1e-3);
  rs.psi_nodes = cfg.get_int("psi_nodes", 0);
  rs.front_angles = cfg.get_int("front_angles", 512);
  rs.ray_tolerance = cfg.get_double("ray_tolerance", 1e-9);

  const std::string pmode = cfg.get_string("profile.mode", "closed_form");
  if (pmode == "closed_form")
    rs.profile_mode = ProfileFn::Mode::closed_form;
  else if (pmode == "quadrature")
    rs.profile_mode = ProfileFn::Mode::quadrature;
  else
    throw ConfigError("profile.mode: expected closed_form or quadrature");
  rs.profile_z = cfg.get_doubles("profile.z", {});
  rs.profile_psi = cfg.get_doubles("profile.psi", {});

  if (need_oracle || cfg.has("oracle.h")) {
    rs.oracle_half_extent = cfg.get_double("oracle.half_extent");
    rs.oracle_h = cfg.get_double("oracle.h");
    rs.oracle_dt = cfg.get_double("oracle.dt", 0.0);
  }
  rs.compare_center_radius = cfg.get_double("compare.center_radius", 0.0);

  cfg.check_unused();
  return rs;
}

}  // namespace raywave
