#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "raywave/field_assembler.hpp"
#include "raywave/sources.hpp"
#include "raywave/velocity.hpp"

namespace raywave {

// Raised for every malformed, missing, or unknown configuration entry; the
// message carries "file:line" where one is available.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `dotted.key = value` text format, '#' comments, one entry per line.
// Values are numbers, words, number lists, or ';'-separated number groups.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& name = "<config>");

  bool has(const std::string& key) const;

  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key, int fallback);
  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::vector<double> get_doubles(const std::string& key);
  std::vector<double> get_doubles(const std::string& key,
                                  std::vector<double> fallback);
  // groups split on ';', each a fixed-width number list (e.g. velocity bumps)
  std::vector<std::vector<double>> get_groups(const std::string& key,
                                              std::size_t group_size);

  // unknown keys are configuration mistakes, not extensions
  void check_unused() const;

  // fully resolved echo: every key consulted during the run, including the
  // defaults that were filled in, in sorted order
  std::string echo() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
  };
  std::string where(const std::string& key) const;
  const std::string* fetch(const std::string& key);
  void note_default(const std::string& key, const std::string& value);

  std::string name_ = "<config>";
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> resolved_;
};

// Everything the CLI modes need, assembled and validated from a Config.
struct RunSetup {
  ScaleParams scales;
  SpatialSource spatial;
  TemporalSource temporal;
  VelocityField velocity = VelocityField::constant(1.0);
  GridSpec grid;
  std::vector<double> snapshots;

  double band = 0.0;  // 0 = auto
  double focal_threshold = 1e-3;
  int psi_nodes = 0;  // transient angular nodes, 0 = auto
  int front_angles = 512;
  double ray_tolerance = 1e-9;

  ProfileFn::Mode profile_mode = ProfileFn::Mode::closed_form;
  std::vector<double> profile_z, profile_psi;

  double oracle_half_extent = 0.0;
  double oracle_h = 0.0;
  double oracle_dt = 0.0;

  double compare_center_radius = 0.0;  // report region for the residual norm
};

// `need_grid`/`need_oracle` widen the set of required keys per CLI mode.
RunSetup load_run_setup(Config& cfg, bool need_grid, bool need_oracle);

}  // namespace raywave
