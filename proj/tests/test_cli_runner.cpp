#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "raywave/config.hpp"
#include "raywave/field_assembler.hpp"

using namespace raywave;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "raywave_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream os(p);
  os << text;
  return p;
}

int run_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd = std::string("\"") + RAYWAVE_CLI_PATH + "\" " + args +
                          " 2> \"" + err_file.string() + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

const std::string kBaseSource =
    "scales.lambda = 5\n"
    "scales.mu = 0.1\n"
    "spatial.b1 = 1\n"
    "spatial.b2 = 1.5\n"
    "temporal.kind = sine\n"
    "temporal.alpha = 2\n";

}  // namespace

TEST_CASE("config parser: values, defaults, comments, echo") {
  auto cfg = Config::parse_string(
      "# leading comment\n"
      "a.x = 2.5  # trailing comment\n"
      "a.word = hello\n"
      "list = 1 2 3\n"
      "groups = 0.5 1 2 0.3 ; -0.2 0 1 0.4\n",
      "inline");
  CHECK(cfg.get_double("a.x") == 2.5);
  CHECK(cfg.get_string("a.word") == "hello");
  CHECK(cfg.get_doubles("list") == std::vector<double>{1, 2, 3});
  const auto g = cfg.get_groups("groups", 4);
  REQUIRE(g.size() == 2);
  CHECK(g[1][0] == -0.2);
  CHECK(cfg.get_double("absent", 7.0) == 7.0);
  CHECK_NOTHROW(cfg.check_unused());
  const std::string echo = cfg.echo();
  CHECK(echo.find("a.x = 2.5") != std::string::npos);
  CHECK(echo.find("absent = 7") != std::string::npos);  // default recorded
}

TEST_CASE("config parser: line-anchored diagnostics") {
  CHECK_THROWS_WITH_AS(Config::parse_string("ok = 1\nnonsense line\n", "f"),
                       doctest::Contains("f:2"), ConfigError);
  CHECK_THROWS_WITH_AS(Config::parse_string("k = 1\nk = 2\n", "f"),
                       doctest::Contains("duplicate"), ConfigError);
  auto cfg = Config::parse_string("x = abc\ny = 1\n", "f");
  CHECK_THROWS_WITH_AS(cfg.get_double("x"), doctest::Contains("f:1"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(cfg.get_double("missing"),
                       doctest::Contains("missing"), ConfigError);
  auto cfg2 = Config::parse_string("used = 1\nstray.key = 2\n", "f");
  cfg2.get_double("used");
  CHECK_THROWS_WITH_AS(cfg2.check_unused(), doctest::Contains("stray.key"),
                       ConfigError);
}

TEST_CASE("run setup: required fields, omega bound, velocity bumps") {
  auto missing = Config::parse_string(kBaseSource.substr(
      0, kBaseSource.find("spatial.b2")));
  CHECK_THROWS_WITH_AS(load_run_setup(missing, false, false),
                       doctest::Contains("spatial.b2"), ConfigError);

  auto bound = Config::parse_string(kBaseSource + "scales.omega_max = 1\n");
  // omega = 1/(5 * 0.1) = 2 > 1
  CHECK_THROWS_WITH_AS(load_run_setup(bound, false, false),
                       doctest::Contains("omega"), ConfigError);

  auto ok = Config::parse_string(kBaseSource +
                                 "velocity.kind = gaussian_sum\n"
                                 "velocity.bumps = 0.3 0.5 -0.2 0.8 ; "
                                 "-0.1 1 1 0.5\n");
  const RunSetup rs = load_run_setup(ok, false, false);
  CHECK(rs.scales.omega() == doctest::Approx(2.0));
  CHECK(rs.velocity.c({0.5, -0.2}) > 1.0);

  auto bad_group = Config::parse_string(kBaseSource +
                                        "velocity.kind = gaussian_sum\n"
                                        "velocity.bumps = 0.3 0.5\n");
  CHECK_THROWS_WITH_AS(load_run_setup(bad_group, false, false),
                       doctest::Contains("4"), ConfigError);
}

TEST_CASE("cli: malformed config exits 2 and names the field") {
  const auto cfg = write_file("missing_b2.cfg",
                              "scales.lambda = 5\n"
                              "scales.mu = 0.1\n"
                              "spatial.b1 = 1\n");
  const auto err = scratch() / "missing_b2.err";
  const int code =
      run_cli("profile --config \"" + cfg.string() + "\" --out \"" +
                  (scratch() / "missing_b2_out").string() + "\"",
              err);
  CHECK(code == 2);
  CHECK(slurp(err).find("spatial.b2") != std::string::npos);

  const auto err2 = scratch() / "nofile.err";
  CHECK(run_cli("profile --config /no/such/file.cfg", err2) == 2);
}

TEST_CASE("cli: profile mode matches the library evaluation") {
  const auto cfg = write_file("profile.cfg", kBaseSource +
                                                 "profile.z = -0.5 0.8\n"
                                                 "profile.psi = 0.3\n");
  const fs::path out = scratch() / "profile_out";
  const auto err = scratch() / "profile.err";
  REQUIRE(run_cli("profile --config \"" + cfg.string() + "\" --out \"" +
                      out.string() + "\"",
                  err) == 0);
  CHECK(fs::exists(out / "resolved.cfg"));

  std::ifstream is(out / "profile.txt");
  std::string header;
  std::getline(is, header);
  const SpatialSource sp{1.0, 1.0, 1.5, 0.0, 0, 0};
  const auto tm = TemporalSource::sine(2.0, 0.0);
  const ProfileFn pf{&sp, &tm, 2.0, ProfileFn::Mode::closed_form};
  int rows = 0;
  double z, psi, re, im;
  while (is >> z >> psi >> re >> im) {
    const cplx f = wave_profile(pf, z, psi);
    CHECK(re == doctest::Approx(f.real()).epsilon(1e-12));
    CHECK(im == doctest::Approx(f.imag()).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("cli: rays mode dumps the front chart") {
  const auto cfg = write_file("rays.cfg", kBaseSource +
                                              "front_angles = 64\n"
                                              "snapshots = 0.5 1.0\n");
  const fs::path out = scratch() / "rays_out";
  const auto err = scratch() / "rays.err";
  REQUIRE(run_cli("rays --config \"" + cfg.string() + "\" --out \"" +
                      out.string() + "\"",
                  err) == 0);
  std::ifstream is(out / "rays.txt");
  std::string line;
  int rows = 0, comments = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#')
      ++comments;
    else
      ++rows;
  }
  CHECK(rows == 2 * 64);
  CHECK(comments == 2);
  std::ifstream ft(out / "focal_times.txt");
  rows = 0;
  while (std::getline(ft, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 64);
}

TEST_CASE("cli: asymptotic mode emits all components deterministically") {
  const std::string body = kBaseSource +
                           "grid.origin = -0.8 -0.8\n"
                           "grid.spacing = 0.2 0.2\n"
                           "grid.nx = 9\n"
                           "grid.ny = 9\n"
                           "front_angles = 128\n"
                           "snapshots = 0.5\n"
                           "text_output = 1\n";
  const auto cfg = write_file("asym.cfg", body);
  const fs::path out1 = scratch() / "asym_out1";
  const fs::path out2 = scratch() / "asym_out2";
  const auto err = scratch() / "asym.err";
  REQUIRE(run_cli("asymptotic --config \"" + cfg.string() + "\" --out \"" +
                      out1.string() + "\" --threads 4",
                  err) == 0);
  REQUIRE(run_cli("asymptotic --config \"" + cfg.string() + "\" --out \"" +
                      out2.string() + "\" --threads 2",
                  err) == 0);
  for (const char* tag : {"transient_00", "propagating_00", "total_00"}) {
    const fs::path f1 = out1 / (std::string(tag) + ".rwv");
    REQUIRE(fs::exists(f1));
    CHECK(fs::exists(out1 / (std::string(tag) + ".txt")));
    // determinism: different thread counts, bit-identical payloads
    CHECK(slurp(f1) == slurp(out2 / (std::string(tag) + ".rwv")));
  }
  const FieldGrid tr = read_field((out1 / "transient_00.rwv").string());
  const FieldGrid tot = read_field((out1 / "total_00.rwv").string());
  CHECK(tr.component == FieldComponent::transient);
  CHECK(tot.component == FieldComponent::total);
  CHECK(tr.nx == 9);
  CHECK(tr.t == 0.5);
  // library cross-check of one emitted value
  const auto direct = transient_field({5.0, 0.1, 1.0, 1.0},
                                      {1.0, 1.0, 1.5, 0.0, 0, 0},
                                      TemporalSource::sine(2.0, 0.0),
                                      {{-0.8, -0.8}, {0.2, 0.2}, 9, 9}, 0.5);
  CHECK(tr.at(4, 4) == doctest::Approx(direct.at(4, 4)).epsilon(1e-13));
}

TEST_CASE("cli: compare mode writes the banded error report") {
  const std::string body =
      "scales.lambda = 4\n"
      "scales.mu = 0.25\n"
      "spatial.b1 = 1\n"
      "spatial.b2 = 1\n"
      "temporal.kind = sine\n"
      "snapshots = 0.6\n"
      "band = 0.5\n"
      "psi_nodes = 128\n"
      "front_angles = 128\n"
      "oracle.half_extent = 1.5\n"
      "oracle.h = 0.02\n"
      "report.notes = scenario decay-rate constant taken as lambda\n";
  const auto cfg = write_file("compare.cfg", body);
  const fs::path out = scratch() / "compare_out";
  const auto err = scratch() / "compare.err";
  REQUIRE(run_cli("compare --config \"" + cfg.string() + "\" --out \"" +
                      out.string() + "\"",
                  err) == 0);
  CHECK(fs::exists(out / "oracle_00.rwv"));
  CHECK(fs::exists(out / "total_00.rwv"));
  const std::string kv = slurp(out / "report.kv");
  const auto pos = kv.find("rel_l2_band = ");
  REQUIRE(pos != std::string::npos);
  const double rel = std::stod(kv.substr(pos + 14));
  CHECK(rel >= 0.0);
  CHECK(rel < 1.0);  // coarse run, loose sanity bound only
  CHECK(kv.find("mask_coverage_0") != std::string::npos);
  CHECK(kv.find("transient_decay_slope") != std::string::npos);
  const std::string rep = slurp(out / "report.txt");
  CHECK(rep.find("assumption: scenario decay-rate constant") !=
        std::string::npos);
}
