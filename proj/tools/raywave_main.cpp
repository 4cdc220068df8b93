#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "raywave/config.hpp"
#include "raywave/field_assembler.hpp"
#include "raywave/parallel.hpp"
#include "raywave/ray_tracer.hpp"
#include "raywave/reference_oracle.hpp"

namespace fs = std::filesystem;
using namespace raywave;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string numbered(const std::string& tag, std::size_t k,
                     const char* ext = ".rwv") {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%02zu", k);
  return tag + buf + ext;
}

double effective_band(const RunSetup& rs) {
  return rs.band > 0.0 ? rs.band
                       : 12.0 * rs.scales.mu * rs.scales.omega() *
                             rs.spatial.b_max();
}

void emit_grid(const FieldGrid& g, const fs::path& out, const std::string& tag,
               std::size_t k, bool text) {
  write_field(g, (out / numbered(tag, k)).string());
  if (text) write_field_text(g, (out / numbered(tag, k, ".txt")).string());
}

double grid_l2(const FieldGrid& g) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < g.values.size(); ++i)
    if (!g.mask[i]) {
      s += g.values[i] * g.values[i];
      ++n;
    }
  return n ? std::sqrt(s / n) : 0.0;
}

// least-squares slope of log(norm) against t; nan with fewer than two samples
double fit_log_slope(const std::vector<double>& t,
                     const std::vector<double>& norm) {
  if (t.size() < 2) return std::nan("");
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = std::log(norm[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  const double n = double(t.size());
  return (n * sty - st * sy) / (n * stt - st * st);
}

void require_snapshots(const RunSetup& rs) {
  if (rs.snapshots.empty())
    throw ConfigError("snapshots: at least one time is required for this mode");
  if (rs.snapshots.front() <= 0.0)
    throw ConfigError("snapshots: times must be positive");
}

int run_asymptotic(const RunSetup& rs, const fs::path& out, bool text) {
  require_snapshots(rs);
  const auto front = build_front(rs.velocity, rs.front_angles, rs.snapshots,
                                 rs.ray_tolerance);
  const ProfileFn pf{&rs.spatial, &rs.temporal, rs.scales.omega(),
                     rs.profile_mode};
  for (std::size_t k = 0; k < rs.snapshots.size(); ++k) {
    const double t = rs.snapshots[k];
    const auto tr = transient_field(rs.scales, rs.spatial, rs.temporal,
                                    rs.grid, t, rs.psi_nodes);
    const auto pr = propagating_field(front, pf, rs.scales, rs.grid, t,
                                      rs.band, rs.focal_threshold);
    const auto tot = total_field(tr, pr);
    emit_grid(tr, out, "transient", k, text);
    emit_grid(pr, out, "propagating", k, text);
    emit_grid(tot, out, "total", k, text);
  }
  return 0;
}

FDConfig oracle_config(const RunSetup& rs) {
  FDConfig fc;
  fc.half_extent = rs.oracle_half_extent;
  fc.h = rs.oracle_h;
  fc.dt = rs.oracle_dt;
  fc.t_end = rs.snapshots.back();
  fc.velocity = &rs.velocity;
  fc.scales = rs.scales;
  fc.spatial = rs.spatial;
  fc.temporal = rs.temporal;
  fc.comparison_radius = rs.compare_center_radius > 0.0
                             ? rs.compare_center_radius
                             : effective_band(rs);
  return fc;
}

int run_oracle(const RunSetup& rs, const fs::path& out, bool text) {
  require_snapshots(rs);
  const auto sol = solve_fd(oracle_config(rs), rs.snapshots);
  for (std::size_t k = 0; k < sol.eta.size(); ++k)
    emit_grid(sol.eta[k], out, "oracle", k, text);
  return 0;
}

int run_compare(const RunSetup& rs, const fs::path& out, bool text,
                double transient_cutoff, const std::string& notes) {
  require_snapshots(rs);
  const auto sol = solve_fd(oracle_config(rs), rs.snapshots);
  const auto front = build_front(rs.velocity, rs.front_angles, rs.snapshots,
                                 rs.ray_tolerance);
  const ProfileFn pf{&rs.spatial, &rs.temporal, rs.scales.omega(),
                     rs.profile_mode};

  std::vector<double> rel_l2(rs.snapshots.size(), 0.0);
  std::vector<double> mask_cov(rs.snapshots.size(), 0.0);
  std::vector<int> skipped(rs.snapshots.size(), 0);
  std::vector<double> fit_t, fit_norm;

  for (std::size_t k = 0; k < rs.snapshots.size(); ++k) {
    const double t = rs.snapshots[k];
    const FieldGrid& ora = sol.eta[k];
    GridSpec gs{ora.origin, ora.spacing, ora.nx, ora.ny};
    const auto pr = propagating_field(front, pf, rs.scales, gs, t, rs.band,
                                      rs.focal_threshold);
    FieldGrid tot = pr;
    // the transient carries an e^{-lambda t} envelope; beyond the cutoff it
    // sits many orders below the comparison tolerance and is not evaluated
    if (rs.scales.lambda * t < transient_cutoff) {
      const auto tr = transient_field(rs.scales, rs.spatial, rs.temporal, gs,
                                      t, rs.psi_nodes);
      tot = total_field(tr, pr);
      fit_t.push_back(t);
      fit_norm.push_back(grid_l2(tr));
    } else {
      skipped[k] = 1;
    }
    tot.component = FieldComponent::total;

    double num = 0.0, den = 0.0;
    std::size_t masked = 0;
    for (int j = 0; j < ora.ny; ++j)
      for (int i = 0; i < ora.nx; ++i) {
        if (tot.masked(i, j)) {
          ++masked;
          continue;
        }
        // band membership: cells where the front formula contributes
        if (pr.at(i, j) == 0.0) continue;
        const double d = tot.at(i, j) - ora.at(i, j);
        num += d * d;
        den += ora.at(i, j) * ora.at(i, j);
      }
    rel_l2[k] = den > 0.0 ? std::sqrt(num / den) : 0.0;
    mask_cov[k] = double(masked) / double(tot.values.size());

    emit_grid(tot, out, "total", k, text);
    emit_grid(ora, out, "oracle", k, text);
  }

  const double slope = fit_log_slope(fit_t, fit_norm);
  const double expected = -rs.scales.nu * rs.scales.lambda;
  const double headline = rel_l2.back();

  std::ofstream rep(out / "report.txt");
  std::ofstream kv(out / "report.kv");
  rep << "comparison report: asymptotic field vs finite-difference"
         " reference\n";
  if (!notes.empty()) rep << "assumption: " << notes << "\n";
  rep << "headline banded relative L2 error (last snapshot): "
      << fmt(headline) << "\n\n";
  kv << "rel_l2_band = " << fmt(headline) << "\n";
  if (!notes.empty()) kv << "notes = " << notes << "\n";
  for (std::size_t k = 0; k < rs.snapshots.size(); ++k) {
    rep << "t = " << fmt(rs.snapshots[k])
        << ": banded rel L2 = " << fmt(rel_l2[k])
        << ", mask coverage = " << fmt(mask_cov[k])
        << (skipped[k] ? ", transient skipped (decay cutoff)" : "") << "\n";
    kv << "rel_l2_band_" << k << " = " << fmt(rel_l2[k]) << "\n";
    kv << "mask_coverage_" << k << " = " << fmt(mask_cov[k]) << "\n";
    kv << "transient_skipped_" << k << " = " << skipped[k] << "\n";
  }
  rep << "\ntransient decay: fitted log-norm slope "
      << fmt(slope) << " (expected " << fmt(expected) << ")\n";
  kv << "transient_decay_slope = " << fmt(slope) << "\n";
  kv << "transient_decay_expected = " << fmt(expected) << "\n";
  return 0;
}

int run_profile(const RunSetup& rs, const fs::path& out) {
  if (rs.profile_z.empty() || rs.profile_psi.empty())
    throw ConfigError("profile.z / profile.psi: sample lists required");
  const ProfileFn pf{&rs.spatial, &rs.temporal, rs.scales.omega(),
                     rs.profile_mode};
  std::ofstream os(out / "profile.txt");
  os << "# z psi re im\n";
  for (double z : rs.profile_z)
    for (double psi : rs.profile_psi) {
      const cplx f = wave_profile(pf, z, psi);
      os << fmt(z) << " " << fmt(psi) << " " << fmt(f.real()) << " "
         << fmt(f.imag()) << "\n";
    }
  return 0;
}

int run_rays(const RunSetup& rs, const fs::path& out) {
  require_snapshots(rs);
  const auto front = build_front(rs.velocity, rs.front_angles, rs.snapshots,
                                 rs.ray_tolerance);
  std::ofstream os(out / "rays.txt");
  os << "# xpsi_consistency = " << fmt(front.xpsi_consistency) << "\n";
  os << "# t psi x y px py xpsi_x xpsi_y morse focal c\n";
  for (std::size_t it = 0; it < front.times.size(); ++it)
    for (int ip = 0; ip < front.psi_count; ++ip) {
      const FrontSample& s = front.at(it, ip);
      os << fmt(front.times[it]) << " " << fmt(front.psi_of(ip)) << " "
         << fmt(s.X.x) << " " << fmt(s.X.y) << " " << fmt(s.P.x) << " "
         << fmt(s.P.y) << " " << fmt(s.Xpsi.x) << " " << fmt(s.Xpsi.y) << " "
         << s.morse << " " << (s.focal ? 1 : 0) << " " << fmt(s.c_at) << "\n";
    }
  std::ofstream ft(out / "focal_times.txt");
  ft << "# psi followed by the sorted focal times of that ray\n";
  for (int ip = 0; ip < front.psi_count; ++ip) {
    ft << fmt(front.psi_of(ip));
    for (double t : front.focal_times[ip]) ft << " " << fmt(t);
    ft << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptotic wave field simulator"};
  std::string mode, config_path, out_dir = "out";
  int threads = 0;
  app.add_option("mode", mode, "asymptotic | oracle | compare | profile | rays")
      ->required()
      ->check(CLI::IsMember(
          {"asymptotic", "oracle", "compare", "profile", "rays"}));
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--threads", threads, "worker thread count (default: auto)");
  CLI11_PARSE(app, argc, argv);

  if (threads > 0) thread_count() = threads;

  try {
    Config cfg = Config::parse_file(config_path);
    const bool need_grid = (mode == "asymptotic");
    const bool need_oracle = (mode == "oracle" || mode == "compare");
    // mode-local keys, consumed before the unknown-key sweep in load_run_setup
    const bool text = cfg.get_int("text_output", 0) != 0;
    const double transient_cutoff =
        cfg.get_double("compare.transient_lambda_t_cutoff", 25.0);
    const std::string notes = cfg.get_string("report.notes", "");
    const RunSetup rs = load_run_setup(cfg, need_grid, need_oracle);

    const fs::path out(out_dir);
    fs::create_directories(out);
    {
      std::ofstream echo(out / "resolved.cfg");
      echo << cfg.echo();
      std::ofstream log(out / "run.log", std::ios::app);
      const auto now = std::chrono::system_clock::now();
      log << "mode=" << mode << " config=" << config_path << " unix_time="
          << std::chrono::duration_cast<std::chrono::seconds>(
                 now.time_since_epoch())
                 .count()
          << "\n";
    }

    if (mode == "asymptotic") return run_asymptotic(rs, out, text);
    if (mode == "oracle") return run_oracle(rs, out, text);
    if (mode == "compare")
      return run_compare(rs, out, text, transient_cutoff, notes);
    if (mode == "profile") return run_profile(rs, out);
    return run_rays(rs, out);
  } catch (const ConfigError& e) {
    std::cerr << "raywave: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "raywave: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "raywave: " << mode << ": " << e.what() << "\n";
    return 1;
  }
}
