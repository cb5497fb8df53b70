#include "runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "errors.hpp"
#include "laser.hpp"
#include "output.hpp"
#include "spectral.hpp"
#include "version.hpp"

namespace plaser {

namespace {

using nlohmann::json;

constexpr double validity_warn_level = 1e-2;

struct SweepPoint {
  std::map<std::string, double> overrides;
  std::vector<std::pair<std::string, double>> id;  // ordered (axis, value)
  std::string tag;                                 // file suffix, empty for single runs
};

std::string index_tag(size_t i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%03zu", i);
  return buf;
}

std::vector<SweepPoint> enumerate_points(const ScenarioConfig& cfg) {
  std::vector<SweepPoint> pts;
  if (!cfg.sweep) {
    pts.push_back({});
    return pts;
  }
  for (size_t i = 0; i < cfg.sweep->values.size(); ++i) {
    if (cfg.sweep_inner) {
      for (size_t k = 0; k < cfg.sweep_inner->values.size(); ++k) {
        SweepPoint p;
        p.overrides[cfg.sweep->name] = cfg.sweep->values[i];
        p.overrides[cfg.sweep_inner->name] = cfg.sweep_inner->values[k];
        p.id = {{cfg.sweep->name, cfg.sweep->values[i]},
                {cfg.sweep_inner->name, cfg.sweep_inner->values[k]}};
        p.tag = index_tag(i) + "_" + index_tag(k);
        pts.push_back(std::move(p));
      }
    } else {
      SweepPoint p;
      p.overrides[cfg.sweep->name] = cfg.sweep->values[i];
      p.id = {{cfg.sweep->name, cfg.sweep->values[i]}};
      p.tag = index_tag(i);
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

struct PointResult {
  bool ok = false;
  std::string status = "ok";
  std::string error;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  double validity_bound = std::numeric_limits<double>::quiet_NaN();
  bool validity_warn = false;
  bool has_dn = false;
  LogValue dN_end;
  double amp_ratio = std::numeric_limits<double>::quiet_NaN();
  int n_peaks = -1;
  double grid_h = std::numeric_limits<double>::quiet_NaN();
  long long grid_steps = 0;
  std::string csv;
  json extra;  // scenario-specific manifest details
};

std::vector<std::string> base_header() {
  return {"t",       "pop1",          "pop2",
          "dN",      "dN_initial",    "dN_drive",
          "dN_noise_thermal", "dN_noise_optical", "validity_bound"};
}

std::vector<std::string> base_fields(const PopulationPoint& pt, const std::string& bound) {
  return {format_double(pt.t),
          pt.s1.total().to_string(),
          pt.s2.total().to_string(),
          pt.inversion().to_string(),
          pt.inversion_initial().to_string(),
          pt.inversion_drive().to_string(),
          pt.inversion_noise_thermal().to_string(),
          pt.inversion_noise_optical().to_string(),
          bound};
}

std::string render_time_csv(const ScenarioConfig& cfg, const PopulationSeries& series,
                            const LaserTrajectory* traj) {
  std::vector<std::string> header = base_header();
  const bool breakdown = cfg.scenario == "noise_breakdown";
  if (breakdown) {
    const std::vector<std::string> more = {
        "pop1_initial",          "pop1_drive",          "pop1_noise_thermal_nplus1",
        "pop1_noise_thermal_nth", "pop1_noise_optical",
        "pop2_initial",          "pop2_drive",          "pop2_noise_thermal_nplus1",
        "pop2_noise_thermal_nth", "pop2_noise_optical",  "mech_occupation"};
    header.insert(header.end(), more.begin(), more.end());
  }
  if (traj) {
    const std::vector<std::string> more = {"b_s_re", "b_s_im", "p_re", "p_im", "amp_ratio"};
    header.insert(header.end(), more.begin(), more.end());
  }
  CsvWriter csv(header);
  const std::string bound = format_double(series.validity_bound);
  const std::string amp = traj ? format_double(traj->amplification) : std::string();
  for (size_t i = 0; i < series.points.size(); ++i) {
    const PopulationPoint& pt = series.points[i];
    std::vector<std::string> fields = base_fields(pt, bound);
    if (breakdown) {
      const auto add_parts = [&](const PopulationParts& p) {
        fields.push_back(p.initial.to_string());
        fields.push_back(p.drive.to_string());
        fields.push_back(p.noise_thermal_nplus1.to_string());
        fields.push_back(p.noise_thermal_nth.to_string());
        fields.push_back(p.noise_optical.to_string());
      };
      add_parts(pt.s1);
      add_parts(pt.s2);
      fields.push_back(pt.mech_occupation.to_string());
    }
    if (traj) {
      fields.push_back(format_double(traj->b_s[i].real()));
      fields.push_back(format_double(traj->b_s[i].imag()));
      fields.push_back(format_double(traj->p[i].real()));
      fields.push_back(format_double(traj->p[i].imag()));
      fields.push_back(amp);
    }
    csv.row(std::move(fields));
  }
  return csv.str();
}

std::string render_spectrum_csv(const ResponseCurve& curve) {
  CsvWriter csv({"Delta", "response", "peak_flag"});
  std::vector<char> is_peak(curve.delta.size(), 0);
  for (int i : curve.peak_indices) is_peak[static_cast<size_t>(i)] = 1;
  for (size_t i = 0; i < curve.delta.size(); ++i)
    csv.row({format_double(curve.delta[i]), format_double(curve.response[i]),
             is_peak[i] ? "1" : "0"});
  return csv.str();
}

PointResult compute_point(const ScenarioConfig& cfg, const SweepPoint& pt, bool want_csv) {
  PointResult res;
  try {
    const SystemParams p = cfg.params_with(pt.overrides);

    if (cfg.scenario == "spectrum") {
      const PTEigensystem eig = pt_eigensystem(p);
      const ResponseCurve curve = classical_response(p, cfg.spectrum_deltas(), cfg.horizon);
      res.n_peaks = static_cast<int>(curve.peak_indices.size());
      if (want_csv) res.csv = render_spectrum_csv(curve);
      res.extra["regime"] = pt_regime_name(eig.regime);
      res.extra["eigenvalues"] = {
          {eig.eigenvalues[0].real(), eig.eigenvalues[0].imag()},
          {eig.eigenvalues[1].real(), eig.eigenvalues[1].imag()}};
      res.extra["overlap"] = {eig.overlap.real(), eig.overlap.imag()};
      res.extra["stationary"] = curve.stationary;
      json peaks = json::array();
      for (int i : curve.peak_indices) peaks.push_back(curve.delta[static_cast<size_t>(i)]);
      res.extra["peak_deltas"] = peaks;
      res.ok = true;
      return res;
    }

    const double t_end = cfg.effective_t_end();
    const TimeGrid grid = TimeGrid::make(p, t_end, cfg.n_steps);
    res.grid_h = grid.h;
    res.grid_steps = grid.n_steps;
    const PopulationSeries series = inversion_series(
        p, grid, cfg.method, cfg.noise_mode, cfg.product_method, cfg.max_output_points);
    res.validity_bound = series.validity_bound;
    res.validity_warn = series.validity_bound > validity_warn_level;
    res.dN_end = final_inversion(series);
    res.has_dn = true;

    if (cfg.scenario == "amplification") {
      const LaserTrajectory traj = integrate_laser(p, series, cfg.b_s0, cfg.p0);
      res.amp_ratio = traj.amplification;
      if (want_csv) res.csv = render_time_csv(cfg, series, &traj);
    } else if (want_csv) {
      res.csv = render_time_csv(cfg, series, nullptr);
    }
    res.ok = true;
  } catch (const SimError& e) {
    res.ok = false;
    res.status = errcode_name(e.code());
    res.error = e.what();
    if (e.code() == ErrCode::Overflow && std::isfinite(e.payload)) res.blowup_time = e.payload;
  } catch (const std::exception& e) {
    res.ok = false;
    res.status = "InternalError";
    res.error = e.what();
  }
  return res;
}

std::vector<PointResult> compute_all(const ScenarioConfig& cfg,
                                     const std::vector<SweepPoint>& pts, bool want_csv) {
  std::vector<PointResult> results(pts.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_workers =
      static_cast<unsigned>(std::min<size_t>(hw, pts.size()));
  if (n_workers <= 1) {
    for (size_t i = 0; i < pts.size(); ++i) results[i] = compute_point(cfg, pts[i], want_csv);
    return results;
  }
  std::atomic<size_t> next{0};
  const auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= pts.size()) break;
      results[i] = compute_point(cfg, pts[i], want_csv);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_workers - 1);
  for (unsigned w = 0; w + 1 < n_workers; ++w) threads.emplace_back(work);
  work();
  for (std::thread& t : threads) t.join();
  return results;
}

json config_manifest(const ScenarioConfig& cfg, const std::string& verb) {
  json m;
  m["tool"] = {{"name", tool_name}, {"version", tool_version}};
  m["verb"] = verb;
  m["scenario"] = cfg.scenario;
  m["method"] = evolution_method_name(cfg.method);
  if (cfg.method == EvolutionMethod::product)
    m["product_method"] = product_method_name(cfg.product_method);
  m["noise_mode"] = noise_mode_name(cfg.noise_mode);
  m["params"] = {{"gamma", cfg.params.gamma}, {"g", cfg.params.g},
                 {"J", cfg.params.J},         {"omega_m", cfg.params.omega_m},
                 {"gamma_m", cfg.params.gamma_m}, {"g_m", cfg.params.g_m},
                 {"E", cfg.params.E},         {"Delta", cfg.params.Delta},
                 {"n_th", cfg.params.n_th}};
  if (!cfg.raw_params.empty()) {
    json raw;
    for (const auto& kv : cfg.raw_params) raw[kv.first] = kv.second;
    m["param_expressions"] = raw;
  }
  if (cfg.scenario != "spectrum") {
    m["grid"] = {{"t_end", cfg.effective_t_end()},
                 {"n_steps_requested", cfg.n_steps},
                 {"max_output_points", cfg.max_output_points}};
  } else {
    m["spectrum"] = {{"delta_min", cfg.delta_min},
                     {"delta_max", cfg.delta_max},
                     {"n_delta", cfg.n_delta},
                     {"horizon", cfg.horizon}};
  }
  if (cfg.scenario == "amplification") {
    m["laser"] = {{"b_s0", {cfg.b_s0.real(), cfg.b_s0.imag()}},
                  {"p0", {cfg.p0.real(), cfg.p0.imag()}}};
  }
  const auto axis_json = [](const SweepAxis& a) {
    return json{{"axis", a.name}, {"values", a.values}};
  };
  if (cfg.sweep) m["sweep"] = axis_json(*cfg.sweep);
  if (cfg.sweep_inner) m["sweep_inner"] = axis_json(*cfg.sweep_inner);
  return m;
}

json point_manifest(const SweepPoint& pt, const PointResult& res, const std::string& file) {
  json j;
  if (!file.empty()) j["file"] = file;
  json axes = json::object();
  for (const auto& kv : pt.id) axes[kv.first] = kv.second;
  j["axes"] = axes;
  j["status"] = res.status;
  if (!res.ok) j["error"] = res.error;
  if (std::isfinite(res.blowup_time)) j["blowup_time"] = res.blowup_time;
  if (std::isfinite(res.validity_bound)) {
    j["validity_bound"] = res.validity_bound;
    j["validity"] = res.validity_warn ? "warn" : "ok";
  }
  if (res.has_dn) j["dN_end"] = res.dN_end.to_string();
  if (std::isfinite(res.amp_ratio)) j["amp_ratio"] = res.amp_ratio;
  if (res.n_peaks >= 0) j["n_peaks"] = res.n_peaks;
  if (res.grid_steps > 0) j["grid"] = {{"h", res.grid_h}, {"n_steps", res.grid_steps}};
  if (!res.extra.is_null()) j["details"] = res.extra;
  return j;
}

int exit_code_for(const std::vector<PointResult>& results) {
  size_t failed = 0;
  bool config = false;
  for (const PointResult& r : results) {
    if (!r.ok) {
      ++failed;
      if (r.status == errcode_name(ErrCode::ConfigError)) config = true;
    }
  }
  if (failed == 0) return 0;
  if (config) return 1;
  if (failed == results.size()) return 2;
  return 3;
}

// Human-readable one-liner; clamps roundoff-negative populations (raw values
// stay in the CSV).
void print_point_line(const SweepPoint& pt, const PointResult& res) {
  std::ostringstream line;
  line << "  [" << (pt.tag.empty() ? "run" : pt.tag) << "]";
  for (const auto& kv : pt.id) line << " " << kv.first << "=" << format_double(kv.second);
  if (res.ok) {
    line << " status=ok";
    if (res.has_dn) line << " dN_end=" << res.dN_end.to_string();
    if (std::isfinite(res.amp_ratio)) line << " amp_ratio=" << format_double(res.amp_ratio);
    if (res.n_peaks >= 0) line << " peaks=" << res.n_peaks;
    if (std::isfinite(res.validity_bound)) {
      line << " bound=" << format_double(res.validity_bound);
      if (res.validity_warn) line << " validity=warn";
    }
  } else {
    line << " status=" << res.status << " (" << res.error << ")";
    if (std::isfinite(res.blowup_time))
      line << " blowup_time=" << format_double(res.blowup_time);
  }
  std::cout << line.str() << "\n";
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg, const std::string& verb) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SweepPoint> pts = enumerate_points(cfg);
  std::vector<PointResult> results = compute_all(cfg, pts, true);

  namespace fs = std::filesystem;
  json manifest = config_manifest(cfg, verb);
  json jpoints = json::array();
  size_t written = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    std::string file;
    if (results[i].ok) {
      file = cfg.scenario + (pts[i].tag.empty() ? "" : "_" + pts[i].tag) + ".csv";
      write_file_atomic((fs::path(cfg.out_dir) / file).string(), results[i].csv);
      ++written;
    }
    jpoints.push_back(point_manifest(pts[i], results[i], file));
    print_point_line(pts[i], results[i]);
  }
  manifest["points"] = jpoints;
  const int code = exit_code_for(results);
  manifest["exit_code"] = code;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file_atomic((fs::path(cfg.out_dir) / "run.json").string(), manifest.dump(2) + "\n");
  std::cout << "wrote " << written << " csv file(s) and run.json to " << cfg.out_dir
            << "\n";
  return code;
}

int run_sweep(const ScenarioConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<SweepPoint> pts = enumerate_points(cfg);
  std::vector<PointResult> results = compute_all(cfg, pts, false);

  std::vector<std::string> header;
  if (cfg.sweep) {
    header.push_back(cfg.sweep->name);
    if (cfg.sweep_inner) header.push_back(cfg.sweep_inner->name);
  }
  const size_t n_axes = header.size();
  header.insert(header.end(), {"dN_end", "amp_ratio", "validity_bound", "blowup_time",
                               "status", "validity"});
  CsvWriter csv(header);
  for (size_t i = 0; i < pts.size(); ++i) {
    const PointResult& r = results[i];
    std::vector<std::string> fields;
    for (size_t a = 0; a < n_axes; ++a) fields.push_back(format_double(pts[i].id[a].second));
    fields.push_back(r.has_dn ? r.dN_end.to_string() : "");
    fields.push_back(std::isfinite(r.amp_ratio) ? format_double(r.amp_ratio) : "");
    fields.push_back(std::isfinite(r.validity_bound) ? format_double(r.validity_bound) : "");
    fields.push_back(std::isfinite(r.blowup_time) ? format_double(r.blowup_time) : "");
    fields.push_back(r.status);
    fields.push_back(std::isfinite(r.validity_bound) ? (r.validity_warn ? "warn" : "ok") : "");
    csv.row(std::move(fields));
    print_point_line(pts[i], r);
  }

  namespace fs = std::filesystem;
  write_file_atomic((fs::path(cfg.out_dir) / "sweep.csv").string(), csv.str());
  json manifest = config_manifest(cfg, "sweep");
  json jpoints = json::array();
  for (size_t i = 0; i < pts.size(); ++i)
    jpoints.push_back(point_manifest(pts[i], results[i], ""));
  manifest["points"] = jpoints;
  const int code = exit_code_for(results);
  manifest["exit_code"] = code;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file_atomic((fs::path(cfg.out_dir) / "run.json").string(), manifest.dump(2) + "\n");
  std::cout << "wrote sweep.csv and run.json to " << cfg.out_dir << "\n";
  return code;
}

int run_validate(const ScenarioConfig& cfg) {
  std::cout << "scenario: " << cfg.scenario << "\n";
  std::cout << "method: " << evolution_method_name(cfg.method);
  if (cfg.method == EvolutionMethod::product)
    std::cout << " (" << product_method_name(cfg.product_method) << ")";
  std::cout << "\nnoise_mode: " << noise_mode_name(cfg.noise_mode) << "\n";
  std::cout << "out_dir: " << cfg.out_dir << "\n";
  if (cfg.scenario != "spectrum") {
    std::cout << "t_end: " << format_double(cfg.effective_t_end()) << "\n";
    std::cout << "n_steps: "
              << (cfg.n_steps > 0 ? std::to_string(cfg.n_steps) : std::string("auto")) << "\n";
  } else {
    std::cout << "spectrum: [" << format_double(cfg.delta_min) << ", "
              << format_double(cfg.delta_max) << "] x " << cfg.n_delta
              << ", horizon " << format_double(cfg.horizon) << "\n";
  }

  const std::vector<SweepPoint> pts = enumerate_points(cfg);
  size_t warned = 0;
  for (const SweepPoint& pt : pts) {
    const SystemParams p = cfg.params_with(pt.overrides);
    const std::string warning = validate_params(p);
    std::ostringstream line;
    line << "  point";
    if (pt.id.empty()) line << " (base)";
    for (const auto& kv : pt.id) line << " " << kv.first << "=" << format_double(kv.second);
    line << ": gamma=" << format_double(p.gamma) << " g=" << format_double(p.g)
         << " J=" << format_double(p.J) << " omega_m=" << format_double(p.omega_m)
         << " gamma_m=" << format_double(p.gamma_m) << " g_m=" << format_double(p.g_m)
         << " E=" << format_double(p.E) << " Delta=" << format_double(p.Delta)
         << " n_th=" << format_double(p.n_th);
    if (!warning.empty()) {
      line << "  WARNING: " << warning;
      ++warned;
    }
    std::cout << line.str() << "\n";
  }
  std::cout << "config ok: " << pts.size() << " point(s)";
  if (warned) std::cout << ", " << warned << " warning(s)";
  std::cout << "\n";
  return 0;
}

}  // namespace plaser
