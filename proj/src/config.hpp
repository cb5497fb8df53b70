#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linear_system.hpp"
#include "params.hpp"
#include "populations.hpp"
#include "propagator.hpp"
#include "types.hpp"

namespace plaser {

// Sectioned key = value text. '#' and ';' start comments, section headers
// are [name], keys keep file order within their section.
struct ConfigFile {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text, const std::string& origin = "<text>");

  const std::string* find(const std::string& section, const std::string& key) const;
};

// Arithmetic over + - * / ^, parentheses, unary sign, and identifier
// references into vars. Throws ConfigError naming the offending token.
double eval_expression(const std::string& expr, const std::map<std::string, double>& vars);

struct SweepAxis {
  std::string name;                  // one of E, J, g, Delta
  std::vector<double> values;        // evaluated against the base parameters
  std::vector<std::string> raw;      // original value expressions
};

// Fully loaded scenario description. Parameter values keep their raw
// expressions so sweep points can re-resolve constraints such as
// omega_m = 2*J with the swept value substituted.
struct ScenarioConfig {
  std::string scenario;  // inversion | inversion_vs_drive | noise_breakdown |
                         // amplification | spectrum
  SystemParams params;   // resolved at base values
  std::map<std::string, std::string> raw_params;

  double t_end = 0.0;  // 0: scenario default (1/gamma_m)
  long long n_steps = 0;
  int max_output_points = 512;

  EvolutionMethod method = EvolutionMethod::moments;
  ProductMethod product_method = ProductMethod::midpoint_product;
  NoiseMode noise_mode = NoiseMode::paper_literal;
  std::string out_dir = "out";

  std::optional<SweepAxis> sweep;
  std::optional<SweepAxis> sweep_inner;

  cplx b_s0{1.0, 0.0};
  cplx p0{0.0, 0.0};

  double delta_min = 0.0, delta_max = 0.0;
  int n_delta = 0;
  double horizon = 50.0;

  static ScenarioConfig load(const ConfigFile& file);

  // Parameters with sweep overrides substituted and every raw expression
  // re-evaluated against them.
  SystemParams params_with(const std::map<std::string, double>& overrides) const;

  double effective_t_end() const;  // t_end or 1/gamma_m when unset
  std::vector<double> spectrum_deltas() const;
};

// CLI override set applied on top of the file.
struct CliOverrides {
  std::optional<std::string> method;
  std::optional<std::string> noise_mode;
  std::optional<long long> n_steps;
  std::optional<double> t_end;
  std::optional<std::string> out_dir;
  std::optional<double> b_s0_re, b_s0_im, p0_re, p0_im;
};

void apply_overrides(ScenarioConfig& cfg, const CliOverrides& ov);

}  // namespace plaser
