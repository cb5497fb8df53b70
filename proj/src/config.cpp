#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace plaser {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names = {
      "gamma", "g", "J", "omega_m", "gamma_m", "g_m", "E", "Delta", "n_th"};
  return names;
}

double param_default(const SystemParams& p, const std::string& name) {
  if (name == "gamma") return p.gamma;
  if (name == "g") return p.g;
  if (name == "J") return p.J;
  if (name == "omega_m") return p.omega_m;
  if (name == "gamma_m") return p.gamma_m;
  if (name == "g_m") return p.g_m;
  if (name == "E") return p.E;
  if (name == "Delta") return p.Delta;
  return p.n_th;
}

void param_set(SystemParams& p, const std::string& name, double v) {
  if (name == "gamma") p.gamma = v;
  else if (name == "g") p.g = v;
  else if (name == "J") p.J = v;
  else if (name == "omega_m") p.omega_m = v;
  else if (name == "gamma_m") p.gamma_m = v;
  else if (name == "g_m") p.g_m = v;
  else if (name == "E") p.E = v;
  else if (name == "Delta") p.Delta = v;
  else p.n_th = v;
}

// Recursive-descent expression evaluator.
struct ExprParser {
  const std::string& s;
  const std::map<std::string, double>& vars;
  size_t pos = 0;

  [[noreturn]] void err(const std::string& what) const {
    fail(ErrCode::ConfigError, "in expression '" + s + "': " + what);
  }

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  double parse() {
    const double v = sum();
    skip();
    if (pos != s.size()) err(std::string("unexpected '") + s[pos] + "'");
    return v;
  }

  double sum() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = power();
    for (;;) {
      if (eat('*')) v *= power();
      else if (eat('/')) {
        const double d = power();
        if (d == 0.0) err("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  double power() {
    const double base = unary();
    if (eat('^')) return std::pow(base, power());  // right associative
    return base;
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }

  double atom() {
    skip();
    if (pos >= s.size()) err("unexpected end of expression");
    if (s[pos] == '(') {
      ++pos;
      const double v = sum();
      if (!eat(')')) err("missing ')'");
      return v;
    }
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v;
      try {
        v = std::stod(s.substr(pos), &used);
      } catch (const std::exception&) {
        err("bad number");
      }
      pos += used;
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos;
      while (end < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
        ++end;
      const std::string name = s.substr(pos, end - pos);
      pos = end;
      if (name == "pi") return pi;
      const auto it = vars.find(name);
      if (it == vars.end()) err("unknown identifier '" + name + "'");
      return it->second;
    }
    err(std::string("unexpected character '") + c + "'");
  }
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

double eval_expression(const std::string& expr, const std::map<std::string, double>& vars) {
  ExprParser p{expr, vars};
  return p.parse();
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
  ConfigFile f;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrCode::ConfigError,
             origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        fail(ErrCode::ConfigError,
             origin + ":" + std::to_string(lineno) + ": empty section name");
      f.sections[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrCode::ConfigError,
           origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(ErrCode::ConfigError, origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      fail(ErrCode::ConfigError,
           origin + ":" + std::to_string(lineno) + ": key outside any [section]");
    if (!seen.insert(section + "." + key).second)
      fail(ErrCode::ConfigError, origin + ":" + std::to_string(lineno) + ": duplicate key '" +
                                     section + "." + key + "'");
    f.sections[section].emplace_back(key, value);
  }
  return f;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrCode::ConfigError, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

const std::string* ConfigFile::find(const std::string& section, const std::string& key) const {
  const auto sit = sections.find(section);
  if (sit == sections.end()) return nullptr;
  for (const auto& kv : sit->second)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

namespace {

// Multi-pass resolution: expressions may reference parameters defined by
// other expressions, in any order. Overridden names are fixed up front.
std::map<std::string, double> resolve_params(
    const std::map<std::string, std::string>& raw,
    const std::map<std::string, double>& overrides) {
  const SystemParams defaults;
  std::map<std::string, double> vars;
  std::map<std::string, std::string> pending;
  for (const std::string& name : param_names()) {
    const auto ov = overrides.find(name);
    if (ov != overrides.end()) {
      vars[name] = ov->second;
      continue;
    }
    const auto it = raw.find(name);
    if (it != raw.end())
      pending[name] = it->second;
    else
      vars[name] = param_default(defaults, name);
  }
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      try {
        const double v = eval_expression(it->second, vars);
        vars[it->first] = v;
        it = pending.erase(it);
        progress = true;
      } catch (const SimError&) {
        ++it;
      }
    }
    if (!progress) {
      // surface the underlying error for one representative entry
      const auto& kv = *pending.begin();
      try {
        eval_expression(kv.second, vars);
      } catch (const SimError& e) {
        fail(ErrCode::ConfigError,
             "params." + kv.first + " cannot be resolved: " + e.what());
      }
    }
  }
  return vars;
}

SweepAxis load_axis(const ConfigFile& f, const std::string& section,
                    const std::map<std::string, double>& base_vars) {
  const std::string* axis = f.find(section, "axis");
  const std::string* values = f.find(section, "values");
  if (!axis || !values)
    fail(ErrCode::ConfigError, section + " needs both 'axis' and 'values'");
  SweepAxis sw;
  sw.name = trim(*axis);
  if (sw.name != "E" && sw.name != "J" && sw.name != "g" && sw.name != "Delta")
    fail(ErrCode::ConfigError,
         section + ".axis must be one of E, J, g, Delta; got '" + sw.name + "'");
  for (const std::string& tok : split_csv(*values)) {
    if (tok.empty()) fail(ErrCode::ConfigError, section + ".values has an empty entry");
    const double v = eval_expression(tok, base_vars);
    if (!std::isfinite(v))
      fail(ErrCode::ConfigError, section + ".values entry '" + tok + "' is not finite");
    sw.raw.push_back(tok);
    sw.values.push_back(v);
  }
  if (sw.values.empty()) fail(ErrCode::ConfigError, section + ".values is empty");
  // deterministic point ordering by sweep value
  std::vector<size_t> order(sw.values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return sw.values[a] < sw.values[b]; });
  SweepAxis sorted;
  sorted.name = sw.name;
  for (size_t i : order) {
    sorted.values.push_back(sw.values[i]);
    sorted.raw.push_back(sw.raw[i]);
  }
  return sorted;
}

}  // namespace

ScenarioConfig ScenarioConfig::load(const ConfigFile& f) {
  ScenarioConfig cfg;

  const std::string* name = f.find("scenario", "name");
  if (!name) fail(ErrCode::ConfigError, "scenario.name is required");
  cfg.scenario = trim(*name);
  static const std::set<std::string> known = {"inversion", "inversion_vs_drive",
                                              "noise_breakdown", "amplification", "spectrum"};
  if (!known.count(cfg.scenario))
    fail(ErrCode::ConfigError, "scenario.name '" + cfg.scenario +
                                   "' is not one of inversion, inversion_vs_drive, "
                                   "noise_breakdown, amplification, spectrum");

  if (const std::string* m = f.find("scenario", "method")) {
    const std::string v = trim(*m);
    if (v == "moments") {
      cfg.method = EvolutionMethod::moments;
    } else if (v == "product") {
      cfg.method = EvolutionMethod::product;
    } else if (v == "euler_product" || v == "midpoint_product") {
      cfg.method = EvolutionMethod::product;
      cfg.product_method = parse_product_method(v);
    } else {
      fail(ErrCode::ConfigError, "scenario.method '" + v +
                                     "' is not one of moments, product, euler_product, "
                                     "midpoint_product");
    }
  }
  if (const std::string* m = f.find("scenario", "noise_mode")) {
    try {
      cfg.noise_mode = parse_noise_mode(trim(*m));
    } catch (const SimError& e) {
      fail(ErrCode::ConfigError, std::string("scenario.noise_mode: ") + e.what());
    }
  }
  if (const std::string* o = f.find("scenario", "out")) cfg.out_dir = trim(*o);

  const auto pit = f.sections.find("params");
  if (pit != f.sections.end()) {
    static const std::set<std::string> valid(param_names().begin(), param_names().end());
    for (const auto& kv : pit->second) {
      if (!valid.count(kv.first))
        fail(ErrCode::ConfigError, "params." + kv.first + " is not a model parameter");
      cfg.raw_params[kv.first] = kv.second;
    }
  }
  const std::map<std::string, double> base_vars = resolve_params(cfg.raw_params, {});
  for (const std::string& n : param_names()) param_set(cfg.params, n, base_vars.at(n));

  if (const std::string* v = f.find("grid", "t_end")) {
    cfg.t_end = eval_expression(*v, base_vars);
    if (!(cfg.t_end > 0.0)) fail(ErrCode::ConfigError, "grid.t_end must be > 0");
  }
  if (const std::string* v = f.find("grid", "n_steps")) {
    const double x = eval_expression(*v, base_vars);
    if (!(x >= 0.0) || x != std::floor(x) || x > 2e8)
      fail(ErrCode::ConfigError, "grid.n_steps must be a nonnegative integer <= 2e8");
    cfg.n_steps = static_cast<long long>(x);
  }
  if (const std::string* v = f.find("grid", "max_output_points")) {
    const double x = eval_expression(*v, base_vars);
    if (!(x >= 2.0) || x != std::floor(x) || x > 1e7)
      fail(ErrCode::ConfigError, "grid.max_output_points must be an integer >= 2");
    cfg.max_output_points = static_cast<int>(x);
  }

  if (f.sections.count("sweep")) cfg.sweep = load_axis(f, "sweep", base_vars);
  if (f.sections.count("sweep_inner")) {
    cfg.sweep_inner = load_axis(f, "sweep_inner", base_vars);
    if (!cfg.sweep)
      fail(ErrCode::ConfigError, "sweep_inner requires a [sweep] outer axis");
    if (cfg.sweep->name == cfg.sweep_inner->name)
      fail(ErrCode::ConfigError, "sweep and sweep_inner use the same axis '" +
                                     cfg.sweep->name + "'");
  }

  const auto num = [&](const char* sec, const char* key, double dflt) {
    const std::string* v = f.find(sec, key);
    return v ? eval_expression(*v, base_vars) : dflt;
  };
  cfg.b_s0 = cplx(num("laser", "b_s0_re", 1.0), num("laser", "b_s0_im", 0.0));
  cfg.p0 = cplx(num("laser", "p0_re", 0.0), num("laser", "p0_im", 0.0));

  if (cfg.scenario == "spectrum") {
    if (!f.sections.count("spectrum"))
      fail(ErrCode::ConfigError, "spectrum scenario needs a [spectrum] section");
    cfg.delta_min = num("spectrum", "delta_min", 0.0);
    cfg.delta_max = num("spectrum", "delta_max", 0.0);
    const double nd = num("spectrum", "n_delta", 0.0);
    if (!(nd >= 2.0) || nd != std::floor(nd) || nd > 1e7)
      fail(ErrCode::ConfigError, "spectrum.n_delta must be an integer >= 2");
    cfg.n_delta = static_cast<int>(nd);
    if (!(cfg.delta_max > cfg.delta_min))
      fail(ErrCode::ConfigError, "spectrum needs delta_max > delta_min");
    cfg.horizon = num("spectrum", "horizon", 50.0);
    if (!(cfg.horizon > 0.0)) fail(ErrCode::ConfigError, "spectrum.horizon must be > 0");
  }

  for (const auto& sec : f.sections) {
    static const std::set<std::string> known_sections = {
        "scenario", "params", "grid", "sweep", "sweep_inner", "laser", "spectrum"};
    if (!known_sections.count(sec.first))
      fail(ErrCode::ConfigError, "unknown section [" + sec.first + "]");
  }
  return cfg;
}

SystemParams ScenarioConfig::params_with(const std::map<std::string, double>& overrides) const {
  const std::map<std::string, double> vars = resolve_params(raw_params, overrides);
  SystemParams p;
  for (const std::string& n : param_names()) param_set(p, n, vars.at(n));
  return p;
}

double ScenarioConfig::effective_t_end() const {
  return t_end > 0.0 ? t_end : 1.0 / params.gamma_m;
}

std::vector<double> ScenarioConfig::spectrum_deltas() const {
  std::vector<double> d;
  d.reserve(static_cast<size_t>(n_delta));
  const double step = (delta_max - delta_min) / static_cast<double>(n_delta - 1);
  for (int i = 0; i < n_delta; ++i)
    d.push_back(i + 1 == n_delta ? delta_max : delta_min + step * i);
  return d;
}

void apply_overrides(ScenarioConfig& cfg, const CliOverrides& ov) {
  if (ov.method) {
    const std::string& v = *ov.method;
    if (v == "moments") {
      cfg.method = EvolutionMethod::moments;
    } else if (v == "product") {
      cfg.method = EvolutionMethod::product;
    } else if (v == "euler_product" || v == "midpoint_product") {
      cfg.method = EvolutionMethod::product;
      cfg.product_method = parse_product_method(v);
    } else {
      fail(ErrCode::ConfigError, "--method '" + v + "' is not recognized");
    }
  }
  if (ov.noise_mode) {
    try {
      cfg.noise_mode = parse_noise_mode(*ov.noise_mode);
    } catch (const SimError& e) {
      fail(ErrCode::ConfigError, std::string("--noise-mode: ") + e.what());
    }
  }
  if (ov.n_steps) {
    if (*ov.n_steps < 0 || *ov.n_steps > 200000000)
      fail(ErrCode::ConfigError, "--steps must be a nonnegative integer <= 2e8");
    cfg.n_steps = *ov.n_steps;
  }
  if (ov.t_end) {
    if (!(*ov.t_end > 0.0)) fail(ErrCode::ConfigError, "--t-end must be > 0");
    cfg.t_end = *ov.t_end;
  }
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.b_s0_re || ov.b_s0_im)
    cfg.b_s0 = cplx(ov.b_s0_re.value_or(cfg.b_s0.real()), ov.b_s0_im.value_or(cfg.b_s0.imag()));
  if (ov.p0_re || ov.p0_im)
    cfg.p0 = cplx(ov.p0_re.value_or(cfg.p0.real()), ov.p0_im.value_or(cfg.p0.imag()));
}

}  // namespace plaser
