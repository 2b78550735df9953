#include "qbsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace qbsim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw config_error("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  const std::string t = trim(v);
  if (t.empty()) fail(line, key + ": expected a number");
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(x)) {
    fail(line, key + ": invalid number '" + t + "'");
  }
  return x;
}

long parse_long(const std::string& v, int line, const std::string& key) {
  const double x = parse_double(v, line, key);
  if (x != std::floor(x) || std::abs(x) > 1e15) {
    fail(line, key + ": expected an integer");
  }
  return static_cast<long>(x);
}

std::vector<double> parse_double_list(const std::string& v, int line, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, line, key));
  if (out.empty()) fail(line, key + ": expected a comma-separated list of numbers");
  return out;
}

const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names{"omega0", "kappa", "gamma",
                                              "lambda", "delta", "R"};
  return names;
}

}  // namespace

const char* to_string(SolverKind s) {
  switch (s) {
    case SolverKind::analytic: return "analytic";
    case SolverKind::oracle: return "oracle";
    case SolverKind::both: return "both";
  }
  return "?";
}

const char* to_string(TimeUnit u) {
  return u == TimeUnit::kappa_t ? "kappa_t" : "gamma_t";
}

const std::vector<std::string>& known_output_columns() {
  static const std::vector<std::string> cols{"energy_A", "energy_B", "ergotropy_B",
                                            "ratio", "power"};
  return cols;
}

ParsedConfig parse_config(const std::string& text) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> kv;
  std::vector<std::pair<std::string, Entry>> sweep_axes;  // file order

  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "expected key = value");

    if (key.rfind("sweep.", 0) == 0) {
      const std::string param = key.substr(6);
      if (std::find(axis_names().begin(), axis_names().end(), param) == axis_names().end()) {
        fail(line_no, "unknown sweep parameter '" + param + "'");
      }
      for (const auto& [p, e] : sweep_axes) {
        if (p == param) fail(line_no, "duplicate key '" + key + "'");
      }
      sweep_axes.push_back({param, {value, line_no}});
      continue;
    }

    static const std::vector<std::string> known{
        "omega0", "kappa", "gamma", "lambda", "R", "delta", "t_max", "n_points",
        "mu0_re", "mu0_im", "nu0_re", "nu0_im", "solver", "time_unit", "outputs",
        "out_dir", "max_grid"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      fail(line_no, "unknown key '" + key + "'");
    }
    if (kv.count(key)) fail(line_no, "duplicate key '" + key + "'");
    kv[key] = {value, line_no};
  }

  if (kv.count("R") && kv.count("lambda")) {
    fail(std::max(kv["R"].line, kv["lambda"].line), "over-determined: R vs lambda");
  }
  {
    const bool sweep_r = std::any_of(sweep_axes.begin(), sweep_axes.end(),
                                     [](const auto& a) { return a.first == "R"; });
    const bool sweep_l = std::any_of(sweep_axes.begin(), sweep_axes.end(),
                                     [](const auto& a) { return a.first == "lambda"; });
    if (sweep_r && sweep_l) {
      fail(sweep_axes.back().second.line, "over-determined: R vs lambda");
    }
  }

  RunConfig cfg;
  auto get = [&](const char* key) -> Entry* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto* e = get("omega0")) cfg.params.omega0 = parse_double(e->value, e->line, "omega0");
  if (auto* e = get("kappa")) cfg.params.kappa = parse_double(e->value, e->line, "kappa");
  if (auto* e = get("gamma")) cfg.params.gamma = parse_double(e->value, e->line, "gamma");
  if (auto* e = get("lambda")) cfg.params.lambda = parse_double(e->value, e->line, "lambda");
  if (auto* e = get("delta")) cfg.params.delta = parse_double(e->value, e->line, "delta");
  if (auto* e = get("R")) {
    const double r = parse_double(e->value, e->line, "R");
    if (!(r > 0.0)) fail(e->line, "R must be positive");
    if (!(cfg.params.gamma > 0.0)) fail(e->line, "R requires positive gamma");
    cfg.params.lambda = cfg.params.gamma / r;
  }
  if (auto* e = get("t_max")) {
    cfg.grid.t_max = parse_double(e->value, e->line, "t_max");
    if (!(cfg.grid.t_max > 0.0)) fail(e->line, "t_max must be positive");
  }
  if (auto* e = get("n_points")) {
    const long n = parse_long(e->value, e->line, "n_points");
    if (n < 2) fail(e->line, "n_points must be at least 2");
    if (n > 100000000L) fail(e->line, "n_points too large");
    cfg.grid.n_points = static_cast<int>(n);
  }
  double m_re = cfg.init.mu0.real(), m_im = cfg.init.mu0.imag();
  double n_re = cfg.init.nu0.real(), n_im = cfg.init.nu0.imag();
  if (auto* e = get("mu0_re")) m_re = parse_double(e->value, e->line, "mu0_re");
  if (auto* e = get("mu0_im")) m_im = parse_double(e->value, e->line, "mu0_im");
  if (auto* e = get("nu0_re")) n_re = parse_double(e->value, e->line, "nu0_re");
  if (auto* e = get("nu0_im")) n_im = parse_double(e->value, e->line, "nu0_im");
  cfg.init.mu0 = cplx(m_re, m_im);
  cfg.init.nu0 = cplx(n_re, n_im);
  if (auto* e = get("solver")) {
    const std::string v = e->value;
    if (v == "analytic") cfg.solver = SolverKind::analytic;
    else if (v == "oracle") cfg.solver = SolverKind::oracle;
    else if (v == "both") cfg.solver = SolverKind::both;
    else fail(e->line, "solver must be one of analytic, oracle, both");
  }
  if (auto* e = get("time_unit")) {
    const std::string v = e->value;
    if (v == "kappa_t") cfg.time_unit = TimeUnit::kappa_t;
    else if (v == "gamma_t") cfg.time_unit = TimeUnit::gamma_t;
    else fail(e->line, "time_unit must be kappa_t or gamma_t");
  }
  if (auto* e = get("outputs")) {
    std::stringstream ls(e->value);
    std::string item;
    while (std::getline(ls, item, ',')) {
      const std::string name = trim(item);
      if (name.empty()) continue;
      const auto& cols = known_output_columns();
      if (std::find(cols.begin(), cols.end(), name) == cols.end()) {
        fail(e->line, "unknown output '" + name + "'");
      }
      if (std::find(cfg.outputs.begin(), cfg.outputs.end(), name) != cfg.outputs.end()) {
        fail(e->line, "duplicate output '" + name + "'");
      }
      cfg.outputs.push_back(name);
    }
    if (cfg.outputs.empty()) fail(e->line, "outputs must not be empty");
  }

  try {
    validate_params(cfg.params);
    validate_init(cfg.init);
  } catch (const std::invalid_argument& ex) {
    throw config_error(ex.what());
  }

  if (sweep_axes.empty()) {
    if (get("out_dir") || get("max_grid")) {
      const Entry* e = get("out_dir") ? get("out_dir") : get("max_grid");
      fail(e->line, "out_dir and max_grid apply to sweep configs only");
    }
    return cfg;
  }

  SweepConfig sweep;
  sweep.base = cfg;
  if (auto* e = get("out_dir")) {
    if (e->value.empty()) fail(e->line, "out_dir must not be empty");
    sweep.out_dir = e->value;
  }
  if (auto* e = get("max_grid")) {
    const long m = parse_long(e->value, e->line, "max_grid");
    if (m < 1) fail(e->line, "max_grid must be positive");
    sweep.max_grid = m;
  }
  long total = 1;
  for (const auto& [param, entry] : sweep_axes) {
    auto values = parse_double_list(entry.value, entry.line, "sweep." + param);
    total *= static_cast<long>(values.size());
    if (total > sweep.max_grid) {
      fail(entry.line, "sweep grid size exceeds cap " + std::to_string(sweep.max_grid) +
                           " (max_grid)");
    }
    sweep.axes.push_back({param, std::move(values)});
  }
  {
    const bool sweeps_r = std::any_of(sweep.axes.begin(), sweep.axes.end(),
                                      [](const auto& a) { return a.first == "R"; });
    const bool sweeps_gamma = std::any_of(sweep.axes.begin(), sweep.axes.end(),
                                          [](const auto& a) { return a.first == "gamma"; });
    if (sweeps_r && !sweeps_gamma && !(cfg.params.gamma > 0.0)) {
      throw config_error("sweep.R requires positive gamma");
    }
  }
  return sweep;
}

std::string canonical_echo(const RunConfig& cfg) {
  std::string out;
  out += "omega0 = " + fmt17(cfg.params.omega0) + "\n";
  out += "kappa = " + fmt17(cfg.params.kappa) + "\n";
  out += "gamma = " + fmt17(cfg.params.gamma) + "\n";
  out += "lambda = " + fmt17(cfg.params.lambda) + "\n";
  out += "delta = " + fmt17(cfg.params.delta) + "\n";
  out += "t_max = " + fmt17(cfg.grid.t_max) + "\n";
  out += "n_points = " + std::to_string(cfg.grid.n_points) + "\n";
  out += "mu0_re = " + fmt17(cfg.init.mu0.real()) + "\n";
  out += "mu0_im = " + fmt17(cfg.init.mu0.imag()) + "\n";
  out += "nu0_re = " + fmt17(cfg.init.nu0.real()) + "\n";
  out += "nu0_im = " + fmt17(cfg.init.nu0.imag()) + "\n";
  out += std::string("solver = ") + to_string(cfg.solver) + "\n";
  out += std::string("time_unit = ") + to_string(cfg.time_unit) + "\n";
  const auto& cols = cfg.outputs.empty() ? known_output_columns() : cfg.outputs;
  out += "outputs = ";
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ", ";
    out += cols[i];
  }
  out += "\n";
  return out;
}

RunConfig apply_axes(const SweepConfig& sweep, const std::vector<double>& values) {
  if (values.size() != sweep.axes.size()) {
    throw std::invalid_argument("axis value count mismatch");
  }
  RunConfig cfg = sweep.base;
  double r_value = 0.0;
  bool has_r = false;
  for (size_t i = 0; i < values.size(); ++i) {
    const std::string& name = sweep.axes[i].first;
    const double v = values[i];
    if (name == "omega0") cfg.params.omega0 = v;
    else if (name == "kappa") cfg.params.kappa = v;
    else if (name == "gamma") cfg.params.gamma = v;
    else if (name == "lambda") cfg.params.lambda = v;
    else if (name == "delta") cfg.params.delta = v;
    else if (name == "R") { has_r = true; r_value = v; }
  }
  if (has_r) {  // applied last so a swept gamma is already in place
    if (!(r_value > 0.0)) throw std::invalid_argument("R must be positive");
    if (!(cfg.params.gamma > 0.0)) throw std::invalid_argument("R requires positive gamma");
    cfg.params.lambda = cfg.params.gamma / r_value;
  }
  validate_params(cfg.params);
  return cfg;
}

}  // namespace qbsim
