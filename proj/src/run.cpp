#include "qbsim/run.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbsim/laplace.hpp"
#include "qbsim/observables.hpp"
#include "qbsim/self_discharge.hpp"
#include "qbsim/volterra.hpp"

namespace qbsim {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> uniform_grid(double t_max, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) {
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return t;
}

double default_oracle_step(const SystemParams& p) {
  double step;
  if (p.kappa > 0.0) step = 1e-4 / p.kappa;
  else if (p.gamma > 0.0) step = 1e-4 / p.gamma;
  else step = 1e-4 / p.lambda;
  // keep the stability guard satisfied with margin whatever lambda/delta are
  const double rate = std::max({p.kappa, p.gamma, p.lambda, std::abs(p.delta)});
  return std::min(step, 0.09 / rate);
}

void append_config_metadata(OutputTable& table, const RunConfig& cfg) {
  table.metadata.push_back("config begin");
  std::stringstream echo(canonical_echo(cfg));
  std::string line;
  while (std::getline(echo, line)) table.metadata.push_back(line);
  table.metadata.push_back("config end");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_csv(const OutputTable& table) {
  std::string out;
  for (const auto& m : table.metadata) out += "# " + m + "\n";
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ",";
    out += table.columns[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += fmt17(row[i]);
    }
    out += "\n";
  }
  return out;
}

std::string config_echo_from_metadata(const OutputTable& table) {
  std::string echo;
  bool inside = false;
  for (const auto& m : table.metadata) {
    if (m == "config begin") { inside = true; continue; }
    if (m == "config end") break;
    if (inside) echo += m + "\n";
  }
  return echo;
}

OutputTable run_single(const RunConfig& cfg) {
  validate_params(cfg.params);
  validate_init(cfg.init);
  if (cfg.grid.n_points < 2) throw config_error("n_points must be at least 2");
  if (!(cfg.grid.t_max > 0.0)) throw config_error("t_max must be positive");

  const std::vector<double> times = uniform_grid(cfg.grid.t_max, cfg.grid.n_points);
  const double scale = cfg.time_unit == TimeUnit::kappa_t ? cfg.params.kappa
                                                          : cfg.params.gamma;

  std::vector<AmplitudePair> main_amps, oracle_amps;
  if (cfg.solver == SolverKind::analytic || cfg.solver == SolverKind::both) {
    main_amps = amplitude_trajectory(cfg.params, cfg.init, times);
  }
  if (cfg.solver == SolverKind::oracle || cfg.solver == SolverKind::both) {
    oracle_amps = oracle_at(cfg.params, cfg.init, times, default_oracle_step(cfg.params));
    if (cfg.solver == SolverKind::oracle) main_amps = std::move(oracle_amps);
  }

  Trajectory traj;
  traj.times = times;
  for (const auto& a : main_amps) {
    traj.mu.push_back(a.mu);
    traj.nu.push_back(a.nu);
  }
  const std::vector<ObservableRecord> records = trajectory_records(traj, cfg.params.omega0);

  OutputTable table;
  table.metadata.push_back(k_version);
  append_config_metadata(table, cfg);

  const auto& selected = cfg.outputs.empty() ? known_output_columns() : cfg.outputs;
  auto wants = [&](const char* name) {
    return std::find(selected.begin(), selected.end(), name) != selected.end();
  };

  table.columns = {"t", "scaled_t", "re_mu", "im_mu", "re_nu", "im_nu"};
  for (const auto& name : known_output_columns()) {
    if (wants(name.c_str())) table.columns.push_back(name);
  }
  const bool with_oracle_cols = cfg.solver == SolverKind::both;
  if (with_oracle_cols) {
    for (const char* name : {"re_mu_oracle", "im_mu_oracle", "re_nu_oracle", "im_nu_oracle"}) {
      table.columns.push_back(name);
    }
  }

  const double qnan = std::numeric_limits<double>::quiet_NaN();
  double max_dev = 0.0;
  for (size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row{times[i],
                            scale * times[i],
                            main_amps[i].mu.real(),
                            main_amps[i].mu.imag(),
                            main_amps[i].nu.real(),
                            main_amps[i].nu.imag()};
    const ObservableRecord& rec = records[i];
    if (wants("energy_A")) row.push_back(rec.energy_A);
    if (wants("energy_B")) row.push_back(rec.energy_B);
    if (wants("ergotropy_B")) row.push_back(rec.ergotropy_B);
    if (wants("ratio")) row.push_back(rec.ratio.value_or(qnan));
    if (wants("power")) row.push_back(rec.power.value_or(qnan));
    if (with_oracle_cols) {
      row.push_back(oracle_amps[i].mu.real());
      row.push_back(oracle_amps[i].mu.imag());
      row.push_back(oracle_amps[i].nu.real());
      row.push_back(oracle_amps[i].nu.imag());
      max_dev = std::max({max_dev, std::abs(main_amps[i].mu - oracle_amps[i].mu),
                          std::abs(main_amps[i].nu - oracle_amps[i].nu)});
    }
    table.rows.push_back(std::move(row));
  }
  if (with_oracle_cols) {
    table.metadata.push_back("max_oracle_deviation = " + fmt17(max_dev));
  }
  return table;
}

SweepOutcome run_sweep(const SweepConfig& cfg, int workers) {
  namespace fs = std::filesystem;
  long total = 1;
  for (const auto& [name, values] : cfg.axes) total *= static_cast<long>(values.size());
  if (total > cfg.max_grid) {
    throw config_error("sweep grid size exceeds cap " + std::to_string(cfg.max_grid) +
                       " (max_grid)");
  }
  fs::create_directories(cfg.out_dir);

  const int width = std::max<int>(4, static_cast<int>(std::to_string(total - 1).size()));
  auto point_name = [&](long idx) {
    std::string num = std::to_string(idx);
    return "point_" + std::string(width - static_cast<int>(num.size()), '0') + num + ".csv";
  };
  auto tuple_values = [&](long idx) {
    std::vector<double> vals(cfg.axes.size());
    long rest = idx;
    for (size_t a = cfg.axes.size(); a-- > 0;) {
      const long n = static_cast<long>(cfg.axes[a].second.size());
      vals[a] = cfg.axes[a].second[rest % n];
      rest /= n;
    }
    return vals;
  };
  auto tuple_label = [&](const std::vector<double>& vals) {
    std::string s;
    for (size_t a = 0; a < cfg.axes.size(); ++a) {
      if (a) s += ", ";
      s += cfg.axes[a].first + "=" + fmt_short(vals[a]);
    }
    return s.empty() ? std::string("(base)") : s;
  };

  std::vector<std::string> errors(total);
  std::vector<char> ok(total, 0);
  std::atomic<long> next{0};
  auto work = [&]() {
    for (long idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      try {
        const RunConfig point = apply_axes(cfg, tuple_values(idx));
        const OutputTable table = run_single(point);
        write_text_file((fs::path(cfg.out_dir) / point_name(idx)).string(), to_csv(table));
        ok[idx] = 1;
      } catch (const std::exception& ex) {
        errors[idx] = ex.what();
      }
    }
  };

  int nworkers = workers > 0 ? workers
                             : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nworkers = static_cast<int>(std::min<long>(nworkers, total));
  std::vector<std::thread> pool;
  for (int w = 0; w < nworkers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  SweepOutcome outcome;
  nlohmann::json index;
  index["artifact"] = k_version;
  index["axes"] = nlohmann::json::array();
  for (const auto& [name, values] : cfg.axes) {
    index["axes"].push_back({{"param", name}, {"values", values}});
  }
  index["points"] = nlohmann::json::array();
  for (long idx = 0; idx < total; ++idx) {
    const std::vector<double> vals = tuple_values(idx);
    nlohmann::json point;
    for (size_t a = 0; a < cfg.axes.size(); ++a) point["params"][cfg.axes[a].first] = vals[a];
    if (cfg.axes.empty()) point["params"] = nlohmann::json::object();
    if (ok[idx]) {
      point["status"] = "ok";
      point["file"] = point_name(idx);
      outcome.files.push_back((fs::path(cfg.out_dir) / point_name(idx)).string());
    } else {
      point["status"] = "error";
      point["error"] = errors[idx];
      outcome.failures.push_back(tuple_label(vals) + ": " + errors[idx]);
    }
    index["points"].push_back(std::move(point));
  }
  outcome.index_file = (fs::path(cfg.out_dir) / "index.json").string();
  write_text_file(outcome.index_file, index.dump(2) + "\n");
  return outcome;
}

namespace {

const std::vector<double>& charging_memory_ratios() {
  static const std::vector<double> r{0.01, 0.1, 1.0, 10.0, 100.0};
  return r;
}

std::vector<std::string> reproduce_charging(const std::string& id, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  for (double gk : {0.05, 1.0, 10.0}) {
    for (double r : charging_memory_ratios()) {
      RunConfig cfg;
      cfg.params = {1.0, 1.0, gk, gk / r, 0.0};
      cfg.grid = {4.0 * M_PI, 2000};
      OutputTable table = run_single(cfg);
      table.metadata.insert(table.metadata.begin() + 1,
                            {"figure = " + id,
                             "curve: gamma_over_kappa = " + fmt_short(gk) +
                                 ", memory_ratio = " + fmt_short(r)});
      const std::string name =
          id + "_gk" + fmt_short(gk) + "_R" + fmt_short(r) + ".csv";
      const std::string path = (fs::path(out_dir) / name).string();
      write_text_file(path, to_csv(table));
      files.push_back(path);
    }
  }
  return files;
}

std::vector<std::string> reproduce_self_discharge(const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  const double gamma = 1.0;
  const double t_max = 20.0;
  const int n = 2000;
  for (double dg : {0.0, 0.5, 2.0}) {
    for (double r : {0.01, 0.1, 0.5, 1.0, 10.0, 100.0}) {
      const SelfDischargeParams sd = self_discharge_from_ratio(r, gamma, dg * gamma);
      OutputTable table;
      table.metadata = {k_version,
                        "figure = fig4",
                        "curve: delta_over_gamma = " + fmt_short(dg) +
                            ", memory_ratio = " + fmt_short(r),
                        "gamma = " + fmt17(gamma),
                        "lambda = " + fmt17(sd.lambda),
                        "delta = " + fmt17(sd.delta),
                        "t_max = " + fmt17(t_max),
                        "n_points = " + std::to_string(n),
                        "ergotropy unit: W_max"};
      table.columns = {"t", "gamma_t", "abs_nu_sd", "energy_B", "ergotropy_B"};
      for (int i = 0; i < n; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
        const double a = amplitude_sd(sd, t);
        table.rows.push_back({t, gamma * t, a, energy_sd(sd, t), ergotropy_sd(sd, t)});
      }
      const std::string name = "fig4_dg" + fmt_short(dg) + "_R" + fmt_short(r) + ".csv";
      const std::string path = (fs::path(out_dir) / name).string();
      write_text_file(path, to_csv(table));
      files.push_back(path);
    }
  }
  return files;
}

std::vector<std::string> reproduce_table_p(const std::string& out_dir) {
  namespace fs = std::filesystem;
  OutputTable table;
  table.metadata = {k_version,
                    "figure = table-p",
                    "omega0 = 1, kappa = 1, gamma = 0.05, delta = 0, init = (1, 0)",
                    "evaluated at tau_ch = pi / (2 kappa)",
                    "work_fraction = 2 p_excitation - 1 (stored work over W_max)"};
  table.columns = {"R", "p_excitation", "work_fraction"};
  const double tau = charging_time(1.0);
  for (double r : {0.01, 0.1, 10.0, 100.0}) {
    const SystemParams p{1.0, 1.0, 0.05, 0.05 / r, 0.0};
    const AmplitudePair amp = evaluate_amplitudes(build_transfer(p, {}), tau);
    const double pop = std::norm(amp.nu);
    table.rows.push_back({r, pop, 2.0 * pop - 1.0});
  }
  const std::string path = (fs::path(out_dir) / "table_p.csv").string();
  write_text_file(path, to_csv(table));
  return {path};
}

}  // namespace

std::vector<std::string> reproduce_figure(const std::string& id, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  if (id == "fig2" || id == "fig3") return reproduce_charging(id, out_dir);
  if (id == "fig4") return reproduce_self_discharge(out_dir);
  if (id == "table-p") return reproduce_table_p(out_dir);
  throw config_error("unknown figure id '" + id + "'");
}

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"two-qubit quantum battery charging and self-discharge simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, out_dir, fig_id;

  CLI::App* cmd_run = app.add_subcommand("run", "run one configuration, emit CSV");
  cmd_run->add_option("config", config_path, "config file")->required();
  cmd_run->add_option("--out", out_path, "output CSV path (default: stdout)");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "run a parameter sweep");
  cmd_sweep->add_option("config", config_path, "config file")->required();
  cmd_sweep->add_option("--out", out_dir, "output directory (overrides out_dir)");

  CLI::App* cmd_rep = app.add_subcommand("reproduce", "emit a reference dataset");
  cmd_rep->add_option("id", fig_id, "one of fig2, fig3, fig4, table-p")->required();
  cmd_rep->add_option("--out", out_dir, "output directory")->required();

  CLI::App* cmd_val = app.add_subcommand("validate", "parse a config and echo it");
  cmd_val->add_option("config", config_path, "config file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (cmd_run->parsed()) {
      const ParsedConfig parsed = parse_config(read_text_file(config_path));
      if (!std::holds_alternative<RunConfig>(parsed)) {
        throw config_error("run expects a single-run config (this one has sweep axes)");
      }
      const std::string csv = to_csv(run_single(std::get<RunConfig>(parsed)));
      if (out_path.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
      } else {
        write_text_file(out_path, csv);
      }
      return 0;
    }
    if (cmd_sweep->parsed()) {
      const ParsedConfig parsed = parse_config(read_text_file(config_path));
      SweepConfig sweep;
      if (std::holds_alternative<SweepConfig>(parsed)) {
        sweep = std::get<SweepConfig>(parsed);
      } else {
        sweep.base = std::get<RunConfig>(parsed);  // empty axes: single point
      }
      if (!out_dir.empty()) sweep.out_dir = out_dir;
      const SweepOutcome outcome = run_sweep(sweep);
      std::fprintf(stdout, "wrote %zu file(s) and %s\n", outcome.files.size(),
                   outcome.index_file.c_str());
      if (!outcome.failures.empty()) {
        std::fprintf(stderr, "%zu point(s) failed:\n", outcome.failures.size());
        for (const auto& f : outcome.failures) std::fprintf(stderr, "  %s\n", f.c_str());
        return 3;
      }
      return 0;
    }
    if (cmd_rep->parsed()) {
      const std::vector<std::string> files = reproduce_figure(fig_id, out_dir);
      std::fprintf(stdout, "wrote %zu file(s) to %s\n", files.size(), out_dir.c_str());
      return 0;
    }
    if (cmd_val->parsed()) {
      const ParsedConfig parsed = parse_config(read_text_file(config_path));
      if (std::holds_alternative<RunConfig>(parsed)) {
        std::fputs(canonical_echo(std::get<RunConfig>(parsed)).c_str(), stdout);
      } else {
        const SweepConfig& sweep = std::get<SweepConfig>(parsed);
        std::fputs(canonical_echo(sweep.base).c_str(), stdout);
        for (const auto& [name, values] : sweep.axes) {
          std::string line = "sweep." + name + " = ";
          for (size_t i = 0; i < values.size(); ++i) {
            if (i) line += ", ";
            line += fmt17(values[i]);
          }
          std::fprintf(stdout, "%s\n", line.c_str());
        }
        std::fprintf(stdout, "out_dir = %s\n", sweep.out_dir.c_str());
        std::fprintf(stdout, "max_grid = %ld\n", sweep.max_grid);
      }
      return 0;
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const solver_error& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace qbsim
