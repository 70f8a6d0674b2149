#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "savns/errors.hpp"
#include "savns/io.hpp"

#ifndef SAVNS_VERSION
#define SAVNS_VERSION "unknown"
#endif
#ifndef SAVNS_GIT_REVISION
#define SAVNS_GIT_REVISION "unknown"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace savns::cli {

namespace {

struct Key {
  const char* name;
  const char* help;
};

// Keys taking a value; warm-start and forcing are booleans.
constexpr Key kValueKeys[] = {
    {"case", "example1, example2, or a velocity field dump (default example1)"},
    {"scheme", "psav1, psav2, srsav1, srsav2 or projection"},
    {"schemes", "comma-separated schemes"},
    {"n", "nodes per axis (default 64)"},
    {"backend", "spectral or fd (periodic cases only; default spectral)"},
    {"fd-order", "finite-difference order, 2 or 4 (default 4)"},
    {"dt", "time step, fractions allowed (1/32); a list for energy"},
    {"dts", "comma-separated time steps for converge and energy"},
    {"eps", "penalty parameter (default 1e-5); a list for eps-sweep"},
    {"beta", "SR-SAV Baumgarte coefficient (default 1)"},
    {"s", "SR-SAV inner iterations (default 2)"},
    {"T", "final time (default 1)"},
    {"nu", "viscosity (default 1)"},
    {"tol", "relative solver tolerance (default 1e-12)"},
    {"sr-history", "per-sequence or committed (default per-sequence)"},
    {"snapshot-every", "simulate: write u/p every K steps (0: first and last only)"},
    {"jobs", "parallel sweep rows (default 1)"},
    {"out", "output directory"},
};
constexpr const char* kBoolKeys[] = {"warm-start", "forcing"};
constexpr const char* kSrKeys[] = {"beta", "s", "sr-history", "warm-start"};

bool is_sr_key(std::string_view k) {
  for (const char* s : kSrKeys)
    if (k == s) return true;
  return false;
}

bool known_key(const std::string& k) {
  if (k == "command") return true;
  for (const auto& v : kValueKeys)
    if (k == v.name) return true;
  for (const char* b : kBoolKeys)
    if (k == b) return true;
  return false;
}

std::string json_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + json_text(e);
    return s;
  }
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw ConfigError("config: unsupported value " + v.dump());
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  // A run.json manifest carries the settings under "config".
  if (j.contains("config") && j["config"].is_object()) j = j["config"];
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    std::string key = k;
    for (char& c : key)
      if (c == '_') c = '-';
    if (!known_key(key)) throw ConfigError(key + ": unknown configuration key");
    out[key] = json_text(v);
  }
  return out;
}

double number_of(const std::string& key, const std::string& text) {
  try {
    return parse_number(text);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::vector<double> numbers_of(const std::string& key, const std::string& text) {
  try {
    return parse_number_list(text);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

int int_of(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

bool bool_of(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(part);
  return out;
}

Command command_of(const std::string& text) {
  if (text == "simulate") return Command::Simulate;
  if (text == "converge") return Command::Converge;
  if (text == "eps-sweep") return Command::EpsSweep;
  if (text == "energy") return Command::Energy;
  throw ConfigError("command: unknown command '" + text +
                    "' (simulate, converge, eps-sweep, energy)");
}

bool is_sr(SchemeKind k) { return k == SchemeKind::Srsav1 || k == SchemeKind::Srsav2; }

std::string dir_safe(std::string s) {
  for (char& c : s)
    if (c == '/') c = '_';
  return s;
}

}  // namespace

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Penalty and SR scalar-auxiliary-variable Navier-Stokes solvers",
               "savns"};
  app.set_version_flag("--version", std::string(SAVNS_VERSION));
  std::string command, config_path;
  app.add_option("command", command, "simulate, converge, eps-sweep or energy");
  app.add_option("--config", config_path, "JSON file with the same keys; flags win");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_opts;
  for (const auto& k : kValueKeys) {
    const std::string name = k.name;
    const std::string spec = name == "T" ? "-T,--T" : "--" + name;
    flag_opts[name] = app.add_option(spec, flag_values[name], k.help);
  }
  bool warm = false, no_forcing = false;
  auto* warm_opt = app.add_flag("--warm-start", warm, "SR-SAV: start inner solves from the last iterate");
  auto* forcing_opt = app.add_flag("--no-forcing", no_forcing, "drop the manufactured forcing");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw CLI::Success();
  } catch (const CLI::CallForVersion&) {
    std::cout << SAVNS_VERSION << "\n";
    throw CLI::Success();
  }

  std::map<std::string, std::string> v;
  if (!config_path.empty()) v = load_config_file(config_path);
  if (!command.empty()) v["command"] = command;
  for (const auto& [name, opt] : flag_opts)
    if (opt->count() > 0) v[name] = flag_values[name];
  if (warm_opt->count() > 0) v["warm-start"] = warm ? "true" : "false";
  if (forcing_opt->count() > 0) v["forcing"] = no_forcing ? "false" : "true";
  auto given = [&](const char* k) { return v.count(k) > 0; };
  auto get = [&](const char* k, const std::string& dflt) {
    return given(k) ? v.at(k) : dflt;
  };

  RunConfig cfg;
  if (!given("command"))
    throw ConfigError("command: missing (simulate, converge, eps-sweep, energy)");
  cfg.command = command_of(v.at("command"));
  RunSpec& spec = cfg.spec;

  // Problem definition.
  const std::string case_text = get("case", "example1");
  const bool from_file = case_text != "example1" && case_text != "example2";
  const std::string backend = get("backend", "spectral");
  if (backend != "spectral" && backend != "fd")
    throw ConfigError("backend: expected spectral or fd, got '" + backend + "'");
  spec.discretization =
      backend == "fd" ? Discretization::FiniteDifference : Discretization::Spectral;
  spec.fd_order = int_of("fd-order", get("fd-order", "4"));
  if (spec.fd_order != 2 && spec.fd_order != 4)
    throw ConfigError("fd-order: must be 2 or 4");
  spec.n = int_of("n", get("n", "64"));
  if (from_file) {
    std::ifstream in(case_text);
    if (!in)
      throw ConfigError("case: not example1/example2 and no such file '" + case_text + "'");
    try {
      spec.initial_velocity = std::make_shared<const VectorField>(
          read_vector_field(in, spec.discretization, spec.fd_order));
    } catch (const ConfigError& e) {
      throw ConfigError("case: " + std::string(e.what()));
    }
    if (given("n")) throw ConfigError("n: the grid comes from the initial-field file");
    cfg.case_label = fs::path(case_text).stem().string();
    spec.n = spec.initial_velocity->grid().nx();
  } else {
    spec.case_id = case_from_string(case_text);
    cfg.case_label = case_text;
    if (spec.case_id == CaseId::Example1 && given("backend") && backend == "spectral")
      throw ConfigError("backend: example1 has Dirichlet walls; use fd");
  }
  if (spec.initial_velocity && !spec.initial_velocity->grid().periodic() &&
      given("backend") && backend == "spectral")
    throw ConfigError("backend: the initial field has Dirichlet walls; use fd");

  // Schemes.
  if (given("scheme") && given("schemes"))
    throw ConfigError("schemes: give either scheme or schemes");
  const std::string scheme_text = given("schemes") ? v.at("schemes") : get("scheme", "");
  if (scheme_text.empty()) throw ConfigError("scheme: missing (psav1, psav2, srsav1, srsav2, projection)");
  for (const auto& name : split(scheme_text)) {
    try {
      cfg.schemes.push_back(scheme_from_string(name));
    } catch (const ConfigError& e) {
      if (given("schemes")) throw ConfigError("schemes" + std::string(e.what()).substr(6));
      throw;
    }
  }
  if (cfg.schemes.size() > 1 &&
      (cfg.command == Command::Simulate || cfg.command == Command::Energy))
    throw ConfigError("schemes: this command takes a single scheme");
  spec.scheme = cfg.schemes.front();

  // Time steps.
  switch (cfg.command) {
    case Command::Simulate:
    case Command::EpsSweep:
      if (given("dts")) throw ConfigError("dts: only converge and energy take a dt list");
      if (!given("dt")) throw ConfigError("dt: missing");
      cfg.dt_text = split(v.at("dt"));
      if (cfg.dt_text.size() != 1) throw ConfigError("dt: expected a single value");
      break;
    case Command::Converge:
      if (given("dt")) throw ConfigError("dt: converge takes its time steps from dts");
      if (!given("dts")) throw ConfigError("dts: missing");
      cfg.dt_text = split(v.at("dts"));
      break;
    case Command::Energy:
      if (given("dt") && given("dts")) throw ConfigError("dts: give either dt or dts");
      if (!given("dt") && !given("dts")) throw ConfigError("dts: missing");
      cfg.dt_text = split(given("dts") ? v.at("dts") : v.at("dt"));
      break;
  }
  const char* dt_key = given("dts") ? "dts" : "dt";
  for (const auto& t : cfg.dt_text) cfg.dts.push_back(number_of(dt_key, t));
  spec.dt = cfg.dts.front();

  // Model parameters.
  if (cfg.command == Command::EpsSweep) {
    if (!given("eps")) throw ConfigError("eps: eps-sweep needs a list of values");
    cfg.eps_list = numbers_of("eps", v.at("eps"));
    spec.eps = cfg.eps_list.front();
  } else {
    const auto e = numbers_of("eps", get("eps", "1e-5"));
    if (e.size() != 1) throw ConfigError("eps: only eps-sweep takes a list");
    spec.eps = e.front();
  }
  spec.beta = number_of("beta", get("beta", "1"));
  spec.s = int_of("s", get("s", "2"));
  spec.T = number_of("T", get("T", "1"));
  spec.nu = number_of("nu", get("nu", "1"));
  spec.solver_tol = number_of("tol", get("tol", "1e-12"));
  const std::string hist = get("sr-history", "per-sequence");
  if (hist == "per-sequence")
    spec.sr_history = SrHistory::PerSequence;
  else if (hist == "committed")
    spec.sr_history = SrHistory::Committed;
  else
    throw ConfigError("sr-history: expected per-sequence or committed, got '" + hist + "'");
  spec.warm_start = bool_of("warm-start", get("warm-start", "false"));
  spec.forcing = bool_of("forcing", get("forcing", "true"));
  bool any_sr = false;
  for (auto k : cfg.schemes) any_sr |= is_sr(k);
  if (!any_sr)
    for (const char* k : kSrKeys)
      if (given(k)) throw ConfigError(std::string(k) + ": only used by srsav1/srsav2");

  // Output and execution.
  if (given("snapshot-every") && cfg.command != Command::Simulate)
    throw ConfigError("snapshot-every: only used by simulate");
  cfg.snapshot_every = int_of("snapshot-every", get("snapshot-every", "0"));
  if (cfg.snapshot_every < 0) throw ConfigError("snapshot-every: must be >= 0");
  cfg.jobs = int_of("jobs", get("jobs", "1"));
  if (cfg.jobs < 1) throw ConfigError("jobs: must be >= 1");
  if (given("out")) {
    cfg.out = v.at("out");
  } else {
    const char* root = std::getenv("SAVNS_OUTPUT_ROOT");
    std::string name = v.at("command") + "_" + cfg.case_label;
    for (auto k : cfg.schemes) name += "_" + std::string(to_string(k));
    cfg.out = fs::path(root && *root ? root : "savns-runs") / name;
  }

  // Validate every run the command will make.
  for (auto k : cfg.schemes)
    for (double dt : cfg.dts)
      for (double e : cfg.eps_list.empty() ? std::vector<double>{spec.eps} : cfg.eps_list) {
        RunSpec r = spec;
        r.scheme = k;
        r.dt = dt;
        r.eps = e;
        r.validate();
      }

  cfg.resolved = v;
  cfg.resolved["case"] = case_text;
  cfg.resolved["backend"] = spec.grid().spectral() ? "spectral" : "fd";
  cfg.resolved["fd-order"] = std::to_string(spec.fd_order);
  cfg.resolved["out"] = cfg.out.string();
  for (const char* k : {"n", "beta", "s", "T", "nu", "tol", "sr-history", "warm-start",
                        "forcing", "jobs"})
    if (!given(k) && (any_sr || !is_sr_key(k))) {
      static const std::map<std::string, std::string> d = {
          {"n", "64"},      {"beta", "1"},         {"s", "2"},
          {"T", "1"},       {"nu", "1"},           {"tol", "1e-12"},
          {"jobs", "1"},    {"sr-history", "per-sequence"},
          {"warm-start", "false"}, {"forcing", "true"}};
      cfg.resolved[k] = d.at(k);
    }
  if (from_file) cfg.resolved.erase("n");
  if (!given("eps")) cfg.resolved["eps"] = "1e-5";
  return cfg;
}

namespace {

template <class F>
void write_file(const fs::path& path, std::vector<std::string>& artifacts, const F& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
  artifacts.push_back(path.filename().string());
}

std::string e6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::string report_name(const RunConfig& cfg, SchemeKind k) {
  return cfg.schemes.size() == 1 ? "report.csv"
                                 : "report_" + std::string(to_string(k)) + ".csv";
}

// Returns the number of failed rows.
int report_rows(const ConvergenceReport& rep, json& rows) {
  int failed = 0;
  for (const auto& r : rep.rows) {
    json row = {{"scheme", rep.scheme}, {rep.parameter, r.param}, {"seconds", r.seconds}};
    if (!r.error.empty()) {
      row["error"] = r.error;
      std::cerr << "savns: " << rep.scheme << " row " << rep.parameter << "=" << e6(r.param)
                << " failed: " << r.error << "\n";
      ++failed;
    }
    rows.push_back(row);
  }
  return failed;
}

void print_report(const ConvergenceReport& rep) {
  std::printf("%s (%s)\n%12s %12s %12s %12s %8s %8s\n", rep.scheme.c_str(),
              rep.backend.c_str(), rep.parameter.c_str(), "err_u_linf", "err_p_l2",
              "div_linf", "order_u", "order_p");
  for (const auto& r : rep.rows)
    std::printf("%12.4e %12.4e %12.4e %12.4e %8.3f %8.3f\n", r.param, r.err_u_linf,
                r.err_p_l2, r.div_linf, r.order_u, r.order_p);
  std::printf("fitted order: u %.3f  p %.3f\n", rep.fitted_order_u(), rep.fitted_order_p());
}

int simulate(const RunConfig& cfg, json& m, std::vector<std::string>& artifacts) {
  RunSpec spec = cfg.spec;
  auto snapshot = [&](const FlowState& s) {
    char name[32];
    std::snprintf(name, sizeof name, "u_%06lld.txt", static_cast<long long>(s.step));
    write_file(cfg.out / name, artifacts, [&](std::ostream& o) { write_field(o, s.u); });
    std::snprintf(name, sizeof name, "p_%06lld.txt", static_cast<long long>(s.step));
    write_file(cfg.out / name, artifacts, [&](std::ostream& o) { write_field(o, s.p); });
  };
  snapshot(initial_state(spec));
  std::ofstream steps(cfg.out / "steps.csv");
  artifacts.push_back("steps.csv");
  steps << "step,t,energy,energy_residual,div_linf,constraint_residual,q,residual_momentum\n";
  std::int64_t last = 0;
  const RunResult r = run(spec, [&](const FlowState& s, const StepDiagnostics& d) {
    steps << s.step << ',' << e6(s.t) << ',' << e6(d.energy) << ',' << e6(d.energy_residual)
          << ',' << e6(d.div_linf) << ',' << e6(d.constraint_residual) << ','
          << e6(d.q_value) << ',' << e6(d.residual_momentum) << '\n';
    if (cfg.snapshot_every > 0 && s.step % cfg.snapshot_every == 0) {
      snapshot(s);
      last = s.step;
    }
  });
  if (last != r.final_state.step) snapshot(r.final_state);

  ConvergenceReport rep;
  rep.scheme = to_string(spec.scheme);
  ConvergenceRow row;
  row.param = spec.dt;
  row.err_u_linf = r.err_u_linf;
  row.err_p_l2 = r.err_p_l2;
  row.div_linf = r.div_linf;
  row.q_drift = r.q_drift;
  row.seconds = r.seconds;
  rep.rows = {row};
  fill_orders(rep.rows);
  write_file(cfg.out / "report.csv", artifacts, [&](std::ostream& o) { rep.write_csv(o); });

  Checkpoint c;
  c.state = r.final_state;
  c.config_hash = fnv1a(json(cfg.resolved).dump());
  c.s = is_sr(spec.scheme) ? spec.s : 0;
  write_file(cfg.out / "checkpoint.txt", artifacts,
             [&](std::ostream& o) { write_checkpoint(o, c); });

  std::printf("%s t=%.6g steps=%lld err_u_linf=%.6e err_p_l2=%.6e div_linf=%.6e q=%.15g\n",
              rep.scheme.c_str(), r.final_state.t,
              static_cast<long long>(r.final_state.step), r.err_u_linf, r.err_p_l2,
              r.div_linf, r.final_state.q);
  m["rows"] = json::array({{{"scheme", rep.scheme}, {"dt", spec.dt}, {"seconds", r.seconds}}});
  return 0;
}

int converge(const RunConfig& cfg, json& m, std::vector<std::string>& artifacts) {
  int failed = 0;
  json rows = json::array();
  for (SchemeKind k : cfg.schemes) {
    RunSpec spec = cfg.spec;
    spec.scheme = k;
    const ConvergenceReport rep = run_convergence(spec, cfg.dts, cfg.jobs);
    write_file(cfg.out / report_name(cfg, k), artifacts,
               [&](std::ostream& o) { rep.write_csv(o); });
    print_report(rep);
    failed += report_rows(rep, rows);
  }
  m["rows"] = rows;
  return failed ? 1 : 0;
}

int eps_sweep(const RunConfig& cfg, json& m, std::vector<std::string>& artifacts) {
  const auto reps = run_eps_sweep(cfg.spec, cfg.schemes, cfg.eps_list, cfg.jobs);
  int failed = 0;
  json rows = json::array();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    write_file(cfg.out / report_name(cfg, cfg.schemes[i]), artifacts,
               [&](std::ostream& o) { reps[i].write_csv(o); });
    print_report(reps[i]);
    failed += report_rows(reps[i], rows);
  }
  m["rows"] = rows;
  return failed ? 1 : 0;
}

int energy(const RunConfig& cfg, json& m, std::vector<std::string>& artifacts) {
  std::ostringstream summary;
  summary << "dt,max_energy_gap,energy_initial,energy_final,max_increase\n";
  json rows = json::array();
  for (std::size_t i = 0; i < cfg.dts.size(); ++i) {
    RunSpec spec = cfg.spec;
    spec.dt = cfg.dts[i];
    const auto t0 = std::chrono::steady_clock::now();
    const auto series = energy_series(spec);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const fs::path dir = cfg.out / ("dt_" + dir_safe(cfg.dt_text[i]));
    fs::create_directories(dir);
    std::vector<std::string> sub;
    write_file(dir / "energy.csv", sub, [&](std::ostream& o) {
      o << "t,original,modified\n";
      for (const auto& e : series)
        o << e6(e.t) << ',' << e6(e.original) << ',' << e6(e.modified) << '\n';
    });
    artifacts.push_back((fs::path(dir.filename()) / "energy.csv").string());
    double rise = -INFINITY;
    for (std::size_t k = 1; k < series.size(); ++k)
      rise = std::max(rise, series[k].modified - series[k - 1].modified);
    const double gap = max_energy_gap(series);
    summary << e6(spec.dt) << ',' << e6(gap) << ',' << e6(series.front().modified) << ','
            << e6(series.back().modified) << ',' << e6(rise) << '\n';
    std::printf("dt=%s max|modified-original|=%.6e  E0=%.6e  E_T=%.6e  max increase=%.3e\n",
                cfg.dt_text[i].c_str(), gap, series.front().modified,
                series.back().modified, rise);
    rows.push_back({{"dt", spec.dt}, {"seconds", secs}});
  }
  write_file(cfg.out / "report.csv", artifacts, [&](std::ostream& o) { o << summary.str(); });
  m["rows"] = rows;
  return 0;
}

}  // namespace

int execute(const RunConfig& cfg) {
  fs::create_directories(cfg.out);
  const auto start = std::chrono::steady_clock::now();
  json m;
  m["tool"] = "savns";
  m["version"] = SAVNS_VERSION;
  m["git_revision"] = SAVNS_GIT_REVISION;
  m["command"] = cfg.resolved.at("command");
  m["config"] = cfg.resolved;
  std::vector<std::string> artifacts;
  int status = 0;
  try {
    switch (cfg.command) {
      case Command::Simulate: status = simulate(cfg, m, artifacts); break;
      case Command::Converge: status = converge(cfg, m, artifacts); break;
      case Command::EpsSweep: status = eps_sweep(cfg, m, artifacts); break;
      case Command::Energy: status = energy(cfg, m, artifacts); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "savns: run failed: " << e.what() << "\n";
    m["error"] = e.what();
    status = 1;
  }
  m["status"] = status == 0 ? "ok" : "failed";
  m["artifacts"] = artifacts;
  m["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(cfg.out / "run.json") << m.dump(2) << '\n';
  return status;
}

int main(int argc, const char* const* argv) {
  try {
    return execute(parse_config(argc, argv));
  } catch (const CLI::Success&) {
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "savns: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "savns: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "savns: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace savns::cli
