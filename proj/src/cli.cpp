#include "odicke/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "odicke/io.hpp"
#include "odicke/spectral.hpp"
#include "odicke/steady.hpp"

namespace odicke {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view key, std::string_view value) {
  const std::string s = trim(value);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw UsageError("invalid number for '" + std::string(key) + "': '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view value) {
  const std::string s = trim(value);
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw UsageError("invalid integer for '" + std::string(key) + "': '" + s + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string s = trim(value);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw UsageError("invalid boolean for '" + std::string(key) + "': '" + s + "'");
}

std::string print_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* option_help(std::string_view key) {
  static const std::map<std::string_view, const char*> help = {
      {"omega", "magnon frequency (> 0)"},
      {"kappa", "mean cavity loss (> 0)"},
      {"delta-kappa", "loss imbalance, 0 < delta-kappa < kappa"},
      {"delta", "cavity detuning, or 'ep' for the exceptional tuning"},
      {"g", "coupling, or 'critical' for g_c"},
      {"g-rel", "coupling as a multiple of g_c (overrides --g)"},
      {"side", "normal | superradiant | both"},
      {"eps-min", "smallest relative distance |g - g_c| / g_c"},
      {"eps-max", "largest relative distance |g - g_c| / g_c"},
      {"points-per-decade", "sweep density (>= 5)"},
      {"observables", "'all' or a comma list of adr,im_lambda,dn1,dn2,dnb,purity,quadratures"},
      {"freq-min", "lowest noise frequency"},
      {"freq-max", "highest noise frequency"},
      {"freq-points", "number of noise frequencies"},
      {"freq-scale", "log | linear"},
      {"input", "CSV file for fit"},
      {"column", "column to fit against eps"},
      {"out", "write output to this file"},
      {"format", "csv | json"},
      {"threads", "worker threads, 0 for hardware concurrency"}};
  const auto it = help.find(key);
  return it == help.end() ? "" : it->second;
}

} // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "omega",  "kappa",      "delta-kappa", "delta",       "g",
      "g-rel",  "side",       "eps-min",     "eps-max",     "points-per-decade",
      "observables", "freq-min", "freq-max", "freq-points", "freq-scale",
      "full",   "input",      "column",      "out",         "format",
      "threads"};
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  if (key == "omega") cfg.omega = parse_double(key, value);
  else if (key == "kappa") cfg.kappa = parse_double(key, value);
  else if (key == "delta-kappa") cfg.delta_kappa = parse_double(key, value);
  else if (key == "delta") {
    if (value == "ep") {
      cfg.delta_ep = true;
      cfg.delta = 0.0;
    } else {
      cfg.delta_ep = false;
      cfg.delta = parse_double(key, value);
    }
  } else if (key == "g") {
    if (value != "critical") parse_double(key, value);
    cfg.g = value;
  } else if (key == "g-rel") {
    if (value.empty()) cfg.g_rel.reset();
    else cfg.g_rel = parse_double(key, value);
  } else if (key == "side") {
    if (!parse_side(value)) throw UsageError("invalid side '" + value + "'");
    cfg.side = value;
  } else if (key == "eps-min") cfg.eps_min = parse_double(key, value);
  else if (key == "eps-max") cfg.eps_max = parse_double(key, value);
  else if (key == "points-per-decade") cfg.points_per_decade = parse_int(key, value);
  else if (key == "observables") {
    if (value != "all") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!parse_observable(trim(item))) {
          throw UsageError("unknown observable '" + trim(item) + "' in 'observables'");
        }
      }
    }
    cfg.observables = value;
  } else if (key == "freq-min") cfg.freq_min = parse_double(key, value);
  else if (key == "freq-max") cfg.freq_max = parse_double(key, value);
  else if (key == "freq-points") cfg.freq_points = parse_int(key, value);
  else if (key == "freq-scale") {
    if (value != "log" && value != "linear") {
      throw UsageError("invalid freq-scale '" + value + "' (log or linear)");
    }
    cfg.freq_scale = value;
  } else if (key == "full") cfg.full = parse_bool(key, value);
  else if (key == "input") cfg.input = value;
  else if (key == "column") cfg.column = value;
  else if (key == "out") cfg.out = value;
  else if (key == "format") {
    if (value != "csv" && value != "json") {
      throw UsageError("invalid format '" + value + "' (csv or json)");
    }
    cfg.format = value;
  } else if (key == "threads") cfg.threads = parse_int(key, value);
  else throw UsageError("unknown configuration key '" + std::string(key) + "'");
}

std::string get_config_value(const RunConfig& cfg, std::string_view key) {
  if (key == "omega") return print_double(cfg.omega);
  if (key == "kappa") return print_double(cfg.kappa);
  if (key == "delta-kappa") return print_double(cfg.delta_kappa);
  if (key == "delta") return cfg.delta_ep ? "ep" : print_double(cfg.delta);
  if (key == "g") return cfg.g;
  if (key == "g-rel") return cfg.g_rel ? print_double(*cfg.g_rel) : "";
  if (key == "side") return cfg.side;
  if (key == "eps-min") return print_double(cfg.eps_min);
  if (key == "eps-max") return print_double(cfg.eps_max);
  if (key == "points-per-decade") return std::to_string(cfg.points_per_decade);
  if (key == "observables") return cfg.observables;
  if (key == "freq-min") return print_double(cfg.freq_min);
  if (key == "freq-max") return print_double(cfg.freq_max);
  if (key == "freq-points") return std::to_string(cfg.freq_points);
  if (key == "freq-scale") return cfg.freq_scale;
  if (key == "full") return cfg.full ? "true" : "false";
  if (key == "input") return cfg.input;
  if (key == "column") return cfg.column;
  if (key == "out") return cfg.out;
  if (key == "format") return cfg.format;
  if (key == "threads") return std::to_string(cfg.threads);
  throw UsageError("unknown configuration key '" + std::string(key) + "'");
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& key : config_keys()) {
    out += key + " = " + get_config_value(cfg, key) + '\n';
  }
  return out;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    set_config_value(base, key, std::string_view(line).substr(eq + 1));
  }
  return base;
}

ResolvedModel resolve_model(const RunConfig& cfg) {
  const double delta = cfg.delta_ep ? ep_detuning(cfg.kappa, cfg.delta_kappa) : cfg.delta;
  auto params = validate_params(cfg.omega, cfg.kappa, cfg.delta_kappa, delta, 0.0);
  ResolvedModel r;
  r.g_c = critical_coupling(params);
  double g = r.g_c;
  if (cfg.g_rel) {
    g = *cfg.g_rel * r.g_c;
  } else if (cfg.g != "critical") {
    g = parse_double("g", cfg.g);
  }
  r.params = validate_params(cfg.omega, cfg.kappa, cfg.delta_kappa, delta, g);
  return r;
}

SweepSpec sweep_spec_from(const RunConfig& cfg) {
  SweepSpec spec;
  spec.side = *parse_side(cfg.side);
  spec.rel_eps_min = cfg.eps_min;
  spec.rel_eps_max = cfg.eps_max;
  spec.points_per_decade = cfg.points_per_decade;
  if (cfg.observables != "all") {
    spec.observables.clear();
    std::stringstream ss(cfg.observables);
    std::string item;
    while (std::getline(ss, item, ',')) spec.observables.insert(*parse_observable(trim(item)));
  }
  return spec;
}

namespace {

std::vector<double> frequency_grid(const RunConfig& cfg) {
  if (cfg.freq_points < 2) throw UsageError("freq-points must be >= 2");
  const bool log_scale = cfg.freq_scale == "log";
  if (log_scale && !(cfg.freq_min > 0)) throw UsageError("freq-min must be > 0 on a log grid");
  if (!(cfg.freq_max > cfg.freq_min)) throw UsageError("freq-max must exceed freq-min");
  std::vector<double> w(static_cast<std::size_t>(cfg.freq_points));
  const double n = static_cast<double>(w.size() - 1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double t = static_cast<double>(i) / n;
    w[i] = log_scale ? std::pow(10.0, std::log10(cfg.freq_min) +
                                           t * (std::log10(cfg.freq_max) -
                                                std::log10(cfg.freq_min)))
                     : cfg.freq_min + t * (cfg.freq_max - cfg.freq_min);
  }
  return w;
}

io::Meta make_meta(const std::string& command, const ResolvedModel& m, bool has_g) {
  io::Meta meta;
  meta.command = command;
  meta.params = m.params;
  meta.g_c = m.g_c;
  meta.has_g = has_g;
  return meta;
}

void run_fit(const RunConfig& cfg, std::ostream& os) {
  if (cfg.input.empty()) throw UsageError("fit requires --input");
  if (cfg.column.empty()) throw UsageError("fit requires --column");
  std::ifstream in(cfg.input);
  if (!in) throw UsageError("cannot open input '" + cfg.input + "'");
  const auto table = io::read_csv(in);
  const int eps_col = table.column("eps");
  const int val_col = table.column(cfg.column);
  if (eps_col < 0) throw UsageError("input has no 'eps' column");
  if (val_col < 0) throw UsageError("input has no column '" + cfg.column + "'");
  const int phase_col = table.column("phase");
  const int status_col = table.column("status");

  std::map<std::string, std::vector<std::pair<double, double>>> groups;
  for (const auto& row : table.rows) {
    if (status_col >= 0 && row[status_col] != "ok") continue;
    if (row[eps_col].empty() || row[val_col].empty()) continue;
    const std::string group = phase_col >= 0 ? row[phase_col] : "all";
    if (cfg.side != "both" && phase_col >= 0 && group != cfg.side) continue;
    groups[group].emplace_back(parse_double("eps", row[eps_col]),
                               parse_double(cfg.column, row[val_col]));
  }
  if (groups.empty()) throw InsufficientData("no usable rows for column '" + cfg.column + "'");

  os << "# " << kToolName << ' ' << kToolVersion << " command=fit input=" << cfg.input << '\n';
  os << "column,group,exponent,log_amplitude,r_squared,n_points,eps_min,eps_max\n";
  for (const auto& [group, pts] : groups) {
    const auto fit = fit_power_law(pts);
    os << cfg.column << ',' << group << ',' << io::format_number(fit.exponent) << ','
       << io::format_number(fit.log_amplitude) << ',' << io::format_number(fit.r_squared)
       << ',' << fit.n_points << ',' << io::format_number(fit.window.first) << ','
       << io::format_number(fit.window.second) << '\n';
  }
}

void run_command(const std::string& command, const RunConfig& cfg, std::ostream& os) {
  const bool json = cfg.format == "json";
  const auto threads = static_cast<unsigned>(std::max(cfg.threads, 0));
  if (command == "fit") {
    run_fit(cfg, os);
    return;
  }
  const auto model = resolve_model(cfg);

  if (command == "report") {
    const auto report = exponent_report(model.params, sweep_spec_from(cfg), threads);
    const auto meta = make_meta(command, model, false);
    json ? io::write_report_json(os, meta, report) : io::write_report_csv(os, meta, report);
  } else if (command == "sweep") {
    const auto data = sweep(model.params, sweep_spec_from(cfg), threads);
    const auto meta = make_meta(command, model, false);
    json ? io::write_sweep_json(os, meta, data) : io::write_sweep_csv(os, meta, data);
  } else if (command == "spectrum") {
    auto spec = sweep_spec_from(cfg);
    spec.observables = {Observable::Adr, Observable::ImLambda};
    const auto data = sweep(model.params, spec, threads);
    const auto meta = make_meta(command, model, false);
    json ? io::write_spectrum_json(os, meta, data) : io::write_spectrum_csv(os, meta, data);
  } else if (command == "noise") {
    const auto state = mean_field_steady_state(model.params);
    const auto lin = linearize(model.params, state);
    const auto s = noise_spectrum(lin.a, lin.d, frequency_grid(cfg));
    const auto meta = make_meta(command, model, true);
    json ? io::write_noise_json(os, meta, s, cfg.full)
         : io::write_noise_csv(os, meta, s, cfg.full);
  } else if (command == "ep-check") {
    const auto state = mean_field_steady_state(model.params);
    const auto a = drift_matrix(model.params, state);
    io::write_defect(os, make_meta(command, model, true), ep_defect(a), eigen_spectrum(a),
                     json);
  } else {
    throw UsageError("unknown command '" + command + "'");
  }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linearized open Dicke model: spectra, covariances, noise and critical exponents",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
  };
  const std::vector<Command> commands = {
      {"report", "fit critical exponents on both sides of g_c"},
      {"sweep", "tabulate observables over a coupling sweep"},
      {"spectrum", "drift-matrix eigenvalues over a coupling sweep"},
      {"noise", "symmetrized noise spectrum at fixed coupling"},
      {"ep-check", "exceptional-point defect diagnostics at fixed coupling"},
      {"fit", "re-fit a power law to a column of a stored CSV"}};

  std::map<std::string, std::string> raw;
  std::map<std::string, std::vector<CLI::Option*>> opts;
  std::string config_path;
  bool full_flag = false;
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    subs.push_back(sub);
    sub->add_option("--config", config_path, "flat key = value config file; flags override");
    for (const auto& key : config_keys()) {
      if (key == "full") {
        opts[key].push_back(sub->add_flag("--full", full_flag, "emit every matrix entry"));
      } else {
        opts[key].push_back(sub->add_option("--" + key, raw[key], option_help(key)));
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  std::string command;
  for (auto* sub : subs) {
    if (sub->parsed()) command = sub->get_name();
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config '" + config_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = parse_config(buf.str(), cfg);
    }
    for (const auto& key : config_keys()) {
      bool given = false;
      for (auto* o : opts[key]) given = given || o->count() > 0;
      if (!given) continue;
      set_config_value(cfg, key, key == "full" ? "true" : raw[key]);
    }

    if (cfg.out.empty()) {
      run_command(command, cfg, out);
    } else {
      std::ostringstream buf;
      run_command(command, cfg, buf);
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw UsageError("cannot open output '" + cfg.out + "'");
      file << buf.str();
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace odicke
