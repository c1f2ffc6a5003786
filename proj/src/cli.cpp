#include "entsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "entsim/csv.hpp"
#include "entsim/oracle.hpp"
#include "entsim/rng.hpp"
#include "entsim/validate.hpp"

namespace entsim::cli {

namespace {

constexpr double kPi = 3.141592653589793;

struct HelpRequested {};

// Mutable option set shared by the config file and the flags; flags win.
struct Staging {
  double alpha = 0.7071067811865476;
  double theta1 = kPi / 8.0;
  double phi12 = 0.0;
  double p_c = 0.01;
  double eta = 0.0;
  double c_vacuum = 0.0;
  double t0 = 1.0;
  long trials = 100000;
  std::uint64_t seed = 42;
  std::string alpha_grid_text;
  std::string output;
  bool degrees = false;
  bool include_double = false;
  bool unconditioned = false;

  bool alpha_set = false;   // from either source
  bool theta1_set = false;
  bool phi12_set = false;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "alpha",      "theta1",      "phi12",   "p-c",
      "eta",        "c-vacuum",    "t0",      "trials",
      "seed",       "alpha-grid",  "output",  "degrees",
      "include-double-excitation", "unconditioned-e"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid numeric value for '" + key + "': " + text);
  }
}

long parse_long(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid integer value for '" + key + "': " + text);
  }
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid seed value for '" + key + "': " + text);
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw UsageError("invalid boolean value for '" + key + "': " + text);
}

// Flat `key = value` file, one pair per line, '#' comments.
void apply_config_file(const std::string& path, Staging& st, bool& file_alpha,
                       bool& file_theta1) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file '" + path + "'");
  }
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line is not 'key = value': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      throw UsageError("unknown config key '" + key + "'");
    }

    if (key == "alpha") {
      st.alpha = parse_double(key, value);
      file_alpha = true;
    } else if (key == "theta1") {
      st.theta1 = parse_double(key, value);
      file_theta1 = true;
    } else if (key == "phi12") {
      st.phi12 = parse_double(key, value);
      st.phi12_set = true;
    } else if (key == "p-c") {
      st.p_c = parse_double(key, value);
    } else if (key == "eta") {
      st.eta = parse_double(key, value);
    } else if (key == "c-vacuum") {
      st.c_vacuum = parse_double(key, value);
    } else if (key == "t0") {
      st.t0 = parse_double(key, value);
    } else if (key == "trials") {
      st.trials = parse_long(key, value);
    } else if (key == "seed") {
      st.seed = parse_seed(key, value);
    } else if (key == "alpha-grid") {
      st.alpha_grid_text = value;
    } else if (key == "output") {
      st.output = value;
    } else if (key == "degrees") {
      st.degrees = parse_bool(key, value);
    } else if (key == "include-double-excitation") {
      st.include_double = parse_bool(key, value);
    } else if (key == "unconditioned-e") {
      st.unconditioned = parse_bool(key, value);
    }
  }
}

std::vector<double> parse_alpha_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    const double v = parse_double("alpha-grid", cell);
    if (v < 0.0 || v > 1.0) {
      throw UsageError("alpha-grid entries must lie in [0, 1]");
    }
    grid.push_back(v);
  }
  if (grid.empty()) {
    throw UsageError("alpha-grid is empty");
  }
  return grid;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.05 * i);
  return grid;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  Staging st;
  bool file_alpha = false;
  bool file_theta1 = false;

  // The config file must be applied before the flags, so find it first.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a path");
      apply_config_file(args[i + 1], st, file_alpha, file_theta1);
    } else if (args[i].rfind("--config=", 0) == 0) {
      apply_config_file(args[i].substr(9), st, file_alpha, file_theta1);
    }
  }

  CLI::App app{"entangled-ensemble simulator"};
  app.require_subcommand(1);
  std::string config_path;

  std::vector<CLI::Option*> alpha_opts, theta_opts;
  for (const char* name : {"generate", "chsh", "scan", "validate"}) {
    auto* sub = app.add_subcommand(name, "");
    auto* oa = sub->add_option("--alpha", st.alpha,
                               "entanglement amplitude, sets theta1 = asin(alpha)/2");
    auto* ot = sub->add_option("--theta1", st.theta1, "wave-plate angle of arm 1");
    oa->excludes(ot);
    ot->excludes(oa);
    alpha_opts.push_back(oa);
    theta_opts.push_back(ot);
    sub->add_option("--phi12", st.phi12, "channel phase between the arms");
    sub->add_option("--p-c", st.p_c, "excitation probability per attempt");
    sub->add_option("--eta", st.eta, "lumped loss probability per arm");
    sub->add_option("--c-vacuum", st.c_vacuum, "vacuum coefficient of heralded state");
    sub->add_option("--t0", st.t0, "interaction time per attempt");
    sub->add_option("--trials", st.trials, "number of Monte Carlo trials");
    sub->add_option("--seed", st.seed, "master seed");
    sub->add_option("--alpha-grid", st.alpha_grid_text, "comma list of alpha values");
    sub->add_option("--output", st.output, "output CSV path");
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_flag("--degrees", st.degrees, "angles are given in degrees");
    sub->add_flag("--include-double-excitation", st.include_double,
                  "model the second-order emission term");
    sub->add_flag("--unconditioned-e", st.unconditioned,
                  "average correlations over all trials, not just coincidences");
  }

  std::vector<std::string> argv_strings;
  argv_strings.push_back("entsim");
  argv_strings.insert(argv_strings.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_strings.size());
  for (const auto& s : argv_strings) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << std::flush;
    throw HelpRequested{};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  for (auto* sub : app.get_subcommands()) config.command = sub->get_name();

  bool flag_alpha = false;
  bool flag_theta1 = false;
  bool flag_phi12 = false;
  for (auto* sub : app.get_subcommands()) {
    flag_alpha = sub->count("--alpha") > 0;
    flag_theta1 = sub->count("--theta1") > 0;
    flag_phi12 = sub->count("--phi12") > 0;
  }
  st.phi12_set = st.phi12_set || flag_phi12;

  const double angle_factor = st.degrees ? kPi / 180.0 : 1.0;

  // Flags override the file; within one layer alpha and theta1 conflict.
  bool use_alpha = false;
  bool theta_given = false;
  if (flag_alpha) {
    use_alpha = true;
  } else if (flag_theta1) {
    theta_given = true;
  } else if (file_alpha && file_theta1) {
    throw UsageError("config file sets both alpha and theta1");
  } else if (file_alpha) {
    use_alpha = true;
  } else if (file_theta1) {
    theta_given = true;
  }

  if (use_alpha) {
    if (st.alpha < 0.0 || st.alpha > 1.0) {
      throw UsageError("alpha must lie in [0, 1]");
    }
    config.params.theta1 = std::asin(st.alpha) / 2.0;
  } else if (theta_given) {
    config.params.theta1 = st.theta1 * angle_factor;
  }

  config.params.p_c = st.p_c;
  config.params.eta = st.eta;
  config.params.c_vacuum = st.c_vacuum;
  config.params.t0 = st.t0;
  config.params.phi12 = st.phi12_set ? st.phi12 * angle_factor : st.phi12;
  config.params.include_double_excitation = st.include_double;
  config.trials = st.trials;
  config.seed = st.seed;
  config.output_path = st.output;
  config.unconditioned_e = st.unconditioned;
  if (!st.alpha_grid_text.empty()) {
    config.alpha_grid = parse_alpha_grid(st.alpha_grid_text);
  }

  if (config.trials < 1) {
    throw UsageError("trials must be >= 1");
  }
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

namespace {

int run_generate(const RunConfig& config) {
  const std::string path =
      config.output_path.empty() ? "generate.csv" : config.output_path;
  csv::Writer out(path);
  out.write_row({"trial", "attempt", "outcome", "elapsed"});

  const protocol::AttemptDistribution dist =
      protocol::attempt_distribution(config.params);

  double total_attempts = 0.0;
  double total_elapsed = 0.0;
  const std::span<const double> probs(dist.probabilities.data(),
                                      dist.probabilities.size());
  for (long trial = 0; trial < config.trials; ++trial) {
    SplitMix64 rng = SplitMix64::stream(config.seed, static_cast<std::uint64_t>(trial));
    bool heralded = false;
    for (long attempt = 1; attempt <= config.max_attempts; ++attempt) {
      const auto outcome =
          static_cast<protocol::AttemptOutcome>(rng.sample_index(probs, 1.0));
      const double elapsed = static_cast<double>(attempt) * config.params.t0;
      out.write_row({csv::format_integer(trial), csv::format_integer(attempt),
                     protocol::to_string(outcome), csv::format_number(elapsed)});
      if (protocol::is_single_click(outcome)) {
        total_attempts += static_cast<double>(attempt);
        total_elapsed += elapsed;
        heralded = true;
        break;
      }
    }
    if (!heralded) {
      throw protocol::ExhaustionError(config.max_attempts);
    }
  }

  const double mean_attempts = total_attempts / static_cast<double>(config.trials);
  const double mean_elapsed = total_elapsed / static_cast<double>(config.trials);
  std::cout << "trials " << config.trials << ", mean attempts "
            << csv::format_number(mean_attempts) << ", mean elapsed "
            << csv::format_number(mean_elapsed) << "\n";
  if (config.params.p_c > 0.0) {
    const double estimate = protocol::expected_generation_time(config.params);
    std::cout << "closed-form estimate t0/((1-eta) p_c) = "
              << csv::format_number(estimate)
              << ", simulated/estimate = " << csv::format_number(mean_elapsed / estimate)
              << "\n";
  }
  std::cout << "attempt log written to " << path << "\n";
  return kExitOk;
}

int run_chsh(const RunConfig& config) {
  const std::string path = config.output_path.empty() ? "chsh.csv" : config.output_path;
  const chsh::PneState pne = chsh::PneState::from_alpha(
      config.alpha(), config.params.phi12, config.params.c_vacuum);
  const chsh::SReport report = chsh::s_simulated(
      pne, config.settings, config.trials, config.seed, 0, !config.unconditioned_e);

  csv::Writer out(path);
  out.write_row({"phiL", "phiR", "n13", "n24", "n14", "n23", "E", "stderr"});
  long coincidences = 0;
  long trials_total = 0;
  for (const auto& est : report.correlations) {
    out.write_row({csv::format_number(est.phi_l), csv::format_number(est.phi_r),
                   csv::format_integer(est.n13), csv::format_integer(est.n24),
                   csv::format_integer(est.n14), csv::format_integer(est.n23),
                   csv::format_number(est.value), csv::format_number(est.stderr_value)});
    coincidences += est.coincidences;
    trials_total += est.trials;
  }

  const double fraction =
      static_cast<double>(coincidences) / static_cast<double>(trials_total);
  std::cout << "alpha " << csv::format_number(report.alpha) << ", c "
            << csv::format_number(pne.c_vacuum) << ", phi12 "
            << csv::format_number(pne.phi12) << "\n";
  std::cout << "s_paper  " << csv::format_number(report.s_paper)
            << (report.violation_paper ? "  (violation)" : "") << "\n";
  std::cout << "s_oracle " << csv::format_number(report.s_oracle) << "\n";
  std::cout << "s_mc     " << csv::format_number(report.s_mc) << " +- "
            << csv::format_number(report.s_mc_ci95) << " (95% CI)"
            << (report.violation_mc ? "  (violation)" : "") << "\n";
  std::cout << "coincidence fraction " << csv::format_number(fraction)
            << ", closed-form projection probability "
            << csv::format_number(chsh::projection_success_probability(pne.c_vacuum))
            << "\n";
  std::cout << "correlation detail written to " << path << "\n";
  return kExitOk;
}

int run_scan(const RunConfig& config) {
  const std::string path = config.output_path.empty() ? "scan.csv" : config.output_path;
  const std::vector<double> grid =
      config.alpha_grid.empty() ? default_alpha_grid() : config.alpha_grid;
  const auto reports =
      chsh::scan_alpha(grid, config.settings, config.trials, config.params.c_vacuum,
                       config.params.phi12, config.seed, !config.unconditioned_e);

  csv::Writer out(path);
  out.write_row({"alpha", "s_paper", "s_oracle", "s_mc", "s_mc_ci95",
                 "violation_paper", "violation_mc"});
  for (const auto& r : reports) {
    out.write_row({csv::format_number(r.alpha), csv::format_number(r.s_paper),
                   csv::format_number(r.s_oracle), csv::format_number(r.s_mc),
                   csv::format_number(r.s_mc_ci95), csv::format_flag(r.violation_paper),
                   csv::format_flag(r.violation_mc)});
  }

  const auto [lo, hi] = chsh::violation_window_paper(1e-9);
  std::cout << "scan of " << grid.size() << " alpha values written to " << path << "\n";
  std::cout << "closed-form violation window: " << csv::format_number(lo) << " <= alpha <= "
            << csv::format_number(hi) << "\n";
  return kExitOk;
}

int run_validate(const RunConfig& config) {
  const validate::ValidationReport report = validate::run_validation(config.seed, 100);
  for (const auto& check : report.checks) {
    std::printf("%-55s %s  max err %.3g (tol %.3g)\n", check.name.c_str(),
                check.passed ? "ok  " : "FAIL", check.max_error, check.tolerance);
  }
  return report.all_passed() ? kExitOk : kExitValidation;
}

}  // namespace

int run(const RunConfig& config) {
  if (config.command == "generate") return run_generate(config);
  if (config.command == "chsh") return run_chsh(config);
  if (config.command == "scan") return run_scan(config);
  if (config.command == "validate") return run_validate(config);
  throw UsageError("unknown command '" + config.command + "'");
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const RunConfig config = parse_config(args);
    return run(config);
  } catch (const HelpRequested&) {
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace entsim::cli
