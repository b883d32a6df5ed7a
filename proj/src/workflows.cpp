#include "febb/workflows.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "febb/parallel.hpp"

namespace febb {

namespace {

const std::set<std::string> kKnownKeys = {
    "alpha", "ell", "m", "L", "W", "T", "E", "P", "beta-mode", "boundary", "dx",
    "levels", "preset", "data", "out", "m-min", "m-max", "config"};

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trimmed(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("'" + key + "': cannot parse '" + text + "' as a number");
  }
  return v;
}

Index to_index(const std::string& key, const std::string& text) {
  const std::string t = trimmed(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("'" + key + "': cannot parse '" + text + "' as an integer");
  }
  return static_cast<Index>(v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(item);
  return items;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError("'" + key + "' is empty");
  return out;
}

std::vector<Index> to_indices(const std::string& key, const std::string& text) {
  std::vector<Index> out;
  for (const auto& item : split_list(text)) out.push_back(to_index(key, item));
  if (out.empty()) throw ConfigError("'" + key + "' is empty");
  return out;
}

double single(const std::string& key, const std::vector<double>& values) {
  if (values.size() != 1) throw ConfigError("'" + key + "' takes a single value here");
  return values.front();
}

double richardson_order(double coarse, double mid, double fine) {
  const double ratio = (coarse - mid) / (mid - fine);
  return ratio > 0.0 ? std::log2(ratio) : std::nan("");
}

}  // namespace

Settings read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Settings s;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trimmed(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(row) + ": expected key = value");
    }
    s[trimmed(t.substr(0, eq))] = trimmed(t.substr(eq + 1));
  }
  return s;
}

Settings merge_settings(Settings base, const Settings& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

std::vector<double> sweep_preset(const std::string& name) {
  // (i) 2 ell <= T = 0.1 m; (ii) 2 ell <= L = 1 m, capped so N >= 2m + 2 at dx = 1 mm.
  const std::vector<double> small = {0.01, 0.02, 0.03, 0.04, 0.05};
  const std::vector<double> large = {0.1, 0.2, 0.3, 0.4, 0.45};
  if (name == "case-i") return small;
  if (name == "case-ii") return large;
  if (name == "both") {
    std::vector<double> all = small;
    all.insert(all.end(), large.begin(), large.end());
    return all;
  }
  throw ConfigError("unknown sweep preset '" + name + "' (case-i, case-ii, both)");
}

std::optional<Mode> parse_mode(const std::string& name) {
  if (name == "solve") return Mode::Solve;
  if (name == "sweep") return Mode::Sweep;
  if (name == "convergence") return Mode::Convergence;
  if (name == "identify") return Mode::Identify;
  return std::nullopt;
}

RunConfig RunConfig::from_settings(Mode mode, const Settings& settings) {
  for (const auto& [k, v] : settings) {
    if (!kKnownKeys.count(k)) throw ConfigError("unknown setting '" + k + "'");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = settings.find(key);
    return it == settings.end() ? nullptr : &it->second;
  };

  RunConfig c;
  c.mode = mode;
  Index levels = 4;
  switch (mode) {
    case Mode::Solve:
      c.alpha = {1.0};
      c.ell = {0.06};
      c.m = {60};
      break;
    case Mode::Sweep:
      c.alpha = {0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
      c.ell = sweep_preset(get("preset") ? trimmed(*get("preset")) : "both");
      break;
    case Mode::Convergence:
      c.alpha = {0.5};
      c.ell = {0.06};
      c.m = {15};
      break;
    case Mode::Identify:
      c.alpha = default_alpha_grid();
      c.ell = default_ell_grid();
      break;
  }

  if (auto v = get("alpha")) c.alpha = to_doubles("alpha", *v);
  if (auto v = get("ell")) c.ell = to_doubles("ell", *v);
  if (auto v = get("m")) c.m = to_indices("m", *v);
  if (auto v = get("L")) c.beam.length = to_double("L", *v);
  if (auto v = get("W")) c.beam.width = to_double("W", *v);
  if (auto v = get("T")) c.beam.thickness = to_double("T", *v);
  if (auto v = get("E")) c.beam.modulus = to_double("E", *v);
  if (auto v = get("P")) c.beam.load = to_double("P", *v);
  if (auto v = get("dx")) c.dx = to_double("dx", *v);
  if (auto v = get("levels")) levels = to_index("levels", *v);
  if (auto v = get("m-min")) c.rule.m_min = to_index("m-min", *v);
  if (auto v = get("m-max")) c.rule.m_max = to_index("m-max", *v);
  if (auto v = get("data")) c.data = trimmed(*v);
  if (auto v = get("out")) c.out = trimmed(*v);
  if (auto v = get("beta-mode")) {
    const std::string t = trimmed(*v);
    if (t == "corrected") c.solver.beta_mode = BetaMode::Corrected;
    else if (t == "paper") c.solver.beta_mode = BetaMode::Paper;
    else throw ConfigError("beta-mode must be 'corrected' or 'paper', got '" + t + "'");
  }
  if (auto v = get("boundary")) {
    const std::string t = trimmed(*v);
    if (t == "cantilever") c.solver.boundary = BoundaryScheme::Cantilever;
    else if (t == "literal") c.solver.boundary = BoundaryScheme::Literal;
    else throw ConfigError("boundary must be 'cantilever' or 'literal', got '" + t + "'");
  }

  if (mode == Mode::Convergence) {
    if (c.m.size() == 1) {
      if (levels < 3) throw ConfigError("convergence needs at least 3 levels");
      for (Index k = 1; k < levels; ++k) c.m.push_back(c.m.back() * 2);
    }
    if (c.m.size() < 3) throw ConfigError("convergence needs at least 3 refinement levels");
    for (std::size_t k = 1; k < c.m.size(); ++k) {
      if (c.m[k] != 2 * c.m[k - 1]) {
        throw ConfigError("convergence levels must refine dx by halving (m doubling); got m = " +
                          std::to_string(c.m[k - 1]) + " then " + std::to_string(c.m[k]));
      }
    }
  }
  if (mode == Mode::Identify && c.data.empty()) {
    throw ConfigError("identify needs an experiment file (--data)");
  }
  if (c.rule.m_min < 2 || c.rule.m_max < c.rule.m_min) {
    throw ConfigError("need 2 <= m-min <= m-max");
  }
  return c;
}

SolveResult run_solve(const RunConfig& config, std::ostream& csv) {
  if (config.m.size() != 1) throw ConfigError("'m' takes a single value here");
  const FractionalParams params(single("alpha", config.alpha), single("ell", config.ell),
                                config.m.front());
  SolveResult r;
  r.field = solve_beam(config.beam, params, config.solver);
  r.profiles = postprocess(r.field, config.beam, params);
  write_profile_csv(csv, r.field, r.profiles);
  return r;
}

std::vector<SweepRow> run_sweep(const RunConfig& config, std::ostream& csv) {
  if (!(config.dx > 0.0)) throw ConfigError("dx must be positive");
  struct Task {
    double alpha;
    double ell;
    Index m;
  };
  std::vector<Task> tasks;
  for (double ell : config.ell) {
    const double steps = ell / config.dx;
    const auto m = static_cast<Index>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(m)) > kGridTolerance * steps) {
      throw ConfigError("ell = " + format_number(ell) + " is not a multiple of dx");
    }
    tasks.push_back({1.0, ell, m});
    for (double alpha : config.alpha) tasks.push_back({alpha, ell, m});
  }
  const auto tips = parallel_map(tasks.size(), [&](std::size_t i) {
    const Task& t = tasks[i];
    return tip_deflection(solve_beam(config.beam, FractionalParams(t.alpha, t.ell, t.m),
                                     config.solver));
  });
  std::vector<SweepRow> rows;
  const std::size_t stride = config.alpha.size() + 1;
  for (std::size_t l = 0; l < config.ell.size(); ++l) {
    const double classical = tips[l * stride];
    for (std::size_t a = 0; a < config.alpha.size(); ++a) {
      rows.push_back({config.alpha[a], config.ell[l], tips[l * stride + 1 + a] / classical});
    }
  }
  write_sweep_csv(csv, rows);
  return rows;
}

std::vector<ConvergenceRow> run_convergence(const RunConfig& config, std::ostream& csv) {
  const double alpha = single("alpha", config.alpha);
  const double ell = single("ell", config.ell);
  const auto tips = parallel_map(config.m.size(), [&](std::size_t k) {
    return tip_deflection(solve_beam(config.beam, FractionalParams(alpha, ell, config.m[k]),
                                     config.solver));
  });
  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k < tips.size(); ++k) {
    ConvergenceRow r{config.m[k], ell / static_cast<double>(config.m[k]), tips[k], std::nullopt};
    if (k >= 2) r.order = richardson_order(tips[k - 2], tips[k - 1], tips[k]);
    rows.push_back(r);
  }
  write_convergence_csv(csv, rows);
  return rows;
}

FitResult run_identify(const RunConfig& config, std::ostream& csv, std::ostream& summary) {
  const auto groups = load_experiment_csv(config.data);
  PredictionOptions options;
  options.rule = config.rule;
  options.solver = config.solver;
  const FitResult result = fit(groups, config.alpha, config.ell, options);
  write_fit_report_csv(csv, groups, result);
  summary << "ell_um = " << format_number(result.ell / 1e-6) << '\n'
          << "E_GPa = " << format_number(result.modulus / 1e9) << '\n'
          << "objective_Pa2 = " << format_number(result.objective) << '\n';
  for (std::size_t g = 0; g < groups.size(); ++g) {
    summary << "group " << g << ": W_um = " << format_number(groups[g].width / 1e-6)
            << ", T_um = " << format_number(groups[g].thickness / 1e-6)
            << ", alpha = " << format_number(result.alpha_per_group[g]) << '\n';
  }
  return result;
}

}  // namespace febb
