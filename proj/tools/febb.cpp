// febb: fractional Euler-Bernoulli cantilever solver and identification CLI.
//
//   febb solve       --alpha 0.8 --ell 0.06 --m 60 --out profile.csv
//   febb sweep       --preset case-ii --out sweep.csv
//   febb convergence --alpha 0.5 --ell 0.06 --m 15 --levels 4
//   febb identify    --data experiments.csv --out fit.csv
//
// Exit codes: 0 success, 2 configuration or data error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "febb/errors.hpp"
#include "febb/workflows.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

const char* const kFlags[][2] = {
    {"alpha", "fractional order (comma list for sweep/identify grids)"},
    {"ell", "length scale in m (comma list for sweep/identify grids)"},
    {"m", "stencil half-width (comma list of levels for convergence)"},
    {"L", "beam length, m"},
    {"W", "beam width, m"},
    {"T", "beam thickness, m"},
    {"E", "elastic modulus, Pa"},
    {"P", "tip load, N"},
    {"beta-mode", "corrected | paper"},
    {"boundary", "cantilever | literal"},
    {"dx", "sweep grid step, m"},
    {"levels", "convergence refinement levels"},
    {"preset", "sweep length scales: case-i | case-ii | both"},
    {"m-min", "identify: smallest admissible m"},
    {"m-max", "identify: largest admissible m"},
    {"config", "key=value configuration file"},
    {"data", "experiment CSV (L_um,W_um,T_um,E_nl_GPa)"},
    {"out", "output CSV (default: stdout)"},
};

int run(febb::Mode mode, const std::map<std::string, std::string>& flags) {
  febb::Settings settings;
  if (const auto it = flags.find("config"); it != flags.end()) {
    settings = febb::read_config_file(it->second);
  }
  settings = febb::merge_settings(std::move(settings), flags);
  settings.erase("config");
  const auto config = febb::RunConfig::from_settings(mode, settings);

  std::ofstream file;
  if (!config.out.empty()) {
    file.open(config.out, std::ios::binary);
    if (!file) throw febb::ConfigError("cannot open output file " + config.out.string());
  }
  std::ostream& out = config.out.empty() ? std::cout : file;
  switch (mode) {
    case febb::Mode::Solve:
      febb::run_solve(config, out);
      break;
    case febb::Mode::Sweep:
      febb::run_sweep(config, out);
      break;
    case febb::Mode::Convergence:
      febb::run_convergence(config, out);
      break;
    case febb::Mode::Identify:
      febb::run_identify(config, out, config.out.empty() ? std::cerr : std::cout);
      break;
  }
  out.flush();
  if (!out) throw febb::ConfigError("failed writing output");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Euler-Bernoulli cantilever solver"};
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> values;
  for (const char* name : {"solve", "sweep", "convergence", "identify"}) {
    auto* sub = app.add_subcommand(name);
    auto& store = values[name];
    for (const auto& flag : kFlags) {
      const std::string key = flag[0];
      sub->add_option_function<std::string>(
          "--" + key, [&store, key](const std::string& v) { store[key] = v; }, flag[1]);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run(*febb::parse_mode(name), values[name]);
  } catch (const febb::NumericalFailure& e) {
    std::cerr << "febb: numerical failure: " << e.what() << '\n';
    return kNumericExit;
  } catch (const febb::ConfigError& e) {
    std::cerr << "febb: " << e.what() << '\n';
    return kConfigExit;
  } catch (const febb::InvalidInput& e) {
    std::cerr << "febb: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "febb: " << e.what() << '\n';
    return kNumericExit;
  }
}
