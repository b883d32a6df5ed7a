#include "febb/identification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "febb/parallel.hpp"

namespace febb {

namespace {

constexpr std::size_t kMaxAlphaCombinations = 2'000'000;

bool same_within(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

std::vector<double> sorted_grid(std::span<const double> grid) {
  std::vector<double> g(grid.begin(), grid.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// Unit-modulus predictions for every (group, alpha, record) at one ell.
using PredictionTable = std::vector<std::vector<std::vector<double>>>;

}  // namespace

void SeriesGroup::validate() const {
  if (records.size() < 2) {
    throw InvalidInput("a series group needs at least two records");
  }
  for (const auto& r : records) {
    for (double v : {r.length, r.width, r.thickness, r.enl}) {
      if (!std::isfinite(v) || v <= 0.0) {
        throw InvalidInput("experiment records must be positive and finite");
      }
    }
    if (!same_within(r.width, width, 1e-9) || !same_within(r.thickness, thickness, 1e-9)) {
      throw InvalidInput("records in a series group must share width and thickness");
    }
  }
}

std::optional<Index> admissible_half_width(double length, double ell,
                                           const AdmissibilityRule& rule) {
  if (!(length > 0.0) || !(ell > 0.0)) return std::nullopt;
  for (Index m = std::max<Index>(rule.m_min, 2); m <= rule.m_max; ++m) {
    const double ratio = length * static_cast<double>(m) / ell;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > kGridTolerance * ratio) continue;
    if (n < static_cast<double>(2 * m + 2)) continue;
    // Confirm with the exact step the grid builder will use.
    const double dx = ell / static_cast<double>(m);
    const double check = length / dx;
    if (std::abs(check - std::round(check)) <= kGridTolerance * check) return m;
  }
  return std::nullopt;
}

FractionalParams admissible_params(double length, double alpha, double ell,
                                   const AdmissibilityRule& rule) {
  const auto m = admissible_half_width(length, ell, rule);
  if (!m) {
    throw InvalidInput("no admissible grid for L = " + std::to_string(length) +
                       " m and ell = " + std::to_string(ell) + " m");
  }
  return {alpha, ell, *m};
}

double predict_enl(double length, double width, double thickness, double alpha, double ell,
                   double modulus, const PredictionOptions& options) {
  const BeamSpec spec{length, width, thickness, modulus, options.probe_load};
  spec.validate();
  if (options.probe_load == 0.0) throw InvalidInput("probe load must be non-zero");
  const FractionalParams params = admissible_params(length, alpha, ell, options.rule);
  const double w = tip_deflection(solve_beam(spec, params, options.solver));
  const double l3 = length * length * length;
  const double t3 = thickness * thickness * thickness;
  return 4.0 * l3 / (width * t3) * std::abs(options.probe_load) / std::abs(w);
}

double optimal_modulus(std::span<const double> ratios, std::span<const double> measured) {
  if (ratios.empty() || ratios.size() != measured.size()) {
    throw InvalidInput("optimal modulus needs equally sized, non-empty inputs");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0)) throw InvalidInput("stiffness ratios must be positive");
    num += ratios[i] * measured[i];
    den += ratios[i] * ratios[i];
  }
  return num / den;
}

double objective(std::span<const SeriesGroup> groups, std::span<const double> alpha_per_group,
                 double ell, double modulus, const PredictionOptions& options) {
  if (groups.size() != alpha_per_group.size()) {
    throw InvalidInput("need one alpha per group");
  }
  double total = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& r : groups[g].records) {
      const double d = predict_enl(r.length, r.width, r.thickness, alpha_per_group[g], ell,
                                   modulus, options) -
                       r.enl;
      total += d * d;
    }
  }
  return total;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 20; ++k) g.push_back(k / 20.0);
  return g;
}

std::vector<double> default_ell_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 20; ++k) g.push_back(micrometres(10.0 * k));
  return g;
}

FitResult fit(std::span<const SeriesGroup> groups, std::span<const double> alpha_grid,
              std::span<const double> ell_grid, const PredictionOptions& options) {
  if (groups.empty()) throw InvalidInput("no experiment groups to fit");
  for (const auto& g : groups) g.validate();
  const std::vector<double> alphas = sorted_grid(alpha_grid);
  const std::vector<double> ells = sorted_grid(ell_grid);
  if (alphas.empty() || ells.empty()) throw InvalidInput("search grids must be non-empty");
  for (double a : alphas) check_order(a);
  for (double l : ells) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("length scales must be positive");
  }

  const std::size_t n_groups = groups.size();
  double combos = 1.0;
  for (std::size_t g = 0; g < n_groups; ++g) combos *= static_cast<double>(alphas.size());
  if (combos > static_cast<double>(kMaxAlphaCombinations)) {
    throw InvalidInput("alpha grid too large for an exhaustive search over " +
                       std::to_string(n_groups) + " groups");
  }

  const auto tables = parallel_map(ells.size(), [&](std::size_t li) {
    std::optional<PredictionTable> table;
    for (const auto& g : groups) {
      for (const auto& r : g.records) {
        if (!admissible_half_width(r.length, ells[li], options.rule)) return table;
      }
    }
    table.emplace(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
      auto& per_alpha = (*table)[g];
      per_alpha.resize(alphas.size());
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        for (const auto& r : groups[g].records) {
          per_alpha[a].push_back(
              predict_enl(r.length, r.width, r.thickness, alphas[a], ells[li], 1.0, options));
        }
      }
    }
    return table;
  });

  FitResult best;
  best.objective = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<double> ratios;
  std::vector<double> measured;
  for (const auto& g : groups) {
    for (const auto& r : g.records) measured.push_back(r.enl);
  }

  for (std::size_t li = 0; li < ells.size(); ++li) {
    if (!tables[li]) continue;
    const PredictionTable& table = *tables[li];
    std::vector<std::size_t> pick(n_groups, 0);
    while (true) {
      ratios.clear();
      for (std::size_t g = 0; g < n_groups; ++g) {
        const auto& r = table[g][pick[g]];
        ratios.insert(ratios.end(), r.begin(), r.end());
      }
      const double e = optimal_modulus(ratios, measured);
      double obj = 0.0;
      for (std::size_t k = 0; k < ratios.size(); ++k) {
        const double d = e * ratios[k] - measured[k];
        obj += d * d;
      }
      // Strict improvement only: earlier (smaller ell, smaller alphas) wins ties.
      if (obj < best.objective && e > 0.0) {
        found = true;
        best.objective = obj;
        best.ell = ells[li];
        best.modulus = e;
        best.alpha_per_group.assign(n_groups, 0.0);
        best.predicted.assign(n_groups, {});
        for (std::size_t g = 0; g < n_groups; ++g) {
          best.alpha_per_group[g] = alphas[pick[g]];
          for (double r : table[g][pick[g]]) best.predicted[g].push_back(e * r);
        }
      }
      // Odometer, last group fastest.
      std::size_t pos = n_groups;
      while (pos > 0) {
        --pos;
        if (++pick[pos] < alphas.size()) break;
        pick[pos] = 0;
        if (pos == 0) {
          pos = n_groups + 1;
          break;
        }
      }
      if (pos == n_groups + 1) break;
    }
  }
  if (!found) throw InvalidInput("no admissible (alpha, ell) combination for the data set");
  return best;
}

}  // namespace febb
