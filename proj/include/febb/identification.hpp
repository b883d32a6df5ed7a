#pragma once

// Parameter identification from size-dependent bending stiffness: predicts the
// apparent (non-local) modulus of a cantilever from the fractional model and
// fits alpha per cross-section, plus a shared length scale and modulus, by
// least squares on a grid.

#include <optional>
#include <span>
#include <vector>

#include "febb/beam.hpp"

namespace febb {

/// One measured micro-beam, SI units.
struct ExperimentRecord {
  double length = 0.0;
  double width = 0.0;
  double thickness = 0.0;
  double enl = 0.0;  // apparent modulus 4 L^3 P / (W T^3 w), Pa
};

/// Records sharing one cross-section, differing in length.
struct SeriesGroup {
  double width = 0.0;
  double thickness = 0.0;
  std::vector<ExperimentRecord> records;

  void validate() const;
};

/// How to pick m for an (L, ell) pair: the smallest m in [m_min, m_max] that
/// makes L / (ell / m) an integer and leaves room for the stencil.
struct AdmissibilityRule {
  Index m_min = 10;
  Index m_max = 2000;
};

std::optional<Index> admissible_half_width(double length, double ell,
                                           const AdmissibilityRule& rule = {});

/// Throws InvalidInput when no admissible m exists.
FractionalParams admissible_params(double length, double alpha, double ell,
                                   const AdmissibilityRule& rule = {});

struct PredictionOptions {
  AdmissibilityRule rule;
  SolverOptions solver;
  double probe_load = 1.0;  // cancels; kept to check exactly that
};

/// Apparent modulus 4 L^3 / (W T^3) * P / |w(L, alpha)| of a beam made of
/// material (alpha, ell, modulus).
double predict_enl(double length, double width, double thickness, double alpha, double ell,
                   double modulus, const PredictionOptions& options = {});

/// argmin_E sum (E r_i - y_i)^2 = sum r_i y_i / sum r_i^2
double optimal_modulus(std::span<const double> ratios, std::span<const double> measured);

/// Sum of squared differences between predicted and measured E_NL, Pa^2.
double objective(std::span<const SeriesGroup> groups, std::span<const double> alpha_per_group,
                 double ell, double modulus, const PredictionOptions& options = {});

struct FitResult {
  std::vector<double> alpha_per_group;
  double ell = 0.0;
  double modulus = 0.0;
  double objective = 0.0;
  std::vector<std::vector<double>> predicted;  // E_NL per group and record at the optimum
};

/// Exhaustive search over ell_grid and, for every ell, over all assignments of
/// alpha_grid values to groups; the shared modulus is solved in closed form.
/// Ties go to the smallest ell, then to the lexicographically smallest alphas.
/// An ell is skipped when any record has no admissible grid for it.
FitResult fit(std::span<const SeriesGroup> groups, std::span<const double> alpha_grid,
              std::span<const double> ell_grid, const PredictionOptions& options = {});

/// 0.05, 0.10, ..., 1.00
std::vector<double> default_alpha_grid();
/// 10, 20, ..., 200 micrometres, in metres
std::vector<double> default_ell_grid();

inline double micrometres(double v) { return v * 1e-6; }
inline double gigapascals(double v) { return v * 1e9; }

}  // namespace febb
