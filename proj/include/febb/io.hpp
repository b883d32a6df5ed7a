#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "febb/beam.hpp"
#include "febb/identification.hpp"

namespace febb {

inline constexpr std::string_view kExperimentHeader = "L_um,W_um,T_um,E_nl_GPa";
inline constexpr std::string_view kProfileHeader = "x_m,w_m,kappa,M2_Nm,F3_N,sigma_top_Pa";
inline constexpr std::string_view kSweepHeader = "alpha,ell_m,ratio";
inline constexpr std::string_view kConvergenceHeader = "m,dx_m,tip_m,order";
inline constexpr std::string_view kFitHeader =
    "group,W_um,T_um,L_um,alpha,ell_um,E_GPa,E_nl_measured_GPa,E_nl_predicted_GPa,residual_GPa";

/// 17 significant digits, scientific notation.
std::string format_number(double v);

/// Parses the experiment table (micrometres, GPa), converts to SI and groups
/// records by cross-section. Groups are ordered by thickness, then width;
/// records within a group by length.
std::vector<SeriesGroup> parse_experiment_csv(std::istream& in);
std::vector<SeriesGroup> load_experiment_csv(const std::filesystem::path& path);

void write_experiment_csv(std::ostream& out, std::span<const SeriesGroup> groups);

void write_profile_csv(std::ostream& out, const DeflectionField& field, const Profiles& profiles);

struct SweepRow {
  double alpha = 0.0;
  double ell = 0.0;
  double ratio = 0.0;
};

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

struct ConvergenceRow {
  Index m = 0;
  double dx = 0.0;
  double tip = 0.0;
  std::optional<double> order;  // from this level and the two before it
};

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

void write_fit_report_csv(std::ostream& out, std::span<const SeriesGroup> groups,
                          const FitResult& result);

}  // namespace febb
