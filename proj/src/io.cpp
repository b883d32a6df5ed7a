#include "febb/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace febb {

namespace {

constexpr double kGroupTolerance = 1e-9;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t column) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v) || v <= 0.0) {
    throw ConfigError("row " + std::to_string(row) + ", column " + std::to_string(column + 1) +
                      ": expected a positive number, got '" + std::string(cell) + "'");
  }
  return v;
}

bool close(double a, double b) {
  return std::abs(a - b) <= kGroupTolerance * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<SeriesGroup> parse_experiment_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kExperimentHeader) {
    throw ConfigError("row 0: header must be exactly '" + std::string(kExperimentHeader) + "'");
  }
  std::vector<SeriesGroup> groups;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 4) {
      throw ConfigError("row " + std::to_string(row) + ": expected 4 columns, got " +
                        std::to_string(cells.size()));
    }
    ExperimentRecord r;
    r.length = micrometres(parse_cell(cells[0], row, 0));
    r.width = micrometres(parse_cell(cells[1], row, 1));
    r.thickness = micrometres(parse_cell(cells[2], row, 2));
    r.enl = gigapascals(parse_cell(cells[3], row, 3));
    auto it = std::find_if(groups.begin(), groups.end(), [&](const SeriesGroup& g) {
      return close(g.width, r.width) && close(g.thickness, r.thickness);
    });
    if (it == groups.end()) {
      groups.push_back(SeriesGroup{r.width, r.thickness, {}});
      it = groups.end() - 1;
    }
    it->records.push_back(r);
  }
  if (groups.empty()) throw ConfigError("experiment file has no data rows");
  std::stable_sort(groups.begin(), groups.end(), [](const SeriesGroup& a, const SeriesGroup& b) {
    if (a.thickness != b.thickness) return a.thickness < b.thickness;
    return a.width < b.width;
  });
  for (auto& g : groups) {
    if (g.records.size() < 2) {
      throw ConfigError("cross-section W = " + format_number(g.width / 1e-6) +
                        " um, T = " + format_number(g.thickness / 1e-6) +
                        " um has fewer than two records");
    }
    std::stable_sort(g.records.begin(), g.records.end(),
                     [](const ExperimentRecord& a, const ExperimentRecord& b) {
                       return a.length < b.length;
                     });
  }
  return groups;
}

std::vector<SeriesGroup> load_experiment_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment file " + path.string());
  return parse_experiment_csv(in);
}

void write_experiment_csv(std::ostream& out, std::span<const SeriesGroup> groups) {
  out << kExperimentHeader << '\n';
  for (const auto& g : groups) {
    for (const auto& r : g.records) {
      out << format_number(r.length / 1e-6) << ',' << format_number(r.width / 1e-6) << ','
          << format_number(r.thickness / 1e-6) << ',' << format_number(r.enl / 1e9) << '\n';
    }
  }
}

void write_profile_csv(std::ostream& out, const DeflectionField& field, const Profiles& p) {
  out << kProfileHeader << '\n';
  for (Index i = 0; i < field.w.size(); ++i) {
    out << format_number(p.x(i)) << ',' << format_number(field.w(i)) << ','
        << format_number(p.kappa(i)) << ',' << format_number(p.moment(i)) << ','
        << format_number(p.shear(i)) << ',' << format_number(p.stress_top(i)) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format_number(r.alpha) << ',' << format_number(r.ell) << ','
        << format_number(r.ratio) << '\n';
  }
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  out << kConvergenceHeader << '\n';
  for (const auto& r : rows) {
    out << r.m << ',' << format_number(r.dx) << ',' << format_number(r.tip) << ','
        << (r.order ? format_number(*r.order) : std::string()) << '\n';
  }
}

void write_fit_report_csv(std::ostream& out, std::span<const SeriesGroup> groups,
                          const FitResult& result) {
  out << kFitHeader << '\n';
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& records = groups[g].records;
    for (std::size_t k = 0; k < records.size(); ++k) {
      const auto& r = records[k];
      const double predicted = result.predicted.at(g).at(k);
      out << g << ',' << format_number(r.width / 1e-6) << ','
          << format_number(r.thickness / 1e-6) << ',' << format_number(r.length / 1e-6) << ','
          << format_number(result.alpha_per_group.at(g)) << ','
          << format_number(result.ell / 1e-6) << ',' << format_number(result.modulus / 1e9)
          << ',' << format_number(r.enl / 1e9) << ',' << format_number(predicted / 1e9) << ','
          << format_number((predicted - r.enl) / 1e9) << '\n';
    }
  }
}

}  // namespace febb
