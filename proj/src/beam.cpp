#include "febb/beam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace febb {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Combined left + right stencil weights over offsets -m-1..m+1.
struct RieszWeights {
  VectorXd weights;  // weights(o + m + 1)
  Index m = 0;
  Index reach = 0;

  double at(Index offset) const { return weights(offset + m + 1); }
};

RieszWeights riesz_weights(const FractionalParams& params) {
  const auto left = left_caputo_stencil(params.alpha(), params.m());
  const auto right = right_caputo_stencil(params.alpha(), params.m());
  RieszWeights rw;
  rw.m = params.m();
  rw.weights = VectorXd::Zero(2 * rw.m + 3);
  for (Index o = -rw.m - 1; o <= rw.m + 1; ++o) {
    rw.weights(o + rw.m + 1) = left.at(o) + right.at(o);
  }
  rw.reach = std::max(left.reach(), right.reach());
  return rw;
}

}  // namespace

void BeamSpec::validate() const {
  if (!positive_finite(length) || !positive_finite(width) || !positive_finite(thickness) ||
      !positive_finite(modulus)) {
    throw InvalidInput("beam length, width, thickness and modulus must be positive");
  }
  if (!std::isfinite(load)) throw InvalidInput("tip load must be finite");
}

double BeamSpec::second_moment() const { return febb::second_moment(width, thickness); }

double second_moment(double width, double thickness) {
  if (!positive_finite(width) || !positive_finite(thickness)) {
    throw InvalidInput("cross-section dimensions must be positive");
  }
  return width * thickness * thickness * thickness / 12.0;
}

FractionalParams::FractionalParams(double alpha, double ell, Index m)
    : alpha_(alpha), ell_(ell), m_(m) {
  check_order(alpha);
  check_half_width(m);
  if (!positive_finite(ell)) throw InvalidInput("length scale must be positive");
}

Grid build_grid(double length, const FractionalParams& params) {
  if (!positive_finite(length)) throw InvalidInput("beam length must be positive");
  const double dx = params.dx();
  const double ratio = length / dx;
  const auto n = static_cast<Index>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(n)) > kGridTolerance * ratio) {
    throw InvalidInput("L / dx = " + std::to_string(ratio) + " is not an integer");
  }
  const Index m = params.m();
  if (n < 2 * m + 2) {
    throw InvalidInput("grid too coarse for the stencil: N = " + std::to_string(n) +
                       " < 2m + 2 = " + std::to_string(2 * m + 2));
  }
  return Grid{n, dx, m + 1};
}

std::vector<std::pair<Index, double>> fictitious_rule(Index j, Index intervals,
                                                      BoundaryScheme scheme) {
  if (j < 0) return {{0, 1.0}};
  if (j <= intervals) return {{j, 1.0}};
  if (scheme == BoundaryScheme::Literal) return {{intervals, 1.0}};
  const auto beyond = static_cast<double>(j - intervals);
  return {{intervals, 1.0 + beyond}, {intervals - 1, -beyond}};
}

double beta(const BeamSpec& spec, const FractionalParams& params, BetaMode mode) {
  const double alpha = params.alpha();
  const double stiffness =
      std::pow(params.ell(), alpha - 1.0) * spec.modulus * spec.second_moment();
  const double h = std::pow(params.dx(), 1.0 + alpha);
  if (mode == BetaMode::Paper) return -stiffness / (h * std::tgamma(3.0 - alpha));
  return -stiffness / (2.0 * (2.0 - alpha) * h);
}

VectorXd moment_profile(const BeamSpec& spec, const Grid& grid) {
  VectorXd m(grid.nodes());
  for (Index i = 0; i < grid.nodes(); ++i) m(i) = spec.load * (spec.length - grid.x(i));
  return m;
}

Index LinearSystem::equation_row(Index node) const {
  return boundary == BoundaryScheme::Cantilever ? node + 1 : node;
}

std::pair<Index, Index> LinearSystem::equation_nodes() const {
  if (boundary == BoundaryScheme::Cantilever) return {1, grid.intervals - 1};
  return {2, grid.intervals};
}

LinearSystem assemble(const BeamSpec& spec, const FractionalParams& params, const Grid& grid,
                      const SolverOptions& options) {
  spec.validate();
  if (std::abs(grid.dx - params.dx()) > kGridTolerance * params.dx() ||
      std::abs(static_cast<double>(grid.intervals) * grid.dx - spec.length) >
          kGridTolerance * spec.length) {
    throw InvalidInput("grid does not match the beam length and fractional parameters");
  }
  const RieszWeights rw = riesz_weights(params);
  const Index r = rw.reach;
  const Index n = grid.intervals;
  const bool cantilever = options.boundary == BoundaryScheme::Cantilever;

  LinearSystem sys;
  sys.grid = grid;
  sys.boundary = options.boundary;
  // Equation rows sit one below their node in the cantilever scheme.
  sys.matrix = cantilever ? BandedMatrix<double>(n + 1, r + 1, std::max<Index>(r - 1, 1))
                          : BandedMatrix<double>(n + 1, r, r);
  sys.rhs = VectorXd::Zero(n + 1);

  sys.matrix.coeffRef(0, 0) = 1.0;
  if (cantilever) {
    sys.matrix.coeffRef(1, 0) = -3.0;
    sys.matrix.coeffRef(1, 1) = 4.0;
    sys.matrix.coeffRef(1, 2) = -1.0;
  } else {
    sys.matrix.coeffRef(1, 1) = 1.0;
  }

  const double b = beta(spec, params, options.beta_mode);
  const auto [first, last] = sys.equation_nodes();
  for (Index i = first; i <= last; ++i) {
    const Index row = sys.equation_row(i);
    for (Index o = -r; o <= r; ++o) {
      const double weight = rw.at(o);
      if (weight == 0.0) continue;
      for (const auto& [col, coef] : fictitious_rule(i + o, n, options.boundary)) {
        sys.matrix.coeffRef(row, col) += weight * coef;
      }
    }
    sys.rhs(row) = spec.load * (spec.length - grid.x(i)) / b;
  }
  return sys;
}

DeflectionField solve(const LinearSystem& system) {
  const BandedLU<double> lu(system.matrix);
  DeflectionField field;
  field.grid = system.grid;
  field.boundary = system.boundary;
  field.w = lu.solve(system.rhs);
  // Dirichlet rows hold exactly; pivoting may leave round-off there otherwise.
  field.w(0) = 0.0;
  if (system.boundary == BoundaryScheme::Literal) field.w(1) = 0.0;

  const double rnorm = residual_norm(system.matrix, field.w, system.rhs);
  const double bnorm = system.rhs.lpNorm<Eigen::Infinity>();
  field.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!field.w.allFinite() || !std::isfinite(field.relative_residual) ||
      field.relative_residual > 1e-6) {
    throw NumericalFailure("solution failed the residual check (relative residual " +
                           std::to_string(field.relative_residual) + ")");
  }
  return field;
}

DeflectionField solve_beam(const BeamSpec& spec, const FractionalParams& params,
                           const SolverOptions& options) {
  const Grid grid = build_grid(spec.length, params);
  return solve(assemble(spec, params, grid, options));
}

double tip_deflection(const DeflectionField& field) { return field.w(field.grid.intervals); }

double normalized_tip(const BeamSpec& spec, const FractionalParams& params,
                      const SolverOptions& options) {
  const double fractional = tip_deflection(solve_beam(spec, params, options));
  const double classical = tip_deflection(solve_beam(spec, params.with_alpha(1.0), options));
  if (classical == 0.0) throw InvalidInput("normalization needs a non-zero load");
  return fractional / classical;
}

Profiles postprocess(const DeflectionField& field, const BeamSpec& spec,
                     const FractionalParams& params) {
  const Grid& grid = field.grid;
  const Index n = grid.intervals;
  const Index m = params.m();
  const auto left = left_caputo_stencil(params.alpha(), m);
  const auto right = right_caputo_stencil(params.alpha(), m);
  const double scale = std::pow(params.ell(), params.alpha() - 1.0) * spec.modulus;
  const double inertia = spec.second_moment();

  Profiles p;
  p.x.resize(n + 1);
  p.kappa.resize(n + 1);
  VectorXd samples(2 * m + 3);
  for (Index i = 0; i <= n; ++i) {
    p.x(i) = grid.x(i);
    for (Index o = -m - 1; o <= m + 1; ++o) {
      double v = 0.0;
      for (const auto& [col, coef] : fictitious_rule(i + o, n, field.boundary)) {
        v += coef * field.w(col);
      }
      samples(o + m + 1) = v;
    }
    p.kappa(i) = -rc_slope_derivative(samples, left, right, grid.dx);
  }
  p.moment = scale * inertia * p.kappa;
  p.shear.resize(n + 1);
  p.shear(0) = (p.moment(1) - p.moment(0)) / grid.dx;
  p.shear(n) = (p.moment(n) - p.moment(n - 1)) / grid.dx;
  for (Index i = 1; i < n; ++i) p.shear(i) = (p.moment(i + 1) - p.moment(i - 1)) / (2.0 * grid.dx);
  p.stress_top = (0.5 * spec.thickness * scale) * p.kappa;
  p.stress_bottom = -p.stress_top;
  return p;
}

}  // namespace febb
