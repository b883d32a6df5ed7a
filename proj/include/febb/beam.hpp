#pragma once

// Fractional Euler-Bernoulli cantilever: uniform grid with fictitious nodes,
// assembly of the Riesz-Caputo bending equation, banded LU solve and
// post-processing of curvature, moment, shear and stress.

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "febb/banded_lu.hpp"
#include "febb/fractional_kernel.hpp"

namespace febb {

using Eigen::VectorXd;

/// Rectangular cantilever in SI units, clamped at x = 0 and loaded by P at x = L.
struct BeamSpec {
  double length = 1.0;
  double width = 0.1;
  double thickness = 0.1;
  double modulus = 1.0;
  double load = 1.0;

  void validate() const;
  double second_moment() const;
};

/// W T^3 / 12
double second_moment(double width, double thickness);

/// Fractional order, length scale and the stencil half-width m; the grid step
/// is ell / m.
class FractionalParams {
 public:
  FractionalParams(double alpha, double ell, Index m);

  double alpha() const { return alpha_; }
  double ell() const { return ell_; }
  Index m() const { return m_; }
  double dx() const { return ell_ / static_cast<double>(m_); }

  FractionalParams with_alpha(double alpha) const { return {alpha, ell_, m_}; }

 private:
  double alpha_;
  double ell_;
  Index m_;
};

struct Grid {
  Index intervals = 0;  // N: nodes are x_0 .. x_N
  double dx = 0.0;
  Index halo = 0;  // fictitious nodes used on each side by the stencils

  Index nodes() const { return intervals + 1; }
  double x(Index i) const { return static_cast<double>(i) * dx; }
};

/// Tolerance on L / dx being an integer, relative.
inline constexpr double kGridTolerance = 1e-9;

Grid build_grid(double length, const FractionalParams& params);

/// Scaling of the right-hand side. `Corrected` includes the Riesz prefactor
/// Gamma(2-alpha)/2 so alpha = 1 reproduces the classical cantilever; `Paper`
/// uses 1/Gamma(3-alpha) in its place, which scales the deflection by
/// Gamma(2-alpha)/2 (one half at alpha = 1).
enum class BetaMode { Corrected, Paper };

/// Treatment of the ends of the beam.
///
/// `Cantilever`: w_0 = 0, clamp slope by the second-order one-sided difference
/// -3 w_0 + 4 w_1 - w_2 = 0, bending equation at nodes 1..N-1; nodes left of
/// the clamp hold w_0 and nodes right of the tip continue the last segment
/// linearly (no curvature beyond the free end).
///
/// `Literal`: w_0 = w_1 = 0, bending equation at nodes 2..N and every
/// fictitious node held at the nearest end value. At alpha = 1 the tip row
/// reduces to w_{N-1} = w_N, i.e. a zero tip slope; kept for reproduction.
enum class BoundaryScheme { Cantilever, Literal };

struct SolverOptions {
  BetaMode beta_mode = BetaMode::Corrected;
  BoundaryScheme boundary = BoundaryScheme::Cantilever;
};

/// Deflection at node j of the extended grid as a combination of physical
/// nodes, following the fictitious-node rule of `scheme`.
std::vector<std::pair<Index, double>> fictitious_rule(Index j, Index intervals,
                                                      BoundaryScheme scheme);

double beta(const BeamSpec& spec, const FractionalParams& params, BetaMode mode);

/// M_2(x_i) = P (L - x_i)
VectorXd moment_profile(const BeamSpec& spec, const Grid& grid);

struct LinearSystem {
  BandedMatrix<double> matrix;
  VectorXd rhs;
  Grid grid;
  BoundaryScheme boundary = BoundaryScheme::Cantilever;

  /// Matrix row holding the bending equation of node i.
  Index equation_row(Index node) const;
  /// First and last node carrying the bending equation.
  std::pair<Index, Index> equation_nodes() const;
};

LinearSystem assemble(const BeamSpec& spec, const FractionalParams& params, const Grid& grid,
                      const SolverOptions& options = {});

struct DeflectionField {
  VectorXd w;
  Grid grid;
  BoundaryScheme boundary = BoundaryScheme::Cantilever;
  double relative_residual = 0.0;  // ||A w - b||_inf / ||b||_inf (0 when b = 0)
};

DeflectionField solve(const LinearSystem& system);

/// Assemble and solve in one step.
DeflectionField solve_beam(const BeamSpec& spec, const FractionalParams& params,
                           const SolverOptions& options = {});

/// Signed w_N.
double tip_deflection(const DeflectionField& field);

/// w(L, alpha) / w(L, 1) on the same grid.
double normalized_tip(const BeamSpec& spec, const FractionalParams& params,
                      const SolverOptions& options = {});

struct Profiles {
  VectorXd x;
  VectorXd kappa;       // fractional curvature, -RC D^alpha (dw/dx)
  VectorXd moment;      // M_2 = ell^(alpha-1) E I kappa
  VectorXd shear;       // F_3 = dM_2/dx
  VectorXd stress_top;  // sigma_11 at z = +T/2
  VectorXd stress_bottom;
};

Profiles postprocess(const DeflectionField& field, const BeamSpec& spec,
                     const FractionalParams& params);

}  // namespace febb
