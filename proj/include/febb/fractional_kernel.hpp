#pragma once

// Discrete Caputo and Riesz-Caputo derivatives of a slope field on a uniform
// grid. The integer-order part is the three-point central second difference;
// the fractional integral is the fractional trapezoidal rule over m steps.

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "febb/errors.hpp"

namespace febb {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Side { Left, Right };

namespace detail {

// x^p with 0^p := 0, the continuous extension for p >= 0.
template <typename Scalar>
Scalar pow0(Scalar x, Scalar p) {
  return x == Scalar(0) ? Scalar(0) : std::pow(x, p);
}

}  // namespace detail

template <typename Scalar>
void check_order(Scalar alpha) {
  if (!(alpha > Scalar(0) && alpha <= Scalar(1))) {
    throw InvalidInput("fractional order must lie in (0, 1], got " +
                       std::to_string(static_cast<double>(alpha)));
  }
}

inline void check_half_width(Index m) {
  if (m < 2) {
    throw InvalidInput("stencil half-width m must be at least 2, got " +
                       std::to_string(m));
  }
}

/// Fractional trapezoidal weights c[0..m] for the Caputo integral of order
/// alpha spanning m grid steps. c[k] multiplies the integrand sampled k steps
/// from the evaluation node toward the terminal; the common factor
/// dx^(1-alpha) / Gamma(3-alpha) is left out.
template <typename Scalar>
VectorX<Scalar> trapezoid_coeffs(Scalar alpha, Index m) {
  check_order(alpha);
  check_half_width(m);
  using detail::pow0;
  const Scalar p = Scalar(2) - alpha;
  VectorX<Scalar> c(m + 1);
  c(0) = Scalar(1);
  for (Index k = 1; k < m; ++k) {
    const Scalar kk = static_cast<Scalar>(k);
    c(k) = pow0(kk - 1, p) - Scalar(2) * std::pow(kk, p) + std::pow(kk + 1, p);
  }
  const Scalar mm = static_cast<Scalar>(m);
  c(m) = pow0(mm - 1, p) - (mm + alpha - Scalar(2)) * std::pow(mm, Scalar(1) - alpha);
  return c;
}

/// Weights of a discrete one-sided Caputo derivative of dw/dx, indexed by node
/// offset from the evaluation node. Left stencils cover offsets -m-1..+1, right
/// stencils -1..m+1. The factor dx^(-1-alpha) / Gamma(3-alpha) is left out, and
/// the right stencil already carries the (-1)^n sign of the Riesz combination,
/// so left and right weights simply add.
template <typename Scalar>
struct CaputoStencil {
  Side side = Side::Left;
  Scalar alpha = Scalar(1);
  Index m = 2;
  VectorX<Scalar> weights;  // weights(0) sits at first_offset()

  Index first_offset() const { return side == Side::Left ? -m - 1 : Index(-1); }
  Index last_offset() const { return side == Side::Left ? Index(1) : m + 1; }

  Scalar at(Index offset) const {
    if (offset < first_offset() || offset > last_offset()) return Scalar(0);
    return weights(offset - first_offset());
  }

  /// Largest |offset| carrying a non-zero weight.
  Index reach() const {
    Index r = 0;
    for (Index o = first_offset(); o <= last_offset(); ++o) {
      if (at(o) != Scalar(0)) r = std::max<Index>(r, o < 0 ? -o : o);
    }
    return r;
  }
};

/// Trapezoid weights composed with the central second difference [1, -2, 1]:
/// position k (k steps toward the terminal) feeds offsets -k-1, -k, -k+1.
template <typename Scalar>
CaputoStencil<Scalar> left_caputo_stencil(Scalar alpha, Index m) {
  const VectorX<Scalar> c = trapezoid_coeffs(alpha, m);
  CaputoStencil<Scalar> s{Side::Left, alpha, m, VectorX<Scalar>::Zero(m + 3)};
  const Index origin = -s.first_offset();
  for (Index k = 0; k <= m; ++k) {
    s.weights(origin - k - 1) += c(k);
    s.weights(origin - k) -= Scalar(2) * c(k);
    s.weights(origin - k + 1) += c(k);
  }
  return s;
}

/// Mirror image of the left stencil: weight at offset +k equals left at -k.
template <typename Scalar>
CaputoStencil<Scalar> right_caputo_stencil(Scalar alpha, Index m) {
  const CaputoStencil<Scalar> left = left_caputo_stencil(alpha, m);
  CaputoStencil<Scalar> s{Side::Right, alpha, m, left.weights.reverse()};
  return s;
}

/// Riesz-Caputo derivative of the slope, RC D^alpha (dw/dx), at the centre of
/// `samples` (deflections at offsets -m-1..m+1). Includes the Riesz prefactor
/// Gamma(2-alpha)/2, so alpha = 1 gives the central second difference.
template <typename Derived>
typename Derived::Scalar rc_slope_derivative(
    const Eigen::MatrixBase<Derived>& samples,
    const CaputoStencil<typename Derived::Scalar>& left,
    const CaputoStencil<typename Derived::Scalar>& right,
    typename Derived::Scalar dx) {
  using Scalar = typename Derived::Scalar;
  const Index m = left.m;
  if (samples.size() != 2 * m + 3 || right.m != m) {
    throw InvalidInput("sample vector does not cover the stencil span -m-1..m+1");
  }
  if (!(dx > Scalar(0))) throw InvalidInput("grid step must be positive");
  Scalar acc(0);
  for (Index o = -m - 1; o <= m + 1; ++o) {
    acc += (left.at(o) + right.at(o)) * samples(o + m + 1);
  }
  const Scalar alpha = left.alpha;
  return acc * std::pow(dx, -Scalar(1) - alpha) / (Scalar(2) * (Scalar(2) - alpha));
}

template <typename Derived>
typename Derived::Scalar apply_rc_slope_derivative(
    const Eigen::MatrixBase<Derived>& samples, typename Derived::Scalar alpha, Index m,
    typename Derived::Scalar dx) {
  return rc_slope_derivative(samples, left_caputo_stencil(alpha, m),
                             right_caputo_stencil(alpha, m), dx);
}

namespace detail {

// (1/Gamma(1-alpha)) * integral over [0, m dx] of f(s) s^(-alpha) ds, with f the
// piecewise-linear interpolant of f(k dx) = samples(k), integrated exactly.
template <typename Derived>
typename Derived::Scalar power_kernel_integral(const Eigen::MatrixBase<Derived>& samples,
                                               typename Derived::Scalar alpha, Index m,
                                               typename Derived::Scalar dx) {
  using Scalar = typename Derived::Scalar;
  check_order(alpha);
  check_half_width(m);
  if (samples.size() != m + 1) {
    throw InvalidInput("expected m + 1 second-derivative samples");
  }
  if (!(dx > Scalar(0))) throw InvalidInput("grid step must be positive");
  const Scalar q = Scalar(1) - alpha;
  const Scalar p = Scalar(2) - alpha;
  const Scalar g2 = std::tgamma(p);
  const Scalar g3 = std::tgamma(Scalar(3) - alpha);
  Scalar total(0);
  for (Index k = 0; k < m; ++k) {
    const Scalar s0 = static_cast<Scalar>(k) * dx;
    const Scalar s1 = static_cast<Scalar>(k + 1) * dx;
    const Scalar slope = (samples(k + 1) - samples(k)) / dx;
    const Scalar intercept = samples(k) - slope * s0;
    // int (a + b s) s^-alpha ds / Gamma(1-alpha)
    //   = a [s^(1-alpha)] / Gamma(2-alpha) + b (1-alpha) [s^(2-alpha)] / Gamma(3-alpha)
    total += intercept * (pow0(s1, q) - pow0(s0, q)) / g2 +
             slope * q * (pow0(s1, p) - pow0(s0, p)) / g3;
  }
  return total;
}

}  // namespace detail

/// Left Caputo derivative of dw/dx from second-derivative samples, where
/// samples(k) = w''(x - k dx), by exact integration of their linear interpolant.
template <typename Derived>
typename Derived::Scalar direct_quadrature_left(const Eigen::MatrixBase<Derived>& samples,
                                                typename Derived::Scalar alpha, Index m,
                                                typename Derived::Scalar dx) {
  return detail::power_kernel_integral(samples, alpha, m, dx);
}

/// Right Caputo derivative of dw/dx, samples(k) = w''(x + k dx). Carries the
/// (-1) of the right derivative for a first-order integrand.
template <typename Derived>
typename Derived::Scalar direct_quadrature_right(const Eigen::MatrixBase<Derived>& samples,
                                                 typename Derived::Scalar alpha, Index m,
                                                 typename Derived::Scalar dx) {
  return -detail::power_kernel_integral(samples, alpha, m, dx);
}

}  // namespace febb
