#pragma once

// Banded storage and LU factorization with row partial pivoting, in the
// layout of LAPACK's xGBTRF: A(i, j) lives at ab(kl + ku + i - j, j), and the
// top kl rows of ab hold the fill that pivoting introduces into U.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "febb/errors.hpp"

namespace febb {

template <typename Scalar>
class BandedMatrix {
 public:
  using Index = Eigen::Index;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BandedMatrix() = default;

  BandedMatrix(Index n, Index kl, Index ku) : n_(n), kl_(kl), ku_(ku) {
    if (n < 1 || kl < 0 || ku < 0) {
      throw InvalidInput("banded matrix needs n >= 1 and non-negative bandwidths");
    }
    ab_ = Dense::Zero(2 * kl_ + ku_ + 1, n_);
  }

  Index rows() const { return n_; }
  Index cols() const { return n_; }
  Index lower() const { return kl_; }
  Index upper() const { return ku_; }

  bool in_band(Index i, Index j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ && j - i <= ku_;
  }

  Scalar coeff(Index i, Index j) const {
    return in_band(i, j) ? ab_(kl_ + ku_ + i - j, j) : Scalar(0);
  }

  Scalar& coeffRef(Index i, Index j) {
    if (!in_band(i, j)) {
      throw InvalidInput("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") lies outside the band");
    }
    return ab_(kl_ + ku_ + i - j, j);
  }

  Dense to_dense() const {
    Dense a = Dense::Zero(n_, n_);
    for (Index j = 0; j < n_; ++j) {
      for (Index i = std::max<Index>(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) {
        a(i, j) = coeff(i, j);
      }
    }
    return a;
  }

  Vector operator*(const Vector& x) const {
    if (x.size() != n_) throw InvalidInput("dimension mismatch in banded product");
    Vector y = Vector::Zero(n_);
    for (Index j = 0; j < n_; ++j) {
      for (Index i = std::max<Index>(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) {
        y(i) += coeff(i, j) * x(j);
      }
    }
    return y;
  }

  /// Max absolute row sum.
  Scalar norm_inf() const {
    Scalar best(0);
    for (Index i = 0; i < n_; ++i) {
      Scalar row(0);
      for (Index j = std::max<Index>(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) {
        row += std::abs(coeff(i, j));
      }
      best = std::max(best, row);
    }
    return best;
  }

  const Dense& storage() const { return ab_; }

 private:
  template <typename>
  friend class BandedLU;

  Index n_ = 0;
  Index kl_ = 0;
  Index ku_ = 0;
  Dense ab_;
};

template <typename Scalar>
class BandedLU {
 public:
  using Index = Eigen::Index;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// Pivots smaller than this in magnitude are reported as a numeric failure.
  static constexpr double kTinyPivot = 1e-300;

  explicit BandedLU(BandedMatrix<Scalar> a) : lu_(std::move(a)) { factorize(); }

  Index rows() const { return lu_.n_; }

  /// ipiv[j]: row exchanged with row j at elimination step j.
  const std::vector<Index>& pivots() const { return ipiv_; }

  /// perm[i] is the row of A that ends up in row i of P A.
  std::vector<Index> permutation() const {
    std::vector<Index> perm(static_cast<std::size_t>(rows()));
    for (Index i = 0; i < rows(); ++i) perm[i] = i;
    for (Index j = 0; j < rows(); ++j) std::swap(perm[j], perm[ipiv_[j]]);
    return perm;
  }

  /// Unit lower factor of P A = L U, with later interchanges applied to the
  /// multipliers of earlier columns.
  Dense matrixL() const {
    const Index n = rows();
    Dense l = Dense::Identity(n, n);
    for (Index j = 0; j < n; ++j) {
      if (ipiv_[j] != j) {
        for (Index c = 0; c < j; ++c) std::swap(l(j, c), l(ipiv_[j], c));
      }
      const Index km = std::min(lu_.kl_, n - 1 - j);
      for (Index r = 1; r <= km; ++r) l(j + r, j) = at(j + r, j);
    }
    return l;
  }

  Dense matrixU() const {
    const Index n = rows();
    const Index kv = lu_.kl_ + lu_.ku_;
    Dense u = Dense::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = std::max<Index>(0, j - kv); i <= j; ++i) u(i, j) = at(i, j);
    }
    return u;
  }

  Vector solve(const Vector& b) const {
    const Index n = rows();
    if (b.size() != n) {
      throw InvalidInput("right-hand side has " + std::to_string(b.size()) +
                         " entries, expected " + std::to_string(n));
    }
    const Index kl = lu_.kl_;
    const Index kv = kl + lu_.ku_;
    Vector x = b;
    for (Index j = 0; j < n; ++j) {
      if (ipiv_[j] != j) std::swap(x(j), x(ipiv_[j]));
      const Index km = std::min(kl, n - 1 - j);
      for (Index r = 1; r <= km; ++r) x(j + r) -= at(j + r, j) * x(j);
    }
    for (Index j = n - 1; j >= 0; --j) {
      x(j) /= at(j, j);
      for (Index i = std::max<Index>(0, j - kv); i < j; ++i) x(i) -= at(i, j) * x(j);
    }
    return x;
  }

 private:
  // Element (i, j) of the working array, valid for -kl-ku <= i-j <= kl.
  Scalar& at(Index i, Index j) { return lu_.ab_(lu_.kl_ + lu_.ku_ + i - j, j); }
  Scalar at(Index i, Index j) const { return lu_.ab_(lu_.kl_ + lu_.ku_ + i - j, j); }

  void factorize() {
    const Index n = rows();
    const Index kl = lu_.kl_;
    const Index ku = lu_.ku_;
    ipiv_.assign(static_cast<std::size_t>(n), 0);
    Index ju = 0;  // last column touched by the row interchanges so far
    for (Index j = 0; j < n; ++j) {
      const Index km = std::min(kl, n - 1 - j);
      // Strict comparison keeps the smallest row index among equal magnitudes.
      Index jp = 0;
      Scalar best = std::abs(at(j, j));
      for (Index r = 1; r <= km; ++r) {
        const Scalar v = std::abs(at(j + r, j));
        if (v > best) {
          best = v;
          jp = r;
        }
      }
      ipiv_[j] = j + jp;
      if (best == Scalar(0)) {
        throw SingularMatrix("matrix is singular: no non-zero pivot in column " +
                             std::to_string(j));
      }
      if (best < Scalar(kTinyPivot)) {
        throw NumericalFailure("pivot magnitude below 1e-300 in column " +
                               std::to_string(j));
      }
      ju = std::max(ju, std::min(j + ku + jp, n - 1));
      if (jp != 0) {
        for (Index c = j; c <= ju; ++c) std::swap(at(j, c), at(j + jp, c));
      }
      const Scalar pivot = at(j, j);
      for (Index r = 1; r <= km; ++r) at(j + r, j) /= pivot;
      for (Index c = j + 1; c <= ju; ++c) {
        const Scalar ujc = at(j, c);
        if (ujc == Scalar(0)) continue;
        for (Index r = 1; r <= km; ++r) at(j + r, c) -= at(j + r, j) * ujc;
      }
    }
  }

  BandedMatrix<Scalar> lu_;
  std::vector<Index> ipiv_;
};

template <typename Scalar>
BandedLU<Scalar> lu_factor(const BandedMatrix<Scalar>& a) {
  return BandedLU<Scalar>(a);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lu_solve(
    const BandedLU<Scalar>& f, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b) {
  return f.solve(b);
}

/// ||A x - b||_inf
template <typename Scalar>
Scalar residual_norm(const BandedMatrix<Scalar>& a,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b) {
  if (x.size() != a.cols() || b.size() != a.rows()) {
    throw InvalidInput("dimension mismatch in residual");
  }
  return (a * x - b).template lpNorm<Eigen::Infinity>();
}

}  // namespace febb
