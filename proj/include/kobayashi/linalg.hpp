#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace kobayashi {

using cd = std::complex<double>;

// Fixed upper bound on the ambient dimension. Vectors live on the stack so
// the membership oracles (called millions of times) never allocate.
inline constexpr int kMaxDim = 8;

using CVector = Eigen::Matrix<cd, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using CMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using RVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxDim, 1>;

// Hermitian product, linear in the first slot: <z, w> = sum z_i conj(w_i).
inline cd inner(const CVector& z, const CVector& w) { return w.dot(z); }

inline double norm(const CVector& z) { return z.norm(); }

CVector zeros(int dim);
CVector unit(int dim, int k);  // e_k, zero-based

// Identification C^d = R^{2d} as (Re z_1, Im z_1, Re z_2, ...).
RVector to_real(const CVector& z);
CVector from_real(const RVector& x);

void check_dim(int dim);

// Orthonormal basis (Hermitian) of the complement of span(vs) in C^d.
// Input vectors need not be orthonormal; nearly dependent ones are skipped.
CMatrix orthonormal_complement(const CMatrix& vs, int dim);

// Invertible complex affine map z -> L (z - pre) + post. Keeping the
// pre-translation explicit makes L(x - x) + 0 land exactly on 0, and makes
// composition and inversion symmetric.
class AffineMap {
 public:
  AffineMap() = default;
  AffineMap(CMatrix linear, CVector translation);
  AffineMap(CMatrix linear, CVector pre, CVector post);

  static AffineMap identity(int dim);
  static AffineMap translation(const CVector& b);
  static AffineMap linear(const CMatrix& L);

  int dim() const { return static_cast<int>(linear_.rows()); }
  const CMatrix& linear_part() const { return linear_; }
  const CMatrix& linear_inverse() const { return inverse_; }
  CVector translation_part() const;  // b in z -> L z + b
  const CVector& pre_shift() const { return pre_; }
  const CVector& post_shift() const { return post_; }
  double condition_number() const { return cond_; }

  CVector apply(const CVector& z) const { return linear_ * (z - pre_) + post_; }
  CVector apply_inverse(const CVector& w) const { return inverse_ * (w - post_) + pre_; }
  // Linear part only, for directions.
  CVector apply_linear(const CVector& v) const { return linear_ * v; }
  CVector apply_linear_inverse(const CVector& v) const { return inverse_ * v; }

  AffineMap inverse() const;
  // (this o other)(z) = this(other(z))
  AffineMap compose(const AffineMap& other) const;

 private:
  void finish();

  CMatrix linear_;
  CMatrix inverse_;
  CVector pre_;
  CVector post_;
  double cond_ = 1.0;
};

}  // namespace kobayashi
