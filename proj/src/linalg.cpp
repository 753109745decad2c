#include "kobayashi/linalg.hpp"

#include "kobayashi/config.hpp"
#include "kobayashi/errors.hpp"

#include <Eigen/SVD>

#include <string>
#include <vector>

namespace kobayashi {

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    fail(ErrorCode::InvalidSpec, "dimension must lie in [1, " + std::to_string(kMaxDim) +
                                     "], got " + std::to_string(dim));
}

CVector zeros(int dim) {
  check_dim(dim);
  return CVector::Zero(dim);
}

CVector unit(int dim, int k) {
  CVector e = zeros(dim);
  e(k) = 1.0;
  return e;
}

RVector to_real(const CVector& z) {
  RVector x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x(2 * i) = z(i).real();
    x(2 * i + 1) = z(i).imag();
  }
  return x;
}

CVector from_real(const RVector& x) {
  CVector z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = cd(x(2 * i), x(2 * i + 1));
  return z;
}

CMatrix orthonormal_complement(const CMatrix& vs, int dim) {
  // Gram-Schmidt twice over [vs | e_1 .. e_d]; the first vs.cols() survivors
  // span vs and are dropped.
  std::vector<CVector> basis;
  auto absorb = [&](CVector v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= inner(v, b) * b;
    double n = v.norm();
    if (n > 1e-8) {
      basis.push_back(v / n);
      return true;
    }
    return false;
  };
  int kept = 0;
  for (Eigen::Index j = 0; j < vs.cols(); ++j)
    if (absorb(vs.col(j))) ++kept;
  for (int k = 0; k < dim; ++k) absorb(unit(dim, k));
  CMatrix out(dim, static_cast<Eigen::Index>(basis.size()) - kept);
  for (std::size_t j = kept; j < basis.size(); ++j) out.col(j - kept) = basis[j];
  return out;
}

AffineMap::AffineMap(CMatrix linear, CVector translation)
    : linear_(std::move(linear)), pre_(CVector::Zero(translation.size())), post_(std::move(translation)) {
  finish();
}

AffineMap::AffineMap(CMatrix linear, CVector pre, CVector post)
    : linear_(std::move(linear)), pre_(std::move(pre)), post_(std::move(post)) {
  finish();
}

void AffineMap::finish() {
  check_dim(static_cast<int>(linear_.rows()));
  if (linear_.rows() != linear_.cols() || pre_.size() != linear_.rows() || post_.size() != linear_.rows())
    fail(ErrorCode::InvalidSpec, "affine map has inconsistent dimensions");
  Eigen::JacobiSVD<CMatrix> svd(linear_);
  const auto& s = svd.singularValues();
  double smax = s(0);
  double smin = s(s.size() - 1);
  if (!(smax > 0.0) || !(smin > default_tolerances().singular_rel * smax))
    fail(ErrorCode::SingularMap, "linear part is numerically singular");
  cond_ = smax / smin;
  inverse_ = linear_.inverse();
}

AffineMap AffineMap::identity(int dim) {
  return AffineMap(CMatrix::Identity(dim, dim), zeros(dim));
}

AffineMap AffineMap::translation(const CVector& b) {
  return AffineMap(CMatrix::Identity(b.size(), b.size()), b);
}

AffineMap AffineMap::linear(const CMatrix& L) {
  return AffineMap(L, zeros(static_cast<int>(L.rows())));
}

CVector AffineMap::translation_part() const { return post_ - linear_ * pre_; }

AffineMap AffineMap::inverse() const { return AffineMap(inverse_, post_, pre_); }

AffineMap AffineMap::compose(const AffineMap& other) const {
  // this(other(z)) = L (L' (z - p') + q' - p) + q
  return AffineMap(linear_ * other.linear_, other.pre_, linear_ * (other.post_ - pre_) + post_);
}

}  // namespace kobayashi
