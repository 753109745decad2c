#pragma once

#include "kobayashi/linalg.hpp"

#include <random>

namespace testing {

using kobayashi::cd;
using kobayashi::CMatrix;
using kobayashi::CVector;

inline CVector gaussian_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n;
  CVector z(dim);
  for (int i = 0; i < dim; ++i) z(i) = cd(n(rng), n(rng));
  return z;
}

// Uniform point of the ball of the given radius.
inline CVector ball_point(std::mt19937_64& rng, int dim, double radius) {
  std::uniform_real_distribution<double> u;
  CVector z = gaussian_vector(rng, dim);
  return z * (radius * std::pow(u(rng), 1.0 / (2 * dim)) / z.norm());
}

inline CMatrix random_unitary(std::mt19937_64& rng, int dim) {
  Eigen::MatrixXcd g(dim, dim);
  for (int j = 0; j < dim; ++j) g.col(j) = gaussian_vector(rng, dim);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

}  // namespace testing
