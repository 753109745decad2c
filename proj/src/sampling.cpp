#include "kobayashi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>

namespace kobayashi {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Halton points in R^{2k}, mapped to Gaussians and normalised.
std::vector<RVector> real_sphere(int real_dim, std::size_t n) {
  std::vector<RVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RVector x(real_dim);
    if (real_dim == 2) {
      double th = 2.0 * std::numbers::pi * radical_inverse(i + 1, 2);
      x << std::cos(th), std::sin(th);
    } else {
      for (int k = 0; k < real_dim; k += 2) {
        double u1 = radical_inverse(i + 1, kPrimes[k]);
        double u2 = radical_inverse(i + 1, kPrimes[k + 1]);
        double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
        x(k) = rad * std::cos(2.0 * std::numbers::pi * u2);
        x(k + 1) = rad * std::sin(2.0 * std::numbers::pi * u2);
      }
      double nx = x.norm();
      if (nx == 0.0) continue;
      x /= nx;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::vector<CVector> subspace_directions(const CMatrix& basis, std::size_t n) {
  const int k = static_cast<int>(basis.cols());
  std::vector<CVector> out;
  out.reserve(n);
  for (int j = 0; j < k && out.size() < n; ++j)
    for (cd s : {cd(1, 0), cd(-1, 0), cd(0, 1), cd(0, -1)})
      if (out.size() < n) out.push_back(s * basis.col(j));
  if (out.size() >= n) return out;
  for (const RVector& x : real_sphere(2 * k, n - out.size())) out.push_back(basis * from_real(x));
  return out;
}

std::vector<CVector> sphere_directions(int dim, std::size_t n) {
  return subspace_directions(CMatrix::Identity(dim, dim), n);
}

unsigned thread_count() {
  if (const char* env = std::getenv("KOBAYASHI_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(std::min(v, 256));
  }
  return 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace kobayashi
