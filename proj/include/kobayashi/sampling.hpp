#pragma once

#include "kobayashi/linalg.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace kobayashi {

// Radical inverse of i in the given base.
double radical_inverse(std::size_t i, unsigned base);

// n deterministic directions on the unit sphere of C^dim = R^{2 dim}. The 4 dim
// signed coordinate axes (±e_k, ±i e_k) come first, the remainder is a
// low-discrepancy set: van der Corput angles when dim = 1, otherwise Halton
// points pushed through Box-Muller.
std::vector<CVector> sphere_directions(int dim, std::size_t n);

// Same, but for the unit sphere of the complex subspace spanned by the
// orthonormal columns of basis.
std::vector<CVector> subspace_directions(const CMatrix& basis, std::size_t n);

// Worker count from KOBAYASHI_THREADS, default 1.
unsigned thread_count();

// Runs body(i) for i in [0, n). Results must be written to slot i of a
// caller-owned buffer so the reduction order stays fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kobayashi
