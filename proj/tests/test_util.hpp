// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <algorithm>
#include <random>

#include <Eigen/Dense>

#include "phr/types.hpp"

namespace phr::testing {

inline Mat randn(std::mt19937_64& g, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> d;
  Mat M(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) M(i, j) = d(g);
  return M;
}

inline Mat rand_orth(std::mt19937_64& g, Eigen::Index n) {
  Eigen::HouseholderQR<Mat> qr(randn(g, n, n));
  return qr.householderQ() * Mat::Identity(n, n);
}

// random matrix whose eigenvalues all have Re <= -shift
inline Mat rand_stable(std::mt19937_64& g, Eigen::Index n, double shift = 0.5) {
  Mat A = randn(g, n, n);
  const double a = Eigen::EigenSolver<Mat>(A).eigenvalues().real().maxCoeff();
  return A - (a + shift) * Mat::Identity(n, n);
}

// eigenvalues sorted by (real, imag)
inline CVec sorted_eigs(const CVec& e) {
  std::vector<cplx> v(e.data(), e.data() + e.size());
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-7) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  CVec out(e.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

// min over pairings of max distance, greedy
inline double multiset_distance(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) return 1e300;
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = 1e300;
    Eigen::Index bj = -1;
    for (Eigen::Index j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(a(i) - b(j)) < best) best = std::abs(a(i) - b(j)), bj = j;
    used[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace phr::testing
