// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include <gtest/gtest.h>

#include <cmath>

#include "phr/even_pencil.hpp"
#include "phr/generators.hpp"
#include "phr/linalg.hpp"
#include "phr/riccati.hpp"
#include "phr/system_model.hpp"
#include "test_util.hpp"

using namespace phr;
using phr::testing::randn;

namespace {

Mat scalar(double v) { return Mat::Constant(1, 1, v); }

LtiSystem random_system(std::mt19937_64& g, Eigen::Index n, Eigen::Index m) {
  Mat G = randn(g, m, m);
  return LtiSystem{randn(g, n, n), randn(g, n, m), randn(g, m, n), 0.5 * (G * G.transpose()) + 0.5 * Mat::Identity(m, m)};
}

}  // namespace

TEST(EvenPencil, StructureExact) {
  std::mt19937_64 g(1);
  auto p = build_even_pencil(random_system(g, 3, 2));
  EXPECT_EQ((p.N + p.N.transpose()).norm(), 0.0);
  EXPECT_EQ((p.M - p.M.transpose()).norm(), 0.0);
}

TEST(EvenPencil, ScalarExampleDeflates) {
  LtiSystem s{scalar(-3), scalar(1), scalar(-1), scalar(0.5)};
  auto p = build_even_pencil(s);
  const Mat Q = scalar(2.0 + std::sqrt(3.0));
  auto r = even_deflating_check(p, Q, deflating_feedback(s, Q));
  EXPECT_LE(r.residual, 1e-12);
  auto wrong = even_deflating_check(p, scalar(1.0), deflating_feedback(s, scalar(1.0)));
  EXPECT_GT(wrong.residual, 1e-3);
}

TEST(EvenPencil, SpectrumSymmetricAndIndexOne) {
  std::mt19937_64 g(2);
  for (int t = 0; t < 20; ++t) {
    LtiSystem s = random_system(g, 3, 2);
    auto sp = pencil_spectrum(build_even_pencil(s));
    EXPECT_EQ(sp.n_infinite, 2);
    EXPECT_TRUE(sp.index_one);
    EXPECT_EQ(sp.finite.size(), 6);
    EXPECT_LE(sp.pairing_residual, 1e-8);
    // finite eigenvalues coincide with the Hamiltonian spectrum
    auto h = build_hamiltonian(s.A, s.B, s.C, s.D + s.D.transpose());
    EXPECT_LE(phr::testing::multiset_distance(sp.finite, eigenvalues(h.H)), 1e-8 * (1.0 + norm2(h.H)));
  }
}

TEST(EvenPencil, SingularFeedthroughIsNotIndexOne) {
  std::mt19937_64 g(3);
  LtiSystem s = random_system(g, 3, 1);
  s.D.setZero();
  auto sp = pencil_spectrum(build_even_pencil(s));
  EXPECT_FALSE(sp.index_one);
  EXPECT_GT(sp.n_infinite, 1);
}

TEST(EvenPencil, RiccatiSolutionsSpanDeflatingSubspaces) {
  std::mt19937_64 g(4);
  RandomPhOptions o;
  o.n = 4;
  o.m = 2;
  for (int t = 0; t < 10; ++t) {
    LtiSystem s = ph_to_lti(random_ph(g, o));
    auto p = build_even_pencil(s);
    for (Side side : {Side::left, Side::right}) {
      auto sol = solve_are(s.A, s.B, s.C, s.D + s.D.transpose(), side);
      auto r = even_deflating_check(p, sol.Q, deflating_feedback(s, sol.Q));
      EXPECT_LE(r.residual, 1e-10 * r.scale);
    }
  }
}

TEST(EvenStaircase, DefiniteFeedthroughNeedsNoStep) {
  const Mat I = Mat::Identity(2, 2);
  auto es = even_staircase_reduce(LtiSystem{-I, I, I, I});
  EXPECT_TRUE(es.steps.empty());
  EXPECT_EQ(es.lift(I), I);
}

TEST(EvenStaircase, SymmetricPortFixesBlock) {
  std::mt19937_64 g(5);
  Mat B = randn(g, 3, 1);
  LtiSystem s{-Mat::Identity(3, 3), B, B.transpose(), Mat::Zero(1, 1)};
  auto es = even_staircase_reduce(s);
  ASSERT_EQ(es.steps.size(), 1u);
  EXPECT_EQ(es.steps[0].rank, 1);
  EXPECT_EQ(es.reduced.n(), 2);
  auto out = even_staircase_storage(s);
  ASSERT_TRUE(out.feasible) << out.detail;
  EXPECT_LE(norm2(out.cert.Q * B - B), 1e-10 * norm2(B));
  EXPECT_LE(lmi_lambda_max(s, out.cert.Q), 1e-9 * out.cert.scale);
}

TEST(EvenStaircase, PassiveNotPhViolatesStructure) {
  LtiSystem s{scalar(-1), scalar(2), scalar(0), scalar(0)};
  try {
    even_staircase_reduce(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StructureViolation);
  }
  auto out = even_staircase_storage(s);
  EXPECT_FALSE(out.feasible);
  EXPECT_EQ(out.condition.rfind("lemT_a", 0), 0u);
}

TEST(EvenStaircase, KernelMismatchDetected) {
  Mat B(2, 1), C(1, 2);
  B << 1, 0;
  C << 0, 1;
  LtiSystem s{-Mat::Identity(2, 2), B, C, Mat::Zero(1, 1)};
  auto out = even_staircase_storage(s);
  EXPECT_FALSE(out.feasible);
  EXPECT_EQ(out.condition.rfind("lemT_a", 0), 0u);
}

TEST(EvenStaircase, NegativePortGainRejected) {
  Mat B(2, 1);
  B << 1, 0;
  LtiSystem s{-Mat::Identity(2, 2), B, -B.transpose(), Mat::Zero(1, 1)};
  auto out = even_staircase_storage(s);
  EXPECT_FALSE(out.feasible);
  EXPECT_EQ(out.condition, "lemT_a_psd");
}

TEST(EvenStaircase, ScrambledSingularFeedthrough) {
  int ok = 0;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    RandomPhOptions o;
    o.n = 5;
    o.m = 2;
    o.s_rank = static_cast<Eigen::Index>(seed % 2);
    auto inst = scrambled_ph(seed, o);
    auto out = even_staircase_storage(inst.scrambled);
    if (!out.feasible) {
      ADD_FAILURE() << "seed " << seed << ": " << out.condition << " " << out.detail;
      continue;
    }
    ++ok;
    EXPECT_GT(lambda_min_sym(out.cert.Q), 0.0);
    EXPECT_LE(lmi_lambda_max(inst.scrambled, out.cert.Q), 1e-8 * out.cert.scale);
  }
  EXPECT_EQ(ok, 30);
}
