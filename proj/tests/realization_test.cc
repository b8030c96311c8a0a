#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "canon/errors.hpp"
#include "canon/realization.hpp"
#include "canon/subspace.hpp"
#include "test_util.hpp"

namespace canon {
namespace {

using namespace canon::testing;

// Hankel matrices of finite-memory kernels are anti-triangular, so the rank
// is one past the index of the oldest nonzero coefficient.
Eigen::Index anti_triangular_rank(const FiniteMemoryFilter& f) {
  for (std::size_t j = f.memory(); j-- > 0;)
    if (f.coefficient(j) != 0.0) return static_cast<Eigen::Index>(j + 1);
  return 0;
}

FiniteMemoryFilter random_filter(Rng& rng, std::size_t memory) {
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution sign(0.5), zero(0.3);
  FiniteMemoryFilter f{std::vector<double>(memory)};
  for (double& c : f.psi) c = zero(rng) ? 0.0 : (sign(rng) ? 1 : -1) * mag(rng);
  return f;
}

TEST(ShiftRealization, Structure) {
  const LinearSystem sys = shift_realization(FiniteMemoryFilter{{2, -1, 3}});
  ASSERT_EQ(sys.dim(), 3);
  Eigen::MatrixXd A(3, 3);
  A << 0, 1, 0, 0, 0, 1, 0, 0, 0;
  EXPECT_EQ(sys.A(), A);
  EXPECT_EQ(sys.C(), Eigen::Vector3d(0, 0, 1));
  EXPECT_EQ(sys.W(), Eigen::RowVector3d(2, -1, 3));
  EXPECT_EQ(markov_parameters(sys, 4), (std::vector<double>{3, -1, 2, 0, 0}));
}

TEST(ShiftRealization, EmptyFilter) {
  EXPECT_EQ(shift_realization(FiniteMemoryFilter{}).dim(), 0);
  EXPECT_EQ(minimal_realization(FiniteMemoryFilter{}).system.dim(), 0);
}

TEST(ShiftRealization, OutputMatchesDirectConvolution) {
  Rng rng(51);
  for (int i = 0; i < 50; ++i) {
    const FiniteMemoryFilter f = random_filter(rng, 1 + i % 8);
    const LinearSystem sys = shift_realization(f);
    const Signal z = random_signal(rng, 3 + i % 13);
    double direct = 0.0;
    for (std::size_t j = 0; j < f.memory(); ++j)
      direct += f.coefficient(j) * z.at(-static_cast<long>(j));
    EXPECT_NEAR(evaluate_functional(sys, z).value, direct, 1e-12);
  }
}

TEST(MinimalRealization, Examples) {
  EXPECT_EQ(minimal_realization(FiniteMemoryFilter{{0, 0, 0, 1}}).system.dim(), 1);
  EXPECT_EQ(minimal_realization(FiniteMemoryFilter{{0, 0}}).system.dim(), 0);
  EXPECT_EQ(minimal_realization(FiniteMemoryFilter{{0.125, 0.25, 0.5, 1}}).system.dim(), 4);
  EXPECT_EQ(minimal_realization(FiniteMemoryFilter{{2, -1, 3}}).system.dim(), 3);
}

TEST(MinimalRealization, KeepsKernel) {
  const FiniteMemoryFilter f{{0, 0, 0, 1}};
  const LinearSystem red = minimal_realization(f).system;
  EXPECT_EQ(red.A().norm(), 0.0);
  const auto psi = markov_parameters(red, 6);
  EXPECT_NEAR(psi[0], 1.0, 1e-15);
  for (std::size_t j = 1; j <= 6; ++j) EXPECT_NEAR(psi[j], 0.0, 1e-15);
}

TEST(HankelMatrix, Entries) {
  const FiniteMemoryFilter f{{2, -1, 3}};
  Eigen::Matrix3d H;
  H << 3, -1, 2, -1, 2, 0, 2, 0, 0;
  EXPECT_EQ(hankel_matrix(f), Eigen::MatrixXd(H));
  EXPECT_EQ(hankel_rank(f), 3);
}

TEST(RealizationProperties, DimensionIsHankelRank) {
  Rng rng(52);
  for (int i = 0; i < 300; ++i) {
    const FiniteMemoryFilter f = random_filter(rng, 1 + i % 10);
    const ReducedRealization red = minimal_realization(f);
    EXPECT_EQ(red.system.dim(), anti_triangular_rank(f)) << i;
    EXPECT_EQ(red.system.dim(), hankel_rank(f)) << i;
    EXPECT_EQ(red.system.dim(), hankel_rank(red.system)) << i;
    EXPECT_TRUE(red.system.dim() == 0 || is_canonical(red.system).canonical) << i;
    const auto psi = markov_parameters(red.system, f.memory() + 5);
    for (std::size_t j = 0; j < psi.size(); ++j)
      EXPECT_NEAR(psi[j], f.coefficient(j), 1e-10) << i << " " << j;
  }
}

TEST(RealizationProperties, ShiftCanonicalIffOldestCoefficientNonzero) {
  Rng rng(53);
  for (int i = 0; i < 200; ++i) {
    const FiniteMemoryFilter f = random_filter(rng, 1 + i % 9);
    EXPECT_EQ(is_canonical(shift_realization(f)).canonical, f.psi.front() != 0.0) << i;
  }
}

TEST(RealizationProperties, ResultIsNilpotent) {
  Rng rng(54);
  for (int i = 0; i < 100; ++i) {
    const FiniteMemoryFilter f = random_filter(rng, 1 + i % 9);
    const LinearSystem sys = minimal_realization(f).system;
    if (sys.dim() == 0) continue;
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(sys.dim(), sys.dim());
    for (Eigen::Index k = 0; k < sys.dim(); ++k) P = P * sys.A();
    EXPECT_LT(P.norm(), 1e-9) << i;
    EXPECT_EQ(l1_tail_bound(sys, static_cast<std::size_t>(sys.dim())), 0.0);
  }
}

TEST(ApproximateRealization, GeometricKernel) {
  // Psi_{-j} = 2^-j: dropping from index m leaves 2^(1-m).
  ImpulseResponse psi;
  for (int j = 0; j <= 40; ++j) psi.coefficients.push_back(std::ldexp(1.0, -j));
  psi.tail_bound = std::ldexp(1.0, -40);
  const ApproximateRealization a = approximate_realization(psi, 1e-3);
  EXPECT_EQ(a.kept, 11u);
  EXPECT_EQ(a.realization.system.dim(), 11);
  EXPECT_NEAR(a.truncation_error, std::ldexp(1.0, -10), 1e-15);
  EXPECT_LE(a.truncation_error, 1e-3);
}

TEST(ApproximateRealization, BudgetBelowTailIsInfeasible) {
  const ImpulseResponse psi{{1.0, 0.5}, 1e-2};
  try {
    approximate_realization(psi, 1e-3);
    FAIL() << "expected Infeasible";
  } catch (const Infeasible& e) {
    EXPECT_EQ(e.floor(), 1e-2);
  }
  EXPECT_THROW(approximate_realization(psi, 1e-2), Infeasible);
}

TEST(ApproximateRealization, LargeBudgetKeepsNothing) {
  const ImpulseResponse psi{{1.0, 0.5}, 0.0};
  const ApproximateRealization a = approximate_realization(psi, 2.0);
  EXPECT_EQ(a.kept, 0u);
  EXPECT_EQ(a.realization.system.dim(), 0);
  EXPECT_DOUBLE_EQ(a.truncation_error, 1.5);
}

TEST(ApproximateRealization, ErrorBoundHoldsOnInputs) {
  Rng rng(55);
  std::uniform_real_distribution<double> budget(-6, -1);
  for (int i = 0; i < 100; ++i) {
    const LinearSystem sys = random_stable_system(rng, 2 + i % 5, 0.8);
    const ImpulseResponse psi = impulse_response(sys, 80);
    const double eps = std::pow(10.0, budget(rng));
    if (psi.tail_bound >= eps) continue;
    const ApproximateRealization a = approximate_realization(psi, eps);
    EXPECT_LE(a.truncation_error, eps);
    for (int k = 0; k < 10; ++k) {
      const Signal z = random_signal(rng, 200);
      const std::vector<double> w(z.window().begin(), z.window().end());
      const double exact = forward_recursion(sys, w);
      const double approx = forward_recursion(a.realization.system, w);
      EXPECT_LE(std::abs(exact - approx), a.truncation_error + 1e-10) << i;
    }
  }
}

}  // namespace
}  // namespace canon
