#include <cmath>

#include <gtest/gtest.h>

#include "canon/errors.hpp"
#include "canon/morphism.hpp"
#include "canon/realization.hpp"
#include "canon/reduction.hpp"
#include "test_util.hpp"

namespace canon {
namespace {

using namespace canon::testing;

LinearSystem diag_system(Eigen::Vector2d C, Eigen::RowVector2d W) {
  Eigen::MatrixXd A = Eigen::Vector2d(0.5, 0.3).asDiagonal();
  return LinearSystem(A, C, W);
}

double markov_gap(const LinearSystem& a, const LinearSystem& b, std::size_t h) {
  const auto pa = markov_by_propagation(a, h), pb = markov_by_propagation(b, h);
  double d = 0.0;
  for (std::size_t j = 0; j <= h; ++j) d = std::max(d, std::abs(pa[j] - pb[j]));
  return d;
}

TEST(Reduce, ShiftWithUnobservableDirection) {
  const LinearSystem sys = shift_realization(FiniteMemoryFilter{{0, 1}});
  const ReducedRealization red = reduce(sys);
  ASSERT_EQ(red.system.dim(), 1);
  EXPECT_EQ(red.original_dim, 2);
  EXPECT_NEAR(red.system.A()(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(red.system.C()(0) * red.system.W()(0), 1.0, 1e-15);
  const auto psi = markov_by_propagation(red.system, 4);
  EXPECT_EQ(psi, (std::vector<double>{1, 0, 0, 0, 0}));
}

TEST(Reduce, DiagonalWithUnreachableDirection) {
  const ReducedRealization red = reduce(diag_system({1, 0}, {1, 1}));
  ASSERT_EQ(red.system.dim(), 1);
  EXPECT_NEAR(red.system.A()(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(red.system.C()(0), 1.0, 1e-15);
  EXPECT_NEAR(red.system.W()(0), 1.0, 1e-15);
  const auto psi = markov_by_propagation(red.system, 20);
  for (std::size_t j = 0; j <= 20; ++j) EXPECT_NEAR(psi[j], std::pow(0.5, j), 1e-15);
}

TEST(Reduce, CanonicalSystemKeepsDimension) {
  Rng rng(41);
  for (int i = 0; i < 20; ++i) {
    const LinearSystem sys = random_stable_system(rng, 1 + i % 6);
    const ReducedRealization red = reduce(sys);
    ASSERT_EQ(red.system.dim(), sys.dim());
    // Related by the orthogonal change of basis pi.
    EXPECT_LE((red.projection * red.projection.transpose() -
               Eigen::MatrixXd::Identity(sys.dim(), sys.dim())).norm(),
              1e-12);
    EXPECT_LE(markov_gap(sys, red.system, 100), 1e-10);
  }
}

TEST(Reduce, ZeroFilterGivesEmptySystem) {
  const LinearSystem sys(Eigen::MatrixXd::Constant(1, 1, 0.5), Eigen::VectorXd::Ones(1),
                         Eigen::RowVectorXd::Zero(1));
  const ReducedRealization red = reduce(sys);
  EXPECT_EQ(red.system.dim(), 0);
  EXPECT_EQ(red.section.rows(), 1);
  EXPECT_EQ(red.section.cols(), 0);
  EXPECT_TRUE(verify_reduction(sys, red, 50).passes);
}

TEST(Reduce, RefusesWithoutEsp) {
  const LinearSystem sys(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 0),
                         Eigen::RowVector2d(1, 1));
  EXPECT_THROW(reduce(sys), EspViolation);
}

TEST(VerifyReduction, ExamplesPass) {
  for (const LinearSystem& sys :
       {shift_realization(FiniteMemoryFilter{{0, 1}}), diag_system({1, 0}, {1, 1}),
        diag_system({1, 1}, {1, 1})}) {
    const ReductionReport rep = verify_reduction(sys, reduce(sys), 200);
    EXPECT_TRUE(rep.passes);
    EXPECT_LT(rep.impulse_gap, 1e-9);
    EXPECT_LT(rep.section_residual, 1e-9);
    EXPECT_LT(rep.kernel_residual, 1e-9);
    EXPECT_LT(rep.intertwining_residual, 1e-9);
    EXPECT_LT(rep.spectrum_residual, 1e-9);
  }
}

TEST(VerifyReduction, PerturbedStateMatrixFails) {
  Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const LinearSystem sys = planted_system(rng, 5).system;
    ReducedRealization red = reduce(sys);
    Eigen::MatrixXd A = red.system.A();
    A.array() += 1e-3;
    red.system = LinearSystem(A, red.system.C(), red.system.W());
    const ReductionReport rep = verify_reduction(sys, red, 100);
    EXPECT_FALSE(rep.passes);
    EXPECT_GT(rep.impulse_gap, 1e-9);
  }
}

TEST(VerifyReduction, PerturbedStateMatrixFailsOnGap) {
  const LinearSystem sys = diag_system({1, 0}, {1, 1});
  ReducedRealization red = reduce(sys);
  red.system = LinearSystem(red.system.A().array() + 1e-3, red.system.C(), red.system.W());
  const ReductionReport rep = verify_reduction(sys, red, 100);
  EXPECT_FALSE(rep.passes);
  EXPECT_GE(rep.impulse_gap, 1e-4);
}

TEST(VerifyReduction, HorizonZeroComparesLeadingCoefficient) {
  Rng rng(43);
  for (int i = 0; i < 20; ++i) {
    const LinearSystem sys = planted_system(rng, 4).system;
    const ReducedRealization red = reduce(sys);
    const ReductionReport rep = verify_reduction(sys, red, 0);
    const double psi0 = red.system.dim() ? red.system.W().dot(red.system.C()) : 0.0;
    EXPECT_NEAR(rep.impulse_gap, 0.0, 1e-12);
    EXPECT_NEAR(psi0, sys.W().dot(sys.C()), 1e-12);
  }
}

TEST(VerifyReduction, ShapeMismatchFails) {
  const LinearSystem sys = diag_system({1, 1}, {1, 1});
  ReducedRealization red = reduce(sys);
  red.projection = Eigen::MatrixXd::Identity(1, 2);
  const ReductionReport rep = verify_reduction(sys, red, 10);
  EXPECT_FALSE(rep.passes);
}

TEST(ReductionProperties, FilterEquivalenceAndMinimality) {
  Rng rng(44);
  std::uniform_int_distribution<Eigen::Index> dim(2, 12);
  for (int i = 0; i < 200; ++i) {
    const PlantedSystem p = planted_system(rng, dim(rng));
    const ReducedRealization red = reduce(p.system);
    const ReductionReport rep = verify_reduction(p.system, red, 300);
    EXPECT_TRUE(rep.passes) << i;
    EXPECT_LT(markov_gap(p.system, red.system, 300), 1e-9);
    EXPECT_EQ(red.system.dim(), p.canonical_dim) << i;
    EXPECT_EQ(red.system.dim(), hankel_factor_rank(p.system, p.system.dim(), 1e-9)) << i;
    EXPECT_LE((red.projection * red.section -
               Eigen::MatrixXd::Identity(red.system.dim(), red.system.dim())).norm(),
              1e-10);
    EXPECT_LT(rho_of(red.system.A()), 1.0);
  }
}

TEST(ReductionProperties, Idempotent) {
  Rng rng(45);
  for (int i = 0; i < 100; ++i) {
    const LinearSystem sys = planted_system(rng, 2 + i % 9).system;
    const ReducedRealization once = reduce(sys);
    const ReducedRealization twice = reduce(once.system);
    EXPECT_EQ(twice.system.dim(), once.system.dim());
    EXPECT_LT(markov_gap(once.system, twice.system, 200), 1e-9);
  }
}

TEST(ReductionProperties, ProjectionIsMorphismOnReachableSubspace) {
  Rng rng(46);
  for (int i = 0; i < 100; ++i) {
    const LinearSystem sys = planted_system(rng, 2 + i % 9).system;
    const ReducedRealization red = reduce(sys);
    const KalmanSubspaces subs = kalman_subspaces(sys);
    const Eigen::MatrixXd& B = subs.reachable.basis;
    // Restrict to V_R in its own coordinates: (B^T A B, B^T C, W B).
    const LinearSystem restricted(B.transpose() * sys.A() * B, B.transpose() * sys.C(),
                                  sys.W() * B);
    const LinearMap f{red.projection * B};
    EXPECT_TRUE(check_morphism(f, restricted, red.system, 1e-9).passes) << i;
  }
}

TEST(ReductionProperties, Deterministic) {
  Rng rng(47);
  for (int i = 0; i < 20; ++i) {
    const LinearSystem sys = planted_system(rng, 7).system;
    const ReducedRealization a = reduce(sys), b = reduce(sys);
    EXPECT_EQ(a.system.A(), b.system.A());
    EXPECT_EQ(a.projection, b.projection);
  }
}

}  // namespace
}  // namespace canon
