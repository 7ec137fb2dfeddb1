#include <gtest/gtest.h>

#include <cmath>

#include "equitile/analysis.hpp"
#include "equitile/triangularize.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace equitile;
using namespace equitile::testing;

namespace {

WeightedIndicator random_instance(Rng& rng, Index n) {
  return WeightedIndicator(random_partition(rng, n, rng.integer(1, n)), random_weights(rng, n));
}

}  // namespace

TEST(Quotient, WorkedExample) {
  const auto wi = WeightedIndicator::unit(pi0());
  const auto front = generalized_quotient(a0(), wi, -1.0);
  EXPECT_EQ(front.alpha, -1.0);
  EXPECT_LT(max_abs_diff(front.entries, a0_front_quotient()), 1e-14);
  EXPECT_LT(max_abs_diff(generalized_quotient(a0(), wi, 0.0).entries, a0_E()), 1e-14);
  EXPECT_LT(max_abs_diff(generalized_quotient(a0(), wi, 1.0).entries,
                         a0_front_quotient().transpose()),
            1e-14);
}

TEST(Quotient, MatchesDefinitionAndSimilarity) {
  Rng rng(1);
  for (int t = 0; t < 40; ++t) {
    const Index n = rng.integer(1, 20);
    const auto wi = random_instance(rng, n);
    const Matrix a = random_complex(rng, n, n);
    const Matrix w = wi.dense();
    const Matrix e0 = generalized_quotient(a, wi, 0.0).entries;
    for (double alpha : {-1.0, -0.5, 0.0, 0.3, 1.0}) {
      const Matrix e = generalized_quotient(a, wi, alpha).entries;
      EXPECT_LT(max_abs_diff(e, quotient_by_definition(a, w, alpha)), 1e-11 * a.norm());
      const Matrix g = w.adjoint() * w;
      const Matrix sim = hermitian_power(g, alpha / 2) * e0 * hermitian_power(g, -alpha / 2);
      EXPECT_LT(max_abs_diff(e, sim), 1e-11 * a.norm());
    }
  }
}

TEST(Quotient, ZeroMatrixAndInadmissible) {
  Rng rng(2);
  const auto wi = random_instance(rng, 6);
  EXPECT_EQ(generalized_quotient(Matrix::Zero(6, 6), wi, 0.4).entries.cwiseAbs().maxCoeff(), 0.0);
  Vector w = Vector::Ones(2);
  w(1) = 0.0;
  EXPECT_THROW(generalized_quotient(Matrix::Zero(2, 2),
                                    WeightedIndicator(Partition::singletons(2), w), 0.0),
               InvalidArgument);
}

TEST(Deviation, WorkedExampleIsZeroBothSides) {
  const auto pair = deviation_matrices(a0(), WeightedIndicator::unit(pi0()));
  EXPECT_TRUE(pair.front.is_zero(1e-14));
  EXPECT_TRUE(pair.rear.is_zero(1e-14));
}

TEST(Deviation, NilpotentTwoByTwo) {
  const auto t = front_deviation(from_real({{0, 1}, {0, 0}}),
                                 WeightedIndicator::unit(Partition::single_cell(2)));
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  EXPECT_LT(max_abs_diff(t.assembled(), from_real({{c}, {-c}})), 1e-15);
  EXPECT_NEAR(t.assembled().norm(), 0.5, 1e-15);
  EXPECT_FALSE(t.is_zero());
}

TEST(Deviation, MatchesDefinition) {
  Rng rng(3);
  for (int t = 0; t < 40; ++t) {
    const Index n = rng.integer(1, 20);
    const auto wi = random_instance(rng, n);
    const Matrix a = random_complex(rng, n, n);
    const Matrix w = wi.dense();
    EXPECT_LT(max_abs_diff(front_deviation(a, wi).assembled(),
                           front_deviation_by_definition(a, w)),
              1e-11 * a.norm());
    EXPECT_LT(max_abs_diff(rear_deviation(a, wi).assembled(), rear_deviation_by_definition(a, w)),
              1e-11 * a.norm());
  }
}

TEST(Deviation, BlockVectorsAndLayout) {
  Rng rng(4);
  const Partition p = random_partition(rng, 9, 3);
  const auto wi = WeightedIndicator(p, random_weights(rng, 9));
  const Matrix a = random_complex(rng, 9, 9);
  const auto pair = deviation_matrices(a, wi);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      EXPECT_EQ(pair.front.block(i, j).size(), p.cell_size(i));
      EXPECT_EQ(pair.rear.block(i, j).size(), p.cell_size(j));
      EXPECT_NEAR(pair.front.block_norms()(i, j), pair.front.block(i, j).norm(), 1e-14);
      EXPECT_NEAR(pair.rear.block_norms()(i, j), pair.rear.block(i, j).norm(), 1e-14);
    }
  }
}

TEST(Deviation, BlockNormsInvariantUnderWeightRescaling) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.integer(2, 15);
    const Partition p = random_partition(rng, n, rng.integer(1, n));
    const Vector w = random_weights(rng, n);
    Vector scaled = w;
    for (Index i = 0; i < p.num_cells(); ++i) {
      const Complex mu = rng.complex_normal();
      for (Index v : p.cell(i)) scaled(v) *= mu;
    }
    const Matrix a = random_complex(rng, n, n);
    const auto x = deviation_matrices(a, WeightedIndicator(p, w));
    const auto y = deviation_matrices(a, WeightedIndicator(p, scaled));
    EXPECT_LT((x.front.block_norms() - y.front.block_norms()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((x.rear.block_norms() - y.rear.block_norms()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BuildBlockReflector, WorkedExampleBlocks) {
  const auto h = build_block_reflector(WeightedIndicator::unit(Partition(6, {{0}, {1, 2}, {3, 4, 5}})));
  ASSERT_EQ(h.num_blocks(), 3);
  EXPECT_LT(max_abs_diff(h.block(0).dense(), from_real({{-1}})), 1e-15);
  const double r = 1.0 / std::sqrt(2.0), s = std::sqrt(3.0);
  EXPECT_LT(max_abs_diff(h.block(1).dense(), from_real({{-r, -r}, {-r, r}})), 1e-15);
  const double a = (1 + s) / -2.0, b = (1 - s) / -2.0;
  EXPECT_LT(max_abs_diff(h.block(2).dense(), -(1 / s) * from_real({{1, 1, 1}, {1, a, b}, {1, b, a}})),
            1e-15);
  EXPECT_EQ(h.offsets(), (std::vector<Index>{0, 1, 3, 6}));
}

TEST(BuildBlockReflector, SingletonsGiveMinusIdentity) {
  const auto h = build_block_reflector(WeightedIndicator::unit(Partition::singletons(4)));
  EXPECT_EQ(max_abs_diff(h.dense(), -Matrix::Identity(4, 4)), 0.0);
}

TEST(BuildBlockReflector, FirstBasisWithUnitPhaseIsIdentity) {
  Vector w = Vector::Zero(4);
  w(0) = 1.0;
  const auto h = build_block_reflector(WeightedIndicator(Partition::single_cell(4), w),
                                       std::vector<Phase>{Phase::one()});
  EXPECT_TRUE(h.block(0).is_identity());
  EXPECT_THROW(build_block_reflector(WeightedIndicator::unit(pi0()), std::vector<Phase>{Phase::one()}),
               InvalidArgument);
}

TEST(Omega, Examples) {
  EXPECT_EQ(omega_permutation({1, 2, 3}).forward(), (std::vector<Index>{0, 1, 3, 2, 4, 5}));
  EXPECT_TRUE(omega_permutation({1, 1, 1, 1}).is_identity());
  EXPECT_EQ(omega_permutation({2, 2}).forward(), (std::vector<Index>{0, 2, 1, 3}));
  EXPECT_THROW(omega_permutation({}), InvalidArgument);
  EXPECT_THROW(omega_permutation({2, 0}), InvalidArgument);
}

TEST(Omega, MatchesIndexFormula) {
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const Index n = rng.integer(1, 30);
    const auto sizes = random_sizes(rng, n, rng.integer(1, n));
    EXPECT_EQ(omega_permutation(sizes).matrix(), omega_by_definition(sizes));
  }
}

TEST(BlockTriangularize, WorkedExample) {
  const auto r = block_triangularize(a0(), WeightedIndicator::unit(pi0()));
  EXPECT_EQ(r.pre_permutation.forward(), (std::vector<Index>{0, 1, 5, 3, 4, 2}));
  EXPECT_EQ(r.omega.forward(), (std::vector<Index>{0, 1, 3, 2, 4, 5}));
  EXPECT_LT(max_abs_diff(r.E, a0_E()), 1e-12);
  EXPECT_LT(max_abs_diff(r.F, a0_F()), 1e-12);
  EXPECT_LT(r.D_minus.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(r.D_plus_conj.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(max_abs_diff(r.transformed(), a0_tilde()), 1e-12);
  EXPECT_LT(max_abs_diff(r.assembled(), a0_hat()), 1e-12);
}

TEST(BlockTriangularize, PrintedLowerBlockIsNotUnitarilyReachable) {
  // A unitary similarity keeps the Frobenius norm; with D = 0 the lower block
  // must carry ‖A0‖² - ‖E‖² = 213 - 180 = 33.
  EXPECT_NEAR(a0().squaredNorm() - a0_E().squaredNorm(), 33.0, 1e-12);
  EXPECT_NEAR(a0_F().squaredNorm(), 33.0, 1e-12);
  EXPECT_NEAR(a0_F_displayed().squaredNorm(), 137.0, 1e-12);
  // the closed form agrees with a dense evaluation of the printed reflectors
  const double r2 = 1 / std::sqrt(2.0), s3 = std::sqrt(3.0);
  const double a = (1 + s3) / -2.0, b = (1 - s3) / -2.0;
  Matrix h = Matrix::Zero(6, 6);
  h(0, 0) = -1;
  h.block(1, 1, 2, 2) = from_real({{-r2, -r2}, {-r2, r2}});
  h.block(3, 3, 3, 3) = -(1 / s3) * from_real({{1, 1, 1}, {1, a, b}, {1, b, a}});
  EXPECT_LT(max_abs_diff(h.adjoint() * a0_suitable() * h, a0_tilde()), 1e-13);
}

TEST(BlockTriangularize, SingletonsLeaveMatrixUnchanged) {
  Rng rng(7);
  const Matrix a = random_complex(rng, 5, 5);
  const auto r = block_triangularize(a, WeightedIndicator::unit(Partition::singletons(5)));
  EXPECT_EQ(max_abs_diff(r.E, a), 0.0);
  EXPECT_EQ(r.F.size(), 0);
  EXPECT_TRUE(r.omega.is_identity());
}

TEST(BlockTriangularize, ZeroMatrix) {
  Rng rng(8);
  const auto r = block_triangularize(Matrix::Zero(8, 8), random_instance(rng, 8));
  EXPECT_EQ(r.assembled().cwiseAbs().maxCoeff(), 0.0);
}

TEST(BlockTriangularize, AssembledEqualsDenseTransform) {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const Index n = rng.integer(1, 25);
    const auto wi = random_instance(rng, n);
    const Matrix a = random_complex(rng, n, n);
    const auto r = block_triangularize(a, wi);
    const Matrix p = r.pre_permutation.matrix().cast<Complex>();
    const Matrix h = r.reflector.dense();
    const Matrix o = r.omega.matrix().cast<Complex>();
    const Matrix u = p * h * o;
    EXPECT_LT(max_abs_diff(r.assembled(), u.adjoint() * a * u), 1e-12 * a.norm());
    EXPECT_LT((u.adjoint() * u - Matrix::Identity(n, n)).norm(), 1e-13 * static_cast<double>(n));
  }
}

TEST(BlockTriangularize, UnitarySimilarityInvariants) {
  Rng rng(10);
  for (int t = 0; t < 30; ++t) {
    const Index n = rng.integer(1, 64);
    const auto wi = random_instance(rng, n);
    const Matrix a = random_complex(rng, n, n);
    const auto r = block_triangularize(a, wi);
    EXPECT_LT(sv_gap(r.assembled(), a), 1e-11 * a.norm());
    const Matrix h = random_hermitian(rng, n);
    const auto rh = block_triangularize(h, wi);
    const Matrix hat = rh.assembled();
    EXPECT_LT(max_abs_diff(hat, hat.adjoint()), 1e-12 * h.norm());
    const auto ev_a = eigenvalues(h, true);
    const auto ev_hat = eigenvalues(hat, true);
    EXPECT_LT(max_matched_gap(ev_a, ev_hat), 1e-11 * h.norm());
  }
}

TEST(BlockTriangularize, DeviationBlocksShareSingularValues) {
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const Index n = rng.integer(1, 40);
    const auto wi = random_instance(rng, n);
    const Matrix a = random_complex(rng, n, n);
    const auto r = block_triangularize(a, wi);
    const auto pair = deviation_matrices(a, wi);
    const double scale = std::max(1.0, a.norm());
    EXPECT_LT(sv_gap(r.D_minus, pair.front.assembled()), 1e-11 * scale);
    EXPECT_LT(sv_gap(r.D_plus(), pair.rear.assembled()), 1e-11 * scale);
  }
}

TEST(BlockTriangularize, EIsPhaseConjugatedRayleighQuotient) {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const Index n = rng.integer(1, 20);
    const auto wi = random_instance(rng, n);
    const Matrix a = random_complex(rng, n, n);
    std::vector<Phase> phases;
    for (Index i = 0; i < wi.num_cells(); ++i) phases.emplace_back(rng.unit_phase());
    const auto r = block_triangularize(a, wi, phases);
    Vector v(wi.num_cells());
    for (Index i = 0; i < v.size(); ++i) v(i) = phases[static_cast<std::size_t>(i)].value();
    const Matrix vm = v.asDiagonal();
    const Matrix e0 = generalized_quotient(a, wi, 0.0).entries;
    EXPECT_LT(max_abs_diff(r.E, vm.adjoint() * e0 * vm), 1e-12 * a.norm());
  }
}

TEST(BlockTriangularize, PhaseChoiceKeepsInvariants) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.integer(2, 20);
    const auto wi = random_instance(rng, n);
    const Matrix a = random_complex(rng, n, n);
    std::vector<Phase> phases;
    for (Index i = 0; i < wi.num_cells(); ++i) phases.emplace_back(rng.unit_phase());
    const auto x = block_triangularize(a, wi);
    const auto y = block_triangularize(a, wi, phases);
    const double scale = a.norm();
    EXPECT_LT(max_matched_gap(eigenvalues(x.E), eigenvalues(y.E)), 1e-11 * scale);
    EXPECT_LT(sv_gap(x.D_minus, y.D_minus), 1e-11 * scale);
    EXPECT_LT(sv_gap(x.D_plus_conj, y.D_plus_conj), 1e-11 * scale);
    EXPECT_LT(sv_gap(x.F, y.F), 1e-11 * scale);
  }
}

TEST(BlockTriangularize, FactorsFromDifferentOrderingsShareSingularValues) {
  Rng rng(14);
  const Index n = 12;
  const Matrix a = random_complex(rng, n, n);
  const Partition p = random_partition(rng, n, 4);
  std::vector<std::vector<Index>> reversed(p.cells().rbegin(), p.cells().rend());
  const auto x = block_triangularize(a, WeightedIndicator::unit(p));
  const auto y = block_triangularize(a, WeightedIndicator::unit(Partition(n, reversed)));
  EXPECT_LT(sv_gap(x.F, y.F), 1e-11 * a.norm());
}

TEST(BlockTriangularize, ExactWhenFrontEquitable) {
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.integer(2, 40);
    const Partition p = random_partition(rng, n, rng.integer(1, std::min<Index>(n, 6)));
    const Matrix theta = random_real(rng, p.num_cells(), p.num_cells());
    const Matrix a = planted_front_equitable(rng, p, theta);
    const auto r = block_triangularize(a, WeightedIndicator::unit(p));
    EXPECT_LT(r.D_minus.norm(), 1e-12 * a.norm());
  }
}

TEST(BlockTriangularize, SizeMismatchAndInadmissible) {
  EXPECT_THROW(block_triangularize(Matrix::Zero(5, 5), WeightedIndicator::unit(pi0())),
               InvalidArgument);
  Vector w = Vector::Ones(6);
  w(0) = 0.0;
  EXPECT_THROW(block_triangularize(a0(), WeightedIndicator(pi0(), w)), InvalidArgument);
}

TEST(RecoverEigenvector, SingletonsNegate) {
  Rng rng(16);
  const Matrix a = random_complex(rng, 4, 4);
  const auto r = block_triangularize(a, WeightedIndicator::unit(Partition::singletons(4)));
  const Vector z = random_complex(rng, 4, 1);
  EXPECT_EQ(max_abs_diff(recover_eigenvector(r, z), -z), 0.0);
  EXPECT_EQ(recover_eigenvector(r, Vector::Zero(4)).norm(), 0.0);
  EXPECT_THROW(recover_eigenvector(r, Vector::Zero(3)), InvalidArgument);
}

TEST(RecoverEigenvector, LiftsQuotientEigenvectors) {
  const Matrix a = a0();
  const auto r = block_triangularize(a, WeightedIndicator::unit(pi0()));
  Eigen::ComplexEigenSolver<Matrix> es(r.E);
  for (Index c = 0; c < 3; ++c) {
    Vector zhat = Vector::Zero(6);
    zhat.head(3) = es.eigenvectors().col(c);
    const Vector z = recover_eigenvector(r, zhat);
    EXPECT_LT((a * z - es.eigenvalues()(c) * z).norm(), 1e-12 * a.norm());
  }
}

TEST(RecoverEigenvector, GeneralEigenpairs) {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    const Index n = rng.integer(2, 20);
    const Matrix a = random_complex(rng, n, n);
    const auto r = block_triangularize(a, random_instance(rng, n));
    Eigen::ComplexEigenSolver<Matrix> es(r.assembled());
    for (Index c = 0; c < n; ++c) {
      const Vector z = recover_eigenvector(r, es.eigenvectors().col(c));
      EXPECT_LT((a * z - es.eigenvalues()(c) * z).norm(), 1e-10 * a.norm());
    }
  }
}

TEST(SpectrumSplit, WorkedExample) {
  const auto r = block_triangularize(a0(), WeightedIndicator::unit(pi0()));
  const auto s = spectrum_split(r, 1e-10);
  EXPECT_TRUE(s.exact);
  std::vector<Complex> joint = s.eigs_E;
  joint.insert(joint.end(), s.eigs_F.begin(), s.eigs_F.end());
  EXPECT_LT(max_matched_gap(joint, eigenvalues(a0())), 1e-9);
}

TEST(SpectrumSplit, SingletonDiagonal) {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 1.0, 2.0, 3.0;
  const auto s =
      spectrum_split(block_triangularize(a, WeightedIndicator::unit(Partition::singletons(3))), 0);
  EXPECT_TRUE(s.eigs_F.empty());
  ASSERT_EQ(s.eigs_E.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(s.eigs_E[i] - Complex(i + 1.0, 0.0)), 0, 1e-14);
}

TEST(SpectrumSplit, PlantedQuotientSpectrumContained) {
  Rng rng(18);
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.integer(3, 40);
    const Partition p = random_partition(rng, n, rng.integer(1, std::min<Index>(n, 6)));
    const Matrix theta = random_real(rng, p.num_cells(), p.num_cells());
    const Matrix a = planted_front_equitable(rng, p, theta, 0.0);
    const auto s = spectrum_split(block_triangularize(a, WeightedIndicator::unit(p)), 1e-10);
    EXPECT_TRUE(s.exact);
    EXPECT_LT(max_matched_gap(s.eigs_E, eigenvalues(theta)), 1e-9);
  }
}

TEST(Eigenvalues, AgreeWithCharacteristicPolynomial) {
  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const Index n = rng.integer(1, 5);
    const Matrix a = random_complex(rng, n, n);
    const auto coeffs = characteristic_polynomial(a);
    for (const Complex& lambda : eigenvalues(a)) {
      EXPECT_LT(charpoly_relative_residual(coeffs, lambda), 1e-12);
    }
    const Matrix h = random_hermitian(rng, n);
    const auto hc = characteristic_polynomial(h);
    for (const Complex& lambda : eigenvalues(h, true)) {
      EXPECT_LT(charpoly_relative_residual(hc, lambda), 1e-12);
    }
  }
  EXPECT_THROW(eigenvalues(Matrix::Zero(2, 3)), InvalidArgument);
}
