#pragma once

#include <optional>
#include <vector>

#include "equitile/partition.hpp"
#include "equitile/permutation.hpp"
#include "equitile/reflector.hpp"
#include "equitile/types.hpp"

namespace equitile {

/// H(W, V) in block-contiguous (suitably indexed) layout: one elementary
/// unitary per cell, built from that cell's weights and phase.
class BlockReflector {
 public:
  BlockReflector(std::vector<ElementaryUnitary> blocks, std::vector<Phase> phases);

  Index size() const { return offsets_.back(); }
  Index num_blocks() const { return static_cast<Index>(blocks_.size()); }
  const std::vector<ElementaryUnitary>& blocks() const { return blocks_; }
  const ElementaryUnitary& block(Index i) const { return blocks_[static_cast<std::size_t>(i)]; }
  const std::vector<Phase>& phases() const { return phases_; }
  /// offsets()[i] is the first index of block i; offsets().back() == N.
  const std::vector<Index>& offsets() const { return offsets_; }
  std::vector<Index> block_sizes() const;

  /// M <- H̃' M H̃ (OpenMP kernel).
  void transform_in_place(Matrix& m) const;
  /// H̃ v.
  Vector apply(const Vector& v) const;
  Matrix dense() const;

 private:
  std::vector<ElementaryUnitary> blocks_;
  std::vector<Phase> phases_;
  std::vector<Index> offsets_;
};

struct QuotientMatrix {
  double alpha = 0.0;
  Matrix entries;
};

/// Front (T⁻, N×k) or rear (T⁺, N×k) deviation matrix in the original indexing.
class DeviationMatrix {
 public:
  DeviationMatrix(Side side, Partition partition, Matrix assembled);

  Side side() const { return side_; }
  const Partition& partition() const { return partition_; }
  const Matrix& assembled() const { return assembled_; }
  /// t_ij: for the front side the rows of cell i in column j (length n_i); for
  /// the rear side the rows of cell j in column i (length n_j).
  Vector block(Index i, Index j) const;
  /// (i, j) -> ‖t_ij‖.
  RealMatrix block_norms() const;
  bool is_zero(double tol = 0.0) const;

 private:
  Side side_;
  Partition partition_;
  Matrix assembled_;
};

struct DeviationPair {
  DeviationMatrix front;
  DeviationMatrix rear;
};

/// Â = Ω'H̃'P'AP H̃Ω in 2×2 block form [[E, D_plus_conj], [D_minus, F]].
struct TriangularizationResult {
  Matrix E;
  Matrix D_minus;
  Matrix D_plus_conj;
  Matrix F;
  BlockReflector reflector;
  Permutation omega;
  Permutation pre_permutation;

  Index size() const { return E.rows() + F.rows(); }
  Index num_cells() const { return E.rows(); }
  Matrix assembled() const;
  /// H̃'P'AP H̃, i.e. Â before the Ω permutation.
  Matrix transformed() const;
  Matrix D_plus() const { return D_plus_conj.adjoint(); }
};

using PhaseChoice = std::optional<std::vector<Phase>>;  // nullopt = β0 per cell

QuotientMatrix generalized_quotient(const Matrix& a, const WeightedIndicator& wi, double alpha);

DeviationPair deviation_matrices(const Matrix& a, const WeightedIndicator& wi);
DeviationMatrix front_deviation(const Matrix& a, const WeightedIndicator& wi);
DeviationMatrix rear_deviation(const Matrix& a, const WeightedIndicator& wi);

/// Per-cell reflectors built from the weight blocks taken in suitably indexed
/// order (see suitable_indexing_permutation).
BlockReflector build_block_reflector(const WeightedIndicator& wi, const PhaseChoice& phases = {});

/// Ω: the first index of every block goes to positions 0..k-1 in block order,
/// the remaining indices keep their relative order behind them.
Permutation omega_permutation(const std::vector<Index>& sizes);

TriangularizationResult block_triangularize(const Matrix& a, const WeightedIndicator& wi,
                                            const PhaseChoice& phases = {});

/// z = P H̃ Ω ẑ.
Vector recover_eigenvector(const TriangularizationResult& r, const Vector& z_hat);

struct SpectrumSplit {
  std::vector<Complex> eigs_E;
  std::vector<Complex> eigs_F;
  bool exact = false;
};

SpectrumSplit spectrum_split(const TriangularizationResult& r, double tol);

/// Eigenvalues of a dense square matrix, sorted by (real, imag). Uses the
/// Hermitian solver when `hermitian` is set. Throws NumericalFailure.
std::vector<Complex> eigenvalues(const Matrix& m, bool hermitian = false);

}  // namespace equitile
