#pragma once

#include <vector>

#include "equitile/permutation.hpp"
#include "equitile/types.hpp"

namespace equitile {

/// Block-diagonal matrix kept as its list of diagonal blocks.
struct BlockDiagonal {
  std::vector<Matrix> blocks;

  Index rows() const;
  Index cols() const;
  std::vector<Index> row_sizes() const;
  std::vector<Index> col_sizes() const;
  Matrix dense() const;

  /// Extracts the blocks from a dense matrix. Throws InvalidArgument if the
  /// sizes do not add up or an off-block entry exceeds `off_block_tol`.
  static BlockDiagonal from_dense(const Matrix& m, const std::vector<Index>& row_sizes,
                                  const std::vector<Index>& col_sizes, double off_block_tol = 0.0);
};

/// The n×r matrix [I_r; 0].
RealMatrix padded_identity(Index n, Index r);
/// diag([I_{r_1}; 0], ..., [I_{r_k}; 0]).
RealMatrix padded_identity(const std::vector<Index>& n_sizes, const std::vector<Index>& r_sizes);

/// Sends the first r_i indices of block i into the leading r positions (block
/// order) and the remaining indices, order preserved, behind them.
Permutation omega_nr_permutation(const std::vector<Index>& r_sizes,
                                 const std::vector<Index>& n_sizes);

/// Full SVD of one m_i×q_i block: source = U [I; 0] diag(singular) V'.
struct SvdFactor {
  Matrix u;              // m_i × m_i unitary
  RealVector singular;   // q_i, positive, descending
  Matrix v;              // q_i × q_i unitary
};

class BlockSVD {
 public:
  /// Validates each factor against its block (reconstruction within
  /// 1e-12·‖W_i‖_F, unitarity, positive singular values).
  BlockSVD(BlockDiagonal source, std::vector<SvdFactor> factors);

  const BlockDiagonal& source() const { return source_; }
  const std::vector<SvdFactor>& factors() const { return factors_; }
  const Permutation& omega() const { return omega_; }
  std::vector<Index> outer_sizes() const { return source_.row_sizes(); }
  std::vector<Index> inner_sizes() const { return source_.col_sizes(); }
  Index outer() const { return source_.rows(); }
  Index inner() const { return source_.cols(); }

  /// Dense block-diagonal U.
  Matrix u() const;
  /// Dense block-diagonal V.
  Matrix v() const;
  /// Singular values in block order.
  RealVector n_diagonal() const;
  /// U [I; 0] V' per block = W (W'W)^{-1/2}.
  Matrix orthonormal_factor() const;

 private:
  BlockDiagonal source_;
  std::vector<SvdFactor> factors_;
  Permutation omega_;
};

/// Per-block full SVD. Blocks with one column use the reflector
/// H(w, β0(w)); wider blocks use a Jacobi SVD. Throws RankDeficient when a
/// block's smallest singular value is <= 1e-10 times its largest.
BlockSVD block_svd(const BlockDiagonal& w);

/// (W⁻'W⁻)^{-1/2} W⁻' A W⁺ (W⁺'W⁺)^{-1/2}, Gram roots per block.
Matrix rayleigh_quotient_rect(const Matrix& a, const BlockDiagonal& wminus,
                              const BlockDiagonal& wplus);

struct RectDeviation {
  Matrix t_minus;  // m × r
  Matrix t_plus;   // n × q
};

/// Closed-form deviation matrices from the side matrices alone.
RectDeviation deviation_rect(const Matrix& a, const BlockDiagonal& wminus,
                             const BlockDiagonal& wplus);

/// E⁰ and T± computed from the given SVD factors (blockwise definitions).
Matrix rayleigh_quotient_from_factors(const Matrix& a, const BlockSVD& left, const BlockSVD& right);
RectDeviation deviation_from_factors(const Matrix& a, const BlockSVD& left, const BlockSVD& right);

struct RectResult {
  Matrix E;            // q × r
  Matrix D_minus;      // (m - q) × r
  Matrix D_plus_conj;  // q × (n - r)
  Matrix F;            // (m - q) × (n - r)
  BlockSVD left;
  BlockSVD right;

  Matrix assembled() const;
  Matrix D_plus() const { return D_plus_conj.adjoint(); }
  /// V⁻ E V⁺' (equals the Rayleigh quotient E⁰).
  Matrix rayleigh_quotient() const;
};

/// Â = Ω⁻'U⁻' A U⁺Ω⁺ sliced into its 2×2 block form.
RectResult rect_transform(const Matrix& a, const BlockSVD& left, const BlockSVD& right);

}  // namespace equitile
