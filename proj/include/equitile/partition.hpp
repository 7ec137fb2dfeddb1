#pragma once

#include <optional>
#include <vector>

#include "equitile/permutation.hpp"
#include "equitile/types.hpp"

namespace equitile {

/// Ordered partition of {0..N-1} into k non-empty cells.
///
/// Cell order is kept as given; indices inside a cell are stored ascending.
/// The canonical form additionally orders cells by their smallest element.
class Partition {
 public:
  Partition() = default;
  /// Throws InvalidArgument unless the cells are non-empty, pairwise disjoint
  /// and cover {0..n-1} exactly.
  Partition(Index n, std::vector<std::vector<Index>> cells);

  static Partition singletons(Index n);
  static Partition single_cell(Index n);
  /// Cells are the label classes, ordered by first occurrence.
  static Partition from_labels(const std::vector<Index>& labels);

  Index size() const { return n_; }
  Index num_cells() const { return static_cast<Index>(cells_.size()); }
  const std::vector<std::vector<Index>>& cells() const { return cells_; }
  const std::vector<Index>& cell(Index i) const { return cells_[static_cast<std::size_t>(i)]; }
  Index cell_size(Index i) const { return static_cast<Index>(cell(i).size()); }
  std::vector<Index> cell_sizes() const;
  /// cell_of()[v] is the cell containing v.
  const std::vector<Index>& cell_of() const { return cell_of_; }

  Partition canonical() const;
  bool is_canonical() const;
  /// True if every cell of *this lies inside a cell of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_ == b.n_ && a.cells_ == b.cells_;
  }

 private:
  Index n_ = 0;
  std::vector<std::vector<Index>> cells_;
  std::vector<Index> cell_of_;
};

/// Partition plus a complex weight per index (the matrix W = diag(w) B).
class WeightedIndicator {
 public:
  WeightedIndicator(Partition partition, Vector weights);
  static WeightedIndicator unit(Partition partition);

  const Partition& partition() const { return partition_; }
  const Vector& weights() const { return weights_; }
  Index size() const { return partition_.size(); }
  Index num_cells() const { return partition_.num_cells(); }

  /// Weights of cell i in ascending index order.
  Vector block(Index i) const;
  /// ‖w_i‖², accumulated as a plain sum of |w_v|² (exact for unit weights).
  double block_norm_squared(Index i) const;
  RealVector block_norms_squared() const;

  bool is_admissible() const;
  /// Throws InvalidArgument naming the first cell whose weight block vanishes.
  void require_admissible() const;

  /// Dense N×k matrix W.
  Matrix dense() const;

 private:
  Partition partition_;
  Vector weights_;
};

inline bool is_admissible(const WeightedIndicator& wi) { return wi.is_admissible(); }

/// Dense N×k indicator matrix B.
RealMatrix indicator_matrix(const Partition& p);

/// Relabeling that makes every cell occupy a contiguous index range, in cell
/// order. Indices already inside their cell's target range keep their
/// position; the remaining ones fill the free slots in ascending order.
Permutation suitable_indexing_permutation(const Partition& p);

struct EquitabilityVerdict {
  Side side = Side::front;
  bool is_equitable = false;
  double tolerance = 0.0;
  double max_residual = 0.0;
  /// (i, j) holds ‖t_ij‖ for the requested side.
  RealMatrix per_block_residuals;
};

EquitabilityVerdict check_equitable(const Matrix& a, const WeightedIndicator& wi, Side side,
                                    double tol);

/// Smallest ε for which p is ε-equitable: the largest spread |r_v - r_w| of
/// block row sums over all blocks.
double epsilon_equitability(const Matrix& a, const Partition& p);

/// True iff every block row-sum vector is either entrywise nonzero or all zero.
/// Row sums with modulus <= zero_tol count as zero.
bool check_regular_equivalence(const Matrix& a, const Partition& p, double zero_tol = 0.0);

struct RefinementOptions {
  /// Absolute tolerance when comparing colors; 0 means exact comparison.
  double color_tol = 0.0;
  /// Use the OpenMP color kernel.
  bool parallel = true;
};

/// Coarsest refinement of `initial` w.r.t. which `a` is (unit-weight) front
/// equitable. Output is canonical.
Partition coarsest_front_equitable_refinement(const Matrix& a, const Partition& initial,
                                              const RefinementOptions& options = {});

/// Refinement of diag(w)^-1 A diag(w); the result paired with w is front
/// equitable in the weighted sense. Every weight must be nonzero.
Partition weighted_refinement(const Matrix& a, const Vector& weights, const Partition& initial,
                              const RefinementOptions& options = {});

}  // namespace equitile
