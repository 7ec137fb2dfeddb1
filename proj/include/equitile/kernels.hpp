#pragma once

// Data-parallel inner loops. Each kernel comes as an OpenMP version used by
// the pipeline and a plain serial reference used by tests, the benchmark and
// operation counting.

#include <cstdint>
#include <span>
#include <vector>

#include "equitile/reflector.hpp"
#include "equitile/types.hpp"

namespace equitile::kernels {

/// Scalar multiply-add counter filled in by the serial kernels.
struct OpCounter {
  std::uint64_t multiply_adds = 0;
};

/// Block-diagonal arrangement of elementary unitaries: block i acts on the
/// index range [offsets[i], offsets[i] + blocks[i].dim()).
struct BlockLayout {
  std::span<const ElementaryUnitary> blocks;
  std::span<const Index> offsets;
};

/// M <- H' M where H = diag(blocks).
void apply_block_left_serial(Matrix& m, const BlockLayout& layout, OpCounter* counter = nullptr);
void apply_block_left_parallel(Matrix& m, const BlockLayout& layout);

/// M <- M H.
void apply_block_right_serial(Matrix& m, const BlockLayout& layout, OpCounter* counter = nullptr);
void apply_block_right_parallel(Matrix& m, const BlockLayout& layout);

/// M <- H' M H.
void apply_block_two_sided_serial(Matrix& m, const BlockLayout& layout,
                                  OpCounter* counter = nullptr);
void apply_block_two_sided_parallel(Matrix& m, const BlockLayout& layout);

/// R(v, j) = sum over u in cell j of A(v, u) * w[u]. With unit weights these
/// are the block row sums ("colors"); in general R = A W.
Matrix aggregate_by_cell_serial(const Matrix& a, std::span<const Index> cell_of, Index num_cells,
                                const Vector& weights);
Matrix aggregate_by_cell_parallel(const Matrix& a, std::span<const Index> cell_of,
                                  Index num_cells, const Vector& weights);

}  // namespace equitile::kernels
