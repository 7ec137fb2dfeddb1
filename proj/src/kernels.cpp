#include "equitile/kernels.hpp"

#include <algorithm>

#include <omp.h>

namespace equitile::kernels {

namespace {

constexpr Index kRowChunk = 64;

void check_layout(const BlockLayout& layout, Index extent, const char* what) {
  if (layout.blocks.size() != layout.offsets.size()) {
    throw InvalidArgument(std::string(what) + ": block and offset counts differ");
  }
  Index expected = 0;
  for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
    if (layout.offsets[b] != expected) {
      throw InvalidArgument(std::string(what) + ": blocks are not contiguous");
    }
    expected += layout.blocks[b].dim();
  }
  if (expected != extent) {
    throw InvalidArgument(std::string(what) + ": blocks cover " + std::to_string(expected) +
                          " indices, matrix has " + std::to_string(extent));
  }
}

}  // namespace

void apply_block_left_serial(Matrix& m, const BlockLayout& layout, OpCounter* counter) {
  check_layout(layout, m.rows(), "apply_block_left");
  std::uint64_t ops = 0;
  for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
    const ElementaryUnitary& h = layout.blocks[b];
    if (h.is_identity()) continue;
    const Index off = layout.offsets[b];
    const Index n = h.dim();
    const Vector& y = h.direction();
    const Complex cbar = std::conj(h.coeff());
    for (Index col = 0; col < m.cols(); ++col) {
      Complex dot(0.0, 0.0);
      for (Index r = 0; r < n; ++r) dot += std::conj(y(r)) * m(off + r, col);
      dot *= cbar;
      for (Index r = 0; r < n; ++r) m(off + r, col) += y(r) * dot;
      ops += 2 * static_cast<std::uint64_t>(n);
    }
  }
  if (counter != nullptr) counter->multiply_adds += ops;
}

void apply_block_left_parallel(Matrix& m, const BlockLayout& layout) {
  check_layout(layout, m.rows(), "apply_block_left");
  const Index cols = m.cols();
#pragma omp parallel for schedule(static)
  for (Index col = 0; col < cols; ++col) {
    for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
      const ElementaryUnitary& h = layout.blocks[b];
      if (h.is_identity()) continue;
      auto seg = m.col(col).segment(layout.offsets[b], h.dim());
      const Complex d = std::conj(h.coeff()) * h.direction().dot(seg);
      seg += d * h.direction();
    }
  }
}

void apply_block_right_serial(Matrix& m, const BlockLayout& layout, OpCounter* counter) {
  check_layout(layout, m.cols(), "apply_block_right");
  std::uint64_t ops = 0;
  for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
    const ElementaryUnitary& h = layout.blocks[b];
    if (h.is_identity()) continue;
    const Index off = layout.offsets[b];
    const Index n = h.dim();
    const Vector& y = h.direction();
    for (Index row = 0; row < m.rows(); ++row) {
      Complex s(0.0, 0.0);
      for (Index c = 0; c < n; ++c) s += m(row, off + c) * y(c);
      s *= h.coeff();
      for (Index c = 0; c < n; ++c) m(row, off + c) += s * std::conj(y(c));
      ops += 2 * static_cast<std::uint64_t>(n);
    }
  }
  if (counter != nullptr) counter->multiply_adds += ops;
}

void apply_block_right_parallel(Matrix& m, const BlockLayout& layout) {
  check_layout(layout, m.cols(), "apply_block_right");
  const Index rows = m.rows();
  const Index chunks = (rows + kRowChunk - 1) / kRowChunk;
#pragma omp parallel for schedule(static)
  for (Index chunk = 0; chunk < chunks; ++chunk) {
    const Index r0 = chunk * kRowChunk;
    const Index len = std::min(kRowChunk, rows - r0);
    for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
      const ElementaryUnitary& h = layout.blocks[b];
      if (h.is_identity()) continue;
      auto blk = m.block(r0, layout.offsets[b], len, h.dim());
      const Vector s = h.coeff() * (blk * h.direction());
      blk.noalias() += s * h.direction().adjoint();
    }
  }
}

void apply_block_two_sided_serial(Matrix& m, const BlockLayout& layout, OpCounter* counter) {
  apply_block_left_serial(m, layout, counter);
  apply_block_right_serial(m, layout, counter);
}

void apply_block_two_sided_parallel(Matrix& m, const BlockLayout& layout) {
  apply_block_left_parallel(m, layout);
  apply_block_right_parallel(m, layout);
}

namespace {

void check_aggregate(const Matrix& a, std::span<const Index> cell_of, Index num_cells,
                     const Vector& weights) {
  if (static_cast<Index>(cell_of.size()) != a.cols() || weights.size() != a.cols()) {
    throw InvalidArgument("aggregate_by_cell: labels/weights do not match the column count");
  }
  for (Index c : cell_of) {
    if (c < 0 || c >= num_cells) throw InvalidArgument("aggregate_by_cell: label out of range");
  }
}

}  // namespace

Matrix aggregate_by_cell_serial(const Matrix& a, std::span<const Index> cell_of, Index num_cells,
                                const Vector& weights) {
  check_aggregate(a, cell_of, num_cells, weights);
  Matrix r = Matrix::Zero(a.rows(), num_cells);
  for (Index u = 0; u < a.cols(); ++u) {
    const Index j = cell_of[static_cast<std::size_t>(u)];
    const Complex wu = weights(u);
    for (Index v = 0; v < a.rows(); ++v) r(v, j) += a(v, u) * wu;
  }
  return r;
}

Matrix aggregate_by_cell_parallel(const Matrix& a, std::span<const Index> cell_of,
                                  Index num_cells, const Vector& weights) {
  check_aggregate(a, cell_of, num_cells, weights);
  Matrix r = Matrix::Zero(a.rows(), num_cells);
  const Index rows = a.rows();
  const Index chunks = (rows + kRowChunk - 1) / kRowChunk;
#pragma omp parallel for schedule(static)
  for (Index chunk = 0; chunk < chunks; ++chunk) {
    const Index r0 = chunk * kRowChunk;
    const Index len = std::min(kRowChunk, rows - r0);
    for (Index u = 0; u < a.cols(); ++u) {
      r.col(cell_of[static_cast<std::size_t>(u)]).segment(r0, len) +=
          a.col(u).segment(r0, len) * weights(u);
    }
  }
  return r;
}

}  // namespace equitile::kernels
