#include "detail/aggregate.hpp"

#include <cmath>
#include <span>

#include "equitile/kernels.hpp"

namespace equitile::detail {

void require_square(const Matrix& a, Index n, const char* what) {
  if (a.rows() != n || a.cols() != n) {
    throw InvalidArgument(std::string(what) + ": expected a " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix, got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()));
  }
}

Matrix weighted_aggregate(const Matrix& a, const WeightedIndicator& wi) {
  const auto& cell_of = wi.partition().cell_of();
  return kernels::aggregate_by_cell_parallel(a, std::span<const Index>(cell_of), wi.num_cells(),
                                             wi.weights());
}

Matrix project_cells(const WeightedIndicator& wi, const Matrix& m) {
  const auto& cell_of = wi.partition().cell_of();
  const Vector& w = wi.weights();
  Matrix out = Matrix::Zero(wi.num_cells(), m.cols());
  for (Index v = 0; v < m.rows(); ++v) {
    out.row(cell_of[static_cast<std::size_t>(v)]) += std::conj(w(v)) * m.row(v);
  }
  return out;
}

Matrix deviation_assembled(const Matrix& a, const WeightedIndicator& wi, Side side) {
  wi.require_admissible();
  require_square(a, wi.size(), "deviation");
  const auto& cell_of = wi.partition().cell_of();
  const Vector& w = wi.weights();
  const RealVector nsq = wi.block_norms_squared();
  const Index k = wi.num_cells();

  if (side == Side::front) {
    const Matrix aw = weighted_aggregate(a, wi);
    const Matrix s = project_cells(wi, aw);  // W'AW
    Matrix t(a.rows(), k);
    for (Index j = 0; j < k; ++j) {
      const double inv_norm = 1.0 / std::sqrt(nsq(j));
      for (Index v = 0; v < a.rows(); ++v) {
        const Index i = cell_of[static_cast<std::size_t>(v)];
        const Complex e_minus = s(i, j) / nsq(i);
        t(v, j) = (aw(v, j) - e_minus * w(v)) * inv_norm;
      }
    }
    return t;
  }

  const Matrix adj = a.adjoint();
  const Matrix bw = weighted_aggregate(adj, wi);  // A'W
  const Matrix s = project_cells(wi, bw).adjoint();  // W'AW
  Matrix t(a.rows(), k);
  for (Index i = 0; i < k; ++i) {
    const double inv_norm = 1.0 / std::sqrt(nsq(i));
    for (Index v = 0; v < a.rows(); ++v) {
      const Index j = cell_of[static_cast<std::size_t>(v)];
      const Complex e_plus = s(i, j) / nsq(j);
      t(v, i) = (bw(v, i) - w(v) * std::conj(e_plus)) * inv_norm;
    }
  }
  return t;
}

RealMatrix deviation_block_norms(const Matrix& t, const Partition& p, Side side) {
  const Index k = p.num_cells();
  RealMatrix sq = RealMatrix::Zero(k, k);
  const auto& cell_of = p.cell_of();
  for (Index col = 0; col < k; ++col) {
    for (Index v = 0; v < t.rows(); ++v) {
      const Index row_cell = cell_of[static_cast<std::size_t>(v)];
      const double mag = std::norm(t(v, col));
      if (side == Side::front) {
        sq(row_cell, col) += mag;
      } else {
        sq(col, row_cell) += mag;
      }
    }
  }
  return sq.cwiseSqrt();
}

}  // namespace equitile::detail
