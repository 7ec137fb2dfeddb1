#pragma once

#include "equitile/partition.hpp"
#include "equitile/types.hpp"

namespace equitile::detail {

void require_square(const Matrix& a, Index n, const char* what);

/// A W as an N×k matrix.
Matrix weighted_aggregate(const Matrix& a, const WeightedIndicator& wi);

/// W' M for an N×k matrix M, giving k×k.
Matrix project_cells(const WeightedIndicator& wi, const Matrix& m);

/// Assembled T⁻ or T⁺ in the original indexing.
Matrix deviation_assembled(const Matrix& a, const WeightedIndicator& wi, Side side);

/// (i, j) -> ‖t_ij‖ for an assembled deviation matrix.
RealMatrix deviation_block_norms(const Matrix& t, const Partition& p, Side side);

}  // namespace equitile::detail
