#include "equitile/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "detail/aggregate.hpp"
#include "equitile/kernels.hpp"

namespace equitile {

Partition::Partition(Index n, std::vector<std::vector<Index>> cells)
    : n_(n), cells_(std::move(cells)), cell_of_(static_cast<std::size_t>(n), -1) {
  if (n < 0) throw InvalidArgument("partition size must be non-negative");
  Index covered = 0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    auto& cell = cells_[i];
    if (cell.empty()) throw InvalidArgument("partition cell " + std::to_string(i) + " is empty");
    std::sort(cell.begin(), cell.end());
    for (Index v : cell) {
      if (v < 0 || v >= n) {
        throw InvalidArgument("partition index " + std::to_string(v) + " outside [0, " +
                              std::to_string(n) + ")");
      }
      auto& slot = cell_of_[static_cast<std::size_t>(v)];
      if (slot != -1) throw InvalidArgument("partition index " + std::to_string(v) + " repeated");
      slot = static_cast<Index>(i);
      ++covered;
    }
  }
  if (covered != n) throw InvalidArgument("partition cells do not cover every index");
}

Partition Partition::singletons(Index n) {
  std::vector<std::vector<Index>> cells(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) cells[static_cast<std::size_t>(v)] = {v};
  return Partition(n, std::move(cells));
}

Partition Partition::single_cell(Index n) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  return Partition(n, {std::move(all)});
}

Partition Partition::from_labels(const std::vector<Index>& labels) {
  std::vector<std::vector<Index>> cells;
  std::vector<std::pair<Index, std::size_t>> seen;  // label -> cell slot
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& s) { return s.first == labels[v]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[v], cells.size());
      cells.push_back({static_cast<Index>(v)});
    } else {
      cells[it->second].push_back(static_cast<Index>(v));
    }
  }
  return Partition(static_cast<Index>(labels.size()), std::move(cells));
}

std::vector<Index> Partition::cell_sizes() const {
  std::vector<Index> sizes;
  sizes.reserve(cells_.size());
  for (const auto& c : cells_) sizes.push_back(static_cast<Index>(c.size()));
  return sizes;
}

Partition Partition::canonical() const {
  auto cells = cells_;
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return Partition(n_, std::move(cells));
}

bool Partition::is_canonical() const {
  for (std::size_t i = 1; i < cells_.size(); ++i) {
    if (cells_[i - 1].front() > cells_[i].front()) return false;
  }
  return true;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.size() != n_) return false;
  for (const auto& cell : cells_) {
    const Index target = coarser.cell_of()[static_cast<std::size_t>(cell.front())];
    for (Index v : cell) {
      if (coarser.cell_of()[static_cast<std::size_t>(v)] != target) return false;
    }
  }
  return true;
}

WeightedIndicator::WeightedIndicator(Partition partition, Vector weights)
    : partition_(std::move(partition)), weights_(std::move(weights)) {
  if (weights_.size() != partition_.size()) {
    throw InvalidArgument("weight vector has length " + std::to_string(weights_.size()) +
                          " but the partition covers " + std::to_string(partition_.size()) +
                          " indices");
  }
}

WeightedIndicator WeightedIndicator::unit(Partition partition) {
  const Index n = partition.size();
  return WeightedIndicator(std::move(partition), Vector::Ones(n));
}

Vector WeightedIndicator::block(Index i) const {
  const auto& cell = partition_.cell(i);
  Vector out(static_cast<Index>(cell.size()));
  for (std::size_t r = 0; r < cell.size(); ++r) out(static_cast<Index>(r)) = weights_(cell[r]);
  return out;
}

double WeightedIndicator::block_norm_squared(Index i) const {
  double s = 0.0;
  for (Index v : partition_.cell(i)) s += std::norm(weights_(v));
  return s;
}

RealVector WeightedIndicator::block_norms_squared() const {
  RealVector out(num_cells());
  for (Index i = 0; i < num_cells(); ++i) out(i) = block_norm_squared(i);
  return out;
}

bool WeightedIndicator::is_admissible() const {
  for (Index i = 0; i < num_cells(); ++i) {
    if (!(block_norm_squared(i) > 0.0)) return false;
  }
  return true;
}

void WeightedIndicator::require_admissible() const {
  for (Index i = 0; i < num_cells(); ++i) {
    if (!(block_norm_squared(i) > 0.0)) {
      throw InvalidArgument("weighted indicator is not admissible: cell " + std::to_string(i) +
                            " has a zero weight block");
    }
  }
}

Matrix WeightedIndicator::dense() const {
  Matrix w = Matrix::Zero(size(), num_cells());
  for (Index v = 0; v < size(); ++v) w(v, partition_.cell_of()[static_cast<std::size_t>(v)]) = weights_(v);
  return w;
}

RealMatrix indicator_matrix(const Partition& p) {
  RealMatrix b = RealMatrix::Zero(p.size(), p.num_cells());
  for (Index v = 0; v < p.size(); ++v) b(v, p.cell_of()[static_cast<std::size_t>(v)]) = 1.0;
  return b;
}

Permutation suitable_indexing_permutation(const Partition& p) {
  std::vector<Index> forward(static_cast<std::size_t>(p.size()), -1);
  Index start = 0;
  for (const auto& cell : p.cells()) {
    const Index stop = start + static_cast<Index>(cell.size());
    std::vector<bool> taken(cell.size(), false);
    std::vector<Index> displaced;
    for (Index v : cell) {
      if (v >= start && v < stop) {
        forward[static_cast<std::size_t>(v)] = v;
        taken[static_cast<std::size_t>(v - start)] = true;
      } else {
        displaced.push_back(v);
      }
    }
    std::size_t next = 0;
    for (Index v : displaced) {
      while (taken[next]) ++next;
      forward[static_cast<std::size_t>(v)] = start + static_cast<Index>(next);
      taken[next] = true;
    }
    start = stop;
  }
  return Permutation(std::move(forward));
}

EquitabilityVerdict check_equitable(const Matrix& a, const WeightedIndicator& wi, Side side,
                                    double tol) {
  wi.require_admissible();
  detail::require_square(a, wi.size(), "check_equitable");
  const Matrix t = detail::deviation_assembled(a, wi, side);
  EquitabilityVerdict verdict;
  verdict.side = side;
  verdict.tolerance = tol;
  verdict.per_block_residuals = detail::deviation_block_norms(t, wi.partition(), side);
  verdict.max_residual =
      verdict.per_block_residuals.size() == 0 ? 0.0 : verdict.per_block_residuals.maxCoeff();
  verdict.is_equitable = verdict.max_residual <= tol;
  return verdict;
}

namespace {

Matrix block_row_sums(const Matrix& a, const Partition& p, bool parallel) {
  const auto& cell_of = p.cell_of();
  const Vector ones = Vector::Ones(p.size());
  const std::span<const Index> labels(cell_of);
  return parallel ? kernels::aggregate_by_cell_parallel(a, labels, p.num_cells(), ones)
                  : kernels::aggregate_by_cell_serial(a, labels, p.num_cells(), ones);
}

// Splits `members` into runs whose key (real or imaginary part of a color)
// chains within `tol`.
template <typename Key>
std::vector<std::vector<Index>> chain_split(std::vector<Index> members, Key key, double tol) {
  std::stable_sort(members.begin(), members.end(),
                   [&](Index a, Index b) { return key(a) < key(b); });
  std::vector<std::vector<Index>> groups;
  for (std::size_t r = 0; r < members.size(); ++r) {
    if (r == 0 || std::abs(key(members[r]) - key(members[r - 1])) > tol) groups.emplace_back();
    groups.back().push_back(members[r]);
  }
  return groups;
}

// Groups by complex color: real parts first, then imaginary parts.
std::vector<std::vector<Index>> split_by_color(const std::vector<Index>& members,
                                               const Matrix& colors, Index column, double tol) {
  std::vector<std::vector<Index>> out;
  auto by_real = chain_split(members, [&](Index v) { return colors(v, column).real(); }, tol);
  for (auto& group : by_real) {
    auto by_imag =
        chain_split(std::move(group), [&](Index v) { return colors(v, column).imag(); }, tol);
    for (auto& g : by_imag) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

double epsilon_equitability(const Matrix& a, const Partition& p) {
  detail::require_square(a, p.size(), "epsilon_equitability");
  const Matrix r = block_row_sums(a, p, true);
  double eps = 0.0;
  for (const auto& cell : p.cells()) {
    for (Index j = 0; j < p.num_cells(); ++j) {
      for (std::size_t x = 0; x < cell.size(); ++x) {
        for (std::size_t y = x + 1; y < cell.size(); ++y) {
          eps = std::max(eps, std::abs(r(cell[x], j) - r(cell[y], j)));
        }
      }
    }
  }
  return eps;
}

bool check_regular_equivalence(const Matrix& a, const Partition& p, double zero_tol) {
  detail::require_square(a, p.size(), "check_regular_equivalence");
  const Matrix r = block_row_sums(a, p, true);
  for (const auto& cell : p.cells()) {
    for (Index j = 0; j < p.num_cells(); ++j) {
      std::size_t zeros = 0;
      for (Index v : cell) {
        if (std::abs(r(v, j)) <= zero_tol) ++zeros;
      }
      if (zeros != 0 && zeros != cell.size()) return false;
    }
  }
  return true;
}

Partition coarsest_front_equitable_refinement(const Matrix& a, const Partition& initial,
                                              const RefinementOptions& options) {
  detail::require_square(a, initial.size(), "coarsest_front_equitable_refinement");
  Partition current = initial.canonical();
  while (true) {
    const Matrix colors = block_row_sums(a, current, options.parallel);
    std::vector<std::vector<Index>> next;
    for (const auto& cell : current.cells()) {
      std::vector<std::vector<Index>> groups{cell};
      for (Index j = 0; j < current.num_cells(); ++j) {
        std::vector<std::vector<Index>> split;
        for (const auto& g : groups) {
          for (auto& sub : split_by_color(g, colors, j, options.color_tol)) {
            split.push_back(std::move(sub));
          }
        }
        groups = std::move(split);
      }
      for (auto& g : groups) next.push_back(std::move(g));
    }
    if (static_cast<Index>(next.size()) == current.num_cells()) return current;
    current = Partition(a.rows(), std::move(next)).canonical();
  }
}

Partition weighted_refinement(const Matrix& a, const Vector& weights, const Partition& initial,
                              const RefinementOptions& options) {
  detail::require_square(a, initial.size(), "weighted_refinement");
  if (weights.size() != a.rows()) {
    throw InvalidArgument("weight vector length does not match the matrix");
  }
  for (Index v = 0; v < weights.size(); ++v) {
    if (weights(v) == Complex(0.0, 0.0)) {
      throw InvalidArgument("weighted refinement needs nonzero weights; entry " +
                            std::to_string(v + 1) + " is zero");
    }
  }
  // diag(w)^-1 A diag(w)
  Matrix scaled(a.rows(), a.cols());
  for (Index v = 0; v < a.cols(); ++v) {
    for (Index u = 0; u < a.rows(); ++u) scaled(u, v) = a(u, v) * weights(v) / weights(u);
  }
  return coarsest_front_equitable_refinement(scaled, initial, options);
}

}  // namespace equitile
