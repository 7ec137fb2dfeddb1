#include "equitile/triangularize.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "detail/aggregate.hpp"
#include "equitile/kernels.hpp"

namespace equitile {

BlockReflector::BlockReflector(std::vector<ElementaryUnitary> blocks, std::vector<Phase> phases)
    : blocks_(std::move(blocks)), phases_(std::move(phases)) {
  if (blocks_.size() != phases_.size()) {
    throw InvalidArgument("block reflector needs one phase per block");
  }
  offsets_.reserve(blocks_.size() + 1);
  offsets_.push_back(0);
  for (const auto& h : blocks_) offsets_.push_back(offsets_.back() + h.dim());
}

std::vector<Index> BlockReflector::block_sizes() const {
  std::vector<Index> sizes;
  sizes.reserve(blocks_.size());
  for (const auto& h : blocks_) sizes.push_back(h.dim());
  return sizes;
}

void BlockReflector::transform_in_place(Matrix& m) const {
  const kernels::BlockLayout layout{std::span<const ElementaryUnitary>(blocks_),
                                    std::span<const Index>(offsets_.data(), blocks_.size())};
  kernels::apply_block_two_sided_parallel(m, layout);
}

Vector BlockReflector::apply(const Vector& v) const {
  if (v.size() != size()) throw InvalidArgument("block reflector applied to a vector of wrong length");
  Vector out(v.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Index off = offsets_[b];
    const Index n = blocks_[b].dim();
    out.segment(off, n) = blocks_[b].apply(v.segment(off, n));
  }
  return out;
}

Matrix BlockReflector::dense() const {
  Matrix m = Matrix::Zero(size(), size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Index n = blocks_[b].dim();
    m.block(offsets_[b], offsets_[b], n, n) = blocks_[b].dense();
  }
  return m;
}

DeviationMatrix::DeviationMatrix(Side side, Partition partition, Matrix assembled)
    : side_(side), partition_(std::move(partition)), assembled_(std::move(assembled)) {
  if (assembled_.rows() != partition_.size() || assembled_.cols() != partition_.num_cells()) {
    throw InvalidArgument("deviation matrix must be N x k for its partition");
  }
}

Vector DeviationMatrix::block(Index i, Index j) const {
  const Index row_cell = side_ == Side::front ? i : j;
  const Index col = side_ == Side::front ? j : i;
  const auto& cell = partition_.cell(row_cell);
  Vector out(static_cast<Index>(cell.size()));
  for (std::size_t r = 0; r < cell.size(); ++r) out(static_cast<Index>(r)) = assembled_(cell[r], col);
  return out;
}

RealMatrix DeviationMatrix::block_norms() const {
  return detail::deviation_block_norms(assembled_, partition_, side_);
}

bool DeviationMatrix::is_zero(double tol) const {
  return assembled_.size() == 0 || assembled_.cwiseAbs().maxCoeff() <= tol;
}

Matrix TriangularizationResult::assembled() const {
  const Index k = E.rows();
  const Index n = size();
  Matrix a(n, n);
  a.topLeftCorner(k, k) = E;
  a.topRightCorner(k, n - k) = D_plus_conj;
  a.bottomLeftCorner(n - k, k) = D_minus;
  a.bottomRightCorner(n - k, n - k) = F;
  return a;
}

Matrix TriangularizationResult::transformed() const {
  return permute_symmetric(assembled(), omega.inverse());
}

namespace {

// nsq^(exponent/1) for the exponents that occur, without pow() where exact
// arithmetic is available.
double norm_power(double nsq, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (exponent == -1.0) return 1.0 / nsq;
  if (exponent == -0.5) return 1.0 / std::sqrt(nsq);
  if (exponent == 0.5) return std::sqrt(nsq);
  return std::pow(nsq, exponent);
}

}  // namespace

QuotientMatrix generalized_quotient(const Matrix& a, const WeightedIndicator& wi, double alpha) {
  wi.require_admissible();
  detail::require_square(a, wi.size(), "generalized_quotient");
  const Matrix s = detail::project_cells(wi, detail::weighted_aggregate(a, wi));
  const RealVector nsq = wi.block_norms_squared();
  QuotientMatrix q{alpha, Matrix(s.rows(), s.cols())};
  for (Index j = 0; j < s.cols(); ++j) {
    const double right = norm_power(nsq(j), -(1.0 + alpha) / 2.0);
    for (Index i = 0; i < s.rows(); ++i) {
      q.entries(i, j) = s(i, j) * norm_power(nsq(i), -(1.0 - alpha) / 2.0) * right;
    }
  }
  return q;
}

DeviationMatrix front_deviation(const Matrix& a, const WeightedIndicator& wi) {
  return DeviationMatrix(Side::front, wi.partition(),
                         detail::deviation_assembled(a, wi, Side::front));
}

DeviationMatrix rear_deviation(const Matrix& a, const WeightedIndicator& wi) {
  return DeviationMatrix(Side::rear, wi.partition(),
                         detail::deviation_assembled(a, wi, Side::rear));
}

DeviationPair deviation_matrices(const Matrix& a, const WeightedIndicator& wi) {
  return {front_deviation(a, wi), rear_deviation(a, wi)};
}

BlockReflector build_block_reflector(const WeightedIndicator& wi, const PhaseChoice& phases) {
  wi.require_admissible();
  const Index k = wi.num_cells();
  if (phases && static_cast<Index>(phases->size()) != k) {
    throw InvalidArgument("expected " + std::to_string(k) + " phases, got " +
                          std::to_string(phases->size()));
  }
  const Permutation sigma = suitable_indexing_permutation(wi.partition());
  const Vector w = scatter(sigma, wi.weights());

  std::vector<ElementaryUnitary> blocks;
  std::vector<Phase> used;
  blocks.reserve(static_cast<std::size_t>(k));
  used.reserve(static_cast<std::size_t>(k));
  Index off = 0;
  for (Index i = 0; i < k; ++i) {
    const Index n = wi.partition().cell_size(i);
    const Vector block = w.segment(off, n);
    const Phase beta = phases ? (*phases)[static_cast<std::size_t>(i)] : beta0(block);
    blocks.push_back(build_reflector(block, beta));
    used.push_back(beta);
    off += n;
  }
  return BlockReflector(std::move(blocks), std::move(used));
}

Permutation omega_permutation(const std::vector<Index>& sizes) {
  if (sizes.empty()) throw InvalidArgument("omega_permutation: empty size list");
  const Index k = static_cast<Index>(sizes.size());
  std::vector<Index> forward;
  Index tail = k;
  for (Index i = 0; i < k; ++i) {
    const Index n = sizes[static_cast<std::size_t>(i)];
    if (n < 1) throw InvalidArgument("omega_permutation: block sizes must be positive");
    forward.push_back(i);
    for (Index m = 1; m < n; ++m) forward.push_back(tail++);
  }
  return Permutation(std::move(forward));
}

TriangularizationResult block_triangularize(const Matrix& a, const WeightedIndicator& wi,
                                            const PhaseChoice& phases) {
  wi.require_admissible();
  detail::require_square(a, wi.size(), "block_triangularize");
  Permutation sigma = suitable_indexing_permutation(wi.partition());
  BlockReflector reflector = build_block_reflector(wi, phases);
  Permutation omega = omega_permutation(reflector.block_sizes());

  Matrix m = permute_symmetric(a, sigma);
  reflector.transform_in_place(m);
  const Matrix hat = permute_symmetric(m, omega);

  const Index n = a.rows();
  const Index k = wi.num_cells();
  return TriangularizationResult{hat.topLeftCorner(k, k),
                                 hat.bottomLeftCorner(n - k, k),
                                 hat.topRightCorner(k, n - k),
                                 hat.bottomRightCorner(n - k, n - k),
                                 std::move(reflector),
                                 std::move(omega),
                                 std::move(sigma)};
}

Vector recover_eigenvector(const TriangularizationResult& r, const Vector& z_hat) {
  if (z_hat.size() != r.size()) {
    throw InvalidArgument("recover_eigenvector: vector of length " + std::to_string(z_hat.size()) +
                          " for a problem of size " + std::to_string(r.size()));
  }
  return gather(r.pre_permutation, r.reflector.apply(gather(r.omega, z_hat)));
}

namespace {

bool nearly_hermitian(const Matrix& m) {
  const double scale = m.norm();
  return (m - m.adjoint()).norm() <= 1e-12 * std::max(scale, 1.0);
}

}  // namespace

std::vector<Complex> eigenvalues(const Matrix& m, bool hermitian) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigenvalues: matrix must be square");
  std::vector<Complex> out;
  if (m.rows() == 0) return out;
  const double peak = m.cwiseAbs().maxCoeff();
  if (!std::isfinite(peak)) throw NumericalFailure("eigenvalues: matrix has non-finite entries");
  if (peak == 0.0) return std::vector<Complex>(static_cast<std::size_t>(m.rows()), Complex(0.0, 0.0));
  // Power-of-two rescaling is exact and keeps the Schur iteration away from
  // underflow on roundoff-sized blocks.
  const int exponent = std::ilogb(peak);
  const Matrix scaled = m * std::ldexp(1.0, -exponent);
  if (hermitian) {
    const Matrix sym = (scaled + scaled.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver failed");
    for (Index i = 0; i < m.rows(); ++i) {
      out.emplace_back(std::ldexp(solver.eigenvalues()(i), exponent), 0.0);
    }
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver(scaled, false);
    if (solver.info() != Eigen::Success) throw NumericalFailure("complex eigensolver failed");
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex z = solver.eigenvalues()(i);
      out.emplace_back(std::ldexp(z.real(), exponent), std::ldexp(z.imag(), exponent));
    }
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

SpectrumSplit spectrum_split(const TriangularizationResult& r, double tol) {
  const bool hermitian = nearly_hermitian(r.E) && nearly_hermitian(r.F);
  SpectrumSplit out;
  out.eigs_E = eigenvalues(r.E, hermitian);
  out.eigs_F = eigenvalues(r.F, hermitian);
  const double d_minus = r.D_minus.size() == 0 ? 0.0 : r.D_minus.norm();
  const double d_plus = r.D_plus_conj.size() == 0 ? 0.0 : r.D_plus_conj.norm();
  out.exact = std::max(d_minus, d_plus) <= tol;
  return out;
}

}  // namespace equitile
