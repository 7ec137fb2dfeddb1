#include "equitile/rectangular.hpp"

#include <cmath>
#include <numeric>

#include "equitile/reflector.hpp"

namespace equitile {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kGramFloor = 1e-12;

Index total(const std::vector<Index>& sizes) {
  return std::accumulate(sizes.begin(), sizes.end(), Index{0});
}

Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

// W_i (W_i' W_i)^{-1/2} for every block, assembled block-diagonally.
Matrix gram_orthonormal_factor(const BlockDiagonal& w) {
  std::vector<Matrix> blocks;
  blocks.reserve(w.blocks.size());
  for (std::size_t b = 0; b < w.blocks.size(); ++b) {
    const Matrix& wi = w.blocks[b];
    const Matrix gram = wi.adjoint() * wi;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) throw NumericalFailure("Gram eigendecomposition failed");
    const RealVector& lambda = solver.eigenvalues();  // ascending
    const double top = lambda.size() > 0 ? lambda(lambda.size() - 1) : 0.0;
    if (lambda.size() == 0 || !(top > 0.0) || lambda(0) <= kGramFloor * top) {
      throw RankDeficient("side block " + std::to_string(b) + " does not have full column rank");
    }
    const Matrix inv_root = solver.eigenvectors() *
                            lambda.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                            solver.eigenvectors().adjoint();
    blocks.push_back(wi * inv_root);
  }
  return block_diagonal(blocks);
}

void check_grid(const Matrix& a, const BlockDiagonal& wminus, const BlockDiagonal& wplus) {
  if (a.rows() != wminus.rows() || a.cols() != wplus.rows()) {
    throw InvalidArgument("A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          " but the side matrices have " + std::to_string(wminus.rows()) +
                          " and " + std::to_string(wplus.rows()) + " rows");
  }
}

RectDeviation deviation_from_bases(const Matrix& a, const Matrix& qminus, const Matrix& qplus,
                                   const Matrix& e0) {
  return RectDeviation{a * qplus - qminus * e0, a.adjoint() * qminus - qplus * e0.adjoint()};
}

}  // namespace

Index BlockDiagonal::rows() const {
  Index r = 0;
  for (const auto& b : blocks) r += b.rows();
  return r;
}

Index BlockDiagonal::cols() const {
  Index c = 0;
  for (const auto& b : blocks) c += b.cols();
  return c;
}

std::vector<Index> BlockDiagonal::row_sizes() const {
  std::vector<Index> out;
  for (const auto& b : blocks) out.push_back(b.rows());
  return out;
}

std::vector<Index> BlockDiagonal::col_sizes() const {
  std::vector<Index> out;
  for (const auto& b : blocks) out.push_back(b.cols());
  return out;
}

Matrix BlockDiagonal::dense() const { return block_diagonal(blocks); }

BlockDiagonal BlockDiagonal::from_dense(const Matrix& m, const std::vector<Index>& row_sizes,
                                        const std::vector<Index>& col_sizes,
                                        double off_block_tol) {
  if (row_sizes.size() != col_sizes.size()) {
    throw InvalidArgument("block structure: row and column size lists differ in length");
  }
  if (total(row_sizes) != m.rows() || total(col_sizes) != m.cols()) {
    throw InvalidArgument("block structure does not match a " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " matrix");
  }
  BlockDiagonal out;
  Matrix rest = m;
  Index r = 0;
  Index c = 0;
  for (std::size_t b = 0; b < row_sizes.size(); ++b) {
    if (row_sizes[b] < 1 || col_sizes[b] < 1) {
      throw InvalidArgument("block structure: block sizes must be positive");
    }
    out.blocks.push_back(m.block(r, c, row_sizes[b], col_sizes[b]));
    rest.block(r, c, row_sizes[b], col_sizes[b]).setZero();
    r += row_sizes[b];
    c += col_sizes[b];
  }
  if (rest.size() > 0 && rest.cwiseAbs().maxCoeff() > off_block_tol) {
    throw InvalidArgument("matrix has nonzero entries outside its diagonal blocks");
  }
  return out;
}

RealMatrix padded_identity(Index n, Index r) {
  if (r < 0 || r > n) throw InvalidArgument("padded_identity needs r <= n");
  RealMatrix m = RealMatrix::Zero(n, r);
  m.topRows(r).setIdentity();
  return m;
}

RealMatrix padded_identity(const std::vector<Index>& n_sizes, const std::vector<Index>& r_sizes) {
  if (n_sizes.size() != r_sizes.size()) throw InvalidArgument("padded_identity: size lists differ");
  RealMatrix m = RealMatrix::Zero(total(n_sizes), total(r_sizes));
  Index row = 0;
  Index col = 0;
  for (std::size_t b = 0; b < n_sizes.size(); ++b) {
    m.block(row, col, n_sizes[b], r_sizes[b]) = padded_identity(n_sizes[b], r_sizes[b]);
    row += n_sizes[b];
    col += r_sizes[b];
  }
  return m;
}

Permutation omega_nr_permutation(const std::vector<Index>& r_sizes,
                                 const std::vector<Index>& n_sizes) {
  if (r_sizes.size() != n_sizes.size() || n_sizes.empty()) {
    throw InvalidArgument("omega_nr_permutation: size lists must be non-empty and of equal length");
  }
  const Index r = total(r_sizes);
  std::vector<Index> forward;
  Index lead = 0;
  Index tail = r;
  for (std::size_t b = 0; b < n_sizes.size(); ++b) {
    if (r_sizes[b] < 1 || r_sizes[b] > n_sizes[b]) {
      throw InvalidArgument("omega_nr_permutation: need 1 <= r_i <= n_i, block " +
                            std::to_string(b) + " has r=" + std::to_string(r_sizes[b]) +
                            ", n=" + std::to_string(n_sizes[b]));
    }
    for (Index s = 0; s < n_sizes[b]; ++s) forward.push_back(s < r_sizes[b] ? lead++ : tail++);
  }
  return Permutation(std::move(forward));
}

BlockSVD::BlockSVD(BlockDiagonal source, std::vector<SvdFactor> factors)
    : source_(std::move(source)), factors_(std::move(factors)) {
  if (source_.blocks.size() != factors_.size()) {
    throw InvalidArgument("BlockSVD: one factor per block required");
  }
  for (std::size_t b = 0; b < factors_.size(); ++b) {
    const Matrix& w = source_.blocks[b];
    const SvdFactor& f = factors_[b];
    const Index m = w.rows();
    const Index q = w.cols();
    if (f.u.rows() != m || f.u.cols() != m || f.v.rows() != q || f.v.cols() != q ||
        f.singular.size() != q) {
      throw InvalidArgument("BlockSVD: factor shapes do not match block " + std::to_string(b));
    }
    if (!(f.singular.minCoeff() > 0.0)) {
      throw RankDeficient("BlockSVD: block " + std::to_string(b) + " has a zero singular value");
    }
    const Matrix rebuilt = f.u.leftCols(q) * f.singular.cast<Complex>().asDiagonal() * f.v.adjoint();
    if ((rebuilt - w).norm() > 1e-12 * std::max(w.norm(), 1e-300)) {
      throw InvalidArgument("BlockSVD: factors do not reproduce block " + std::to_string(b));
    }
  }
  omega_ = omega_nr_permutation(source_.col_sizes(), source_.row_sizes());
}

Matrix BlockSVD::u() const {
  std::vector<Matrix> blocks;
  for (const auto& f : factors_) blocks.push_back(f.u);
  return block_diagonal(blocks);
}

Matrix BlockSVD::v() const {
  std::vector<Matrix> blocks;
  for (const auto& f : factors_) blocks.push_back(f.v);
  return block_diagonal(blocks);
}

RealVector BlockSVD::n_diagonal() const {
  RealVector out(inner());
  Index off = 0;
  for (const auto& f : factors_) {
    out.segment(off, f.singular.size()) = f.singular;
    off += f.singular.size();
  }
  return out;
}

Matrix BlockSVD::orthonormal_factor() const {
  std::vector<Matrix> blocks;
  for (const auto& f : factors_) blocks.push_back(f.u.leftCols(f.v.rows()) * f.v.adjoint());
  return block_diagonal(blocks);
}

BlockSVD block_svd(const BlockDiagonal& w) {
  if (w.blocks.empty()) throw InvalidArgument("block_svd: no blocks");
  std::vector<SvdFactor> factors;
  for (std::size_t b = 0; b < w.blocks.size(); ++b) {
    const Matrix& blk = w.blocks[b];
    const Index m = blk.rows();
    const Index q = blk.cols();
    if (q < 1 || m < q) {
      throw RankDeficient("block " + std::to_string(b) + " is " + std::to_string(m) + "x" +
                          std::to_string(q) + " and cannot have full column rank");
    }
    if (q == 1) {
      const Vector x = blk.col(0);
      const double norm = x.norm();
      if (!(norm > 0.0)) throw RankDeficient("block " + std::to_string(b) + " is zero");
      const Phase beta = beta0(x);
      SvdFactor f;
      f.u = build_reflector(x, beta).dense();
      f.singular = RealVector::Constant(1, norm);
      f.v = Matrix::Constant(1, 1, beta.value());
      factors.push_back(std::move(f));
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalFailure("block SVD failed");
    const RealVector& s = svd.singularValues();
    if (!(s(0) > 0.0) || s(q - 1) <= kRankTol * s(0)) {
      throw RankDeficient("block " + std::to_string(b) + " is rank deficient (sigma_min/sigma_max = " +
                          std::to_string(s(0) > 0.0 ? s(q - 1) / s(0) : 0.0) + ")");
    }
    factors.push_back(SvdFactor{svd.matrixU(), s, svd.matrixV()});
  }
  return BlockSVD(w, std::move(factors));
}

Matrix rayleigh_quotient_rect(const Matrix& a, const BlockDiagonal& wminus,
                              const BlockDiagonal& wplus) {
  check_grid(a, wminus, wplus);
  return gram_orthonormal_factor(wminus).adjoint() * a * gram_orthonormal_factor(wplus);
}

RectDeviation deviation_rect(const Matrix& a, const BlockDiagonal& wminus,
                             const BlockDiagonal& wplus) {
  check_grid(a, wminus, wplus);
  const Matrix qminus = gram_orthonormal_factor(wminus);
  const Matrix qplus = gram_orthonormal_factor(wplus);
  return deviation_from_bases(a, qminus, qplus, qminus.adjoint() * a * qplus);
}

Matrix rayleigh_quotient_from_factors(const Matrix& a, const BlockSVD& left, const BlockSVD& right) {
  check_grid(a, left.source(), right.source());
  return left.orthonormal_factor().adjoint() * a * right.orthonormal_factor();
}

RectDeviation deviation_from_factors(const Matrix& a, const BlockSVD& left, const BlockSVD& right) {
  check_grid(a, left.source(), right.source());
  const Matrix qminus = left.orthonormal_factor();
  const Matrix qplus = right.orthonormal_factor();
  return deviation_from_bases(a, qminus, qplus, qminus.adjoint() * a * qplus);
}

Matrix RectResult::assembled() const {
  const Index q = E.rows();
  const Index r = E.cols();
  const Index m = q + D_minus.rows();
  const Index n = r + D_plus_conj.cols();
  Matrix out(m, n);
  out.topLeftCorner(q, r) = E;
  out.topRightCorner(q, n - r) = D_plus_conj;
  out.bottomLeftCorner(m - q, r) = D_minus;
  out.bottomRightCorner(m - q, n - r) = F;
  return out;
}

Matrix RectResult::rayleigh_quotient() const { return left.v() * E * right.v().adjoint(); }

RectResult rect_transform(const Matrix& a, const BlockSVD& left, const BlockSVD& right) {
  check_grid(a, left.source(), right.source());
  Matrix tilde(a.rows(), a.cols());
  Index off = 0;
  for (const auto& f : left.factors()) {
    const Index m = f.u.rows();
    tilde.middleRows(off, m) = f.u.adjoint() * a.middleRows(off, m);
    off += m;
  }
  off = 0;
  for (const auto& f : right.factors()) {
    const Index n = f.u.rows();
    tilde.middleCols(off, n) = tilde.middleCols(off, n) * f.u;
    off += n;
  }
  const Matrix hat = permute_cols(permute_rows(tilde, left.omega()), right.omega());
  const Index q = left.inner();
  const Index r = right.inner();
  const Index m = a.rows();
  const Index n = a.cols();
  return RectResult{hat.topLeftCorner(q, r),
                    hat.bottomLeftCorner(m - q, r),
                    hat.topRightCorner(q, n - r),
                    hat.bottomRightCorner(m - q, n - r),
                    left,
                    right};
}

}  // namespace equitile
