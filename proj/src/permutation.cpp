#include "equitile/permutation.hpp"

#include <numeric>

namespace equitile {

Permutation::Permutation(std::vector<Index> forward) : forward_(std::move(forward)) {
  const auto n = forward_.size();
  std::vector<bool> hit(n, false);
  for (Index target : forward_) {
    if (target < 0 || static_cast<std::size_t>(target) >= n || hit[static_cast<std::size_t>(target)]) {
      throw InvalidArgument("not a permutation: target " + std::to_string(target));
    }
    hit[static_cast<std::size_t>(target)] = true;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> f(static_cast<std::size_t>(n));
  std::iota(f.begin(), f.end(), Index{0});
  return Permutation(std::move(f));
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(forward_.size());
  for (std::size_t u = 0; u < forward_.size(); ++u) {
    inv[static_cast<std::size_t>(forward_[u])] = static_cast<Index>(u);
  }
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t u = 0; u < forward_.size(); ++u) {
    if (forward_[u] != static_cast<Index>(u)) return false;
  }
  return true;
}

RealMatrix Permutation::matrix() const {
  RealMatrix p = RealMatrix::Zero(size(), size());
  for (Index u = 0; u < size(); ++u) p(u, (*this)(u)) = 1.0;
  return p;
}

namespace {

void require_size(Index expected, Index got, const char* what) {
  if (expected != got) {
    throw InvalidArgument(std::string(what) + ": permutation of size " + std::to_string(expected) +
                          " applied to dimension " + std::to_string(got));
  }
}

}  // namespace

Matrix permute_symmetric(const Matrix& m, const Permutation& p) {
  require_size(p.size(), m.rows(), "permute_symmetric");
  require_size(p.size(), m.cols(), "permute_symmetric");
  Matrix out(m.rows(), m.cols());
  for (Index v = 0; v < m.cols(); ++v) {
    const Index pv = p(v);
    for (Index u = 0; u < m.rows(); ++u) out(p(u), pv) = m(u, v);
  }
  return out;
}

Matrix permute_rows(const Matrix& m, const Permutation& p) {
  require_size(p.size(), m.rows(), "permute_rows");
  Matrix out(m.rows(), m.cols());
  for (Index u = 0; u < m.rows(); ++u) out.row(p(u)) = m.row(u);
  return out;
}

Matrix permute_cols(const Matrix& m, const Permutation& p) {
  require_size(p.size(), m.cols(), "permute_cols");
  Matrix out(m.rows(), m.cols());
  for (Index v = 0; v < m.cols(); ++v) out.col(p(v)) = m.col(v);
  return out;
}

Vector gather(const Permutation& p, const Vector& v) {
  require_size(p.size(), v.size(), "gather");
  Vector out(v.size());
  for (Index u = 0; u < v.size(); ++u) out(u) = v(p(u));
  return out;
}

Vector scatter(const Permutation& p, const Vector& v) {
  require_size(p.size(), v.size(), "scatter");
  Vector out(v.size());
  for (Index u = 0; u < v.size(); ++u) out(p(u)) = v(u);
  return out;
}

}  // namespace equitile
