#pragma once

#include <vector>

#include "equitile/types.hpp"

namespace equitile {

// A permutation of {0..n-1} stored as its forward map: index u is sent to
// position forward[u]. The associated permutation matrix P has P(u, forward[u]) = 1,
// so P'MP moves entry (u, v) to (forward[u], forward[v]).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> forward);

  static Permutation identity(Index n);

  Index size() const { return static_cast<Index>(forward_.size()); }
  Index operator()(Index u) const { return forward_[static_cast<std::size_t>(u)]; }
  const std::vector<Index>& forward() const { return forward_; }

  Permutation inverse() const;
  bool is_identity() const;

  // Dense 0/1 matrix P with P(u, forward[u]) = 1.
  RealMatrix matrix() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> forward_;
};

// P'MP.
Matrix permute_symmetric(const Matrix& m, const Permutation& p);
// P'M (rows only).
Matrix permute_rows(const Matrix& m, const Permutation& p);
// MP (columns only).
Matrix permute_cols(const Matrix& m, const Permutation& p);
// Pv, i.e. result[u] = v[forward[u]].
Vector gather(const Permutation& p, const Vector& v);
// P'v, i.e. result[forward[u]] = v[u].
Vector scatter(const Permutation& p, const Vector& v);

}  // namespace equitile
