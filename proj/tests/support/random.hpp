#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "equitile/partition.hpp"
#include "equitile/rectangular.hpp"
#include "equitile/types.hpp"

namespace equitile::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  Index integer(Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(engine_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine_); }
  Complex complex_normal() { return {normal(), normal()}; }
  Complex unit_phase() {
    const double t = uniform(0.0, 6.283185307179586);
    return {std::cos(t), std::sin(t)};
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

Matrix random_complex(Rng& rng, Index rows, Index cols);
Matrix random_real(Rng& rng, Index rows, Index cols);
Matrix random_hermitian(Rng& rng, Index n, bool complex_entries = true);

// Uniformly labelled partition into exactly k non-empty cells.
Partition random_partition(Rng& rng, Index n, Index k);
// Random block sizes summing to n, each at least `min_size`.
std::vector<Index> random_sizes(Rng& rng, Index n, Index k, Index min_size = 1);
// Contiguous partition with the given sizes.
Partition contiguous_partition(const std::vector<Index>& sizes);

// Complex weights with modulus in [0.5, 2].
Vector random_weights(Rng& rng, Index n);

// A_ij = θ_ij/n_j ones plus noise with zero row sums in every block, so the
// partition is unit-weight front equitable with front quotient θ.
Matrix planted_front_equitable(Rng& rng, const Partition& p, const Matrix& theta,
                               double noise = 1.0);

// Sparse matrix with small integer entries (exact row sums).
Matrix random_sparse_integer(Rng& rng, Index n, double density, int max_value = 3);

// Block-diagonal side matrix with full column rank blocks.
BlockDiagonal random_side(Rng& rng, const std::vector<Index>& outer,
                          const std::vector<Index>& inner);

Matrix random_unitary(Rng& rng, Index n);

struct RectStructure {
  std::vector<Index> m, q, n, r;
};

// 1..4 blocks per side, outer sizes up to max_outer in total, mixed ranks.
RectStructure random_rect_structure(Rng& rng, Index max_outer);

// Another valid block SVD of the same matrix: phases on the leading singular
// directions and an arbitrary unitary on the complement.
BlockSVD twisted_svd(Rng& rng, const BlockSVD& svd);

}  // namespace equitile::testing
