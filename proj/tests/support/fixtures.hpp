#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "equitile/partition.hpp"
#include "equitile/types.hpp"

namespace equitile::testing {

inline Matrix from_real(std::initializer_list<std::initializer_list<double>> rows) {
  const Index n = static_cast<Index>(rows.size());
  const Index m = static_cast<Index>(rows.begin()->size());
  Matrix out(n, m);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double x : row) out(i, j++) = Complex(x, 0.0);
    ++i;
  }
  return out;
}

// Worked 6×6 example, symmetric and front equitable w.r.t. (1|2,6|3,4,5).
inline Matrix a0() {
  return from_real({{1, 2, 3, 3, 3, 2},
                    {2, 4, 3, 1, 2, 1},
                    {3, 3, 1, 4, 1, 1},
                    {3, 1, 4, 0, 2, 3},
                    {3, 2, 1, 2, 3, 2},
                    {2, 1, 1, 3, 2, 4}});
}

inline Partition pi0() { return Partition(6, {{0}, {1, 5}, {2, 3, 4}}); }

// P0' A0 P0 with P0 swapping indices 3 and 6.
inline Matrix a0_suitable() {
  return from_real({{1, 2, 2, 3, 3, 3},
                    {2, 4, 1, 1, 2, 3},
                    {2, 1, 4, 3, 2, 1},
                    {3, 1, 3, 0, 2, 4},
                    {3, 2, 2, 2, 3, 1},
                    {3, 3, 1, 4, 1, 1}});
}

inline Matrix a0_front_quotient() { return from_real({{1, 4, 9}, {2, 5, 6}, {3, 4, 6}}); }

inline Matrix a0_E() {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  return from_real({{1, 4 / s2, 9 / s3}, {4 / s2, 5, 6 * s2 / s3}, {9 / s3, 6 * s2 / s3, 6}});
}

// Lower block as printed alongside the worked example. Its Frobenius norm is
// inconsistent with A0 (see a0_F for the values the printed H1, H2, H3 give).
inline Matrix a0_F_displayed() {
  const double s3 = std::sqrt(3.0);
  return from_real({{3, -3 + s3, -3 - s3}, {-3 + s3, s3 - 1, -6}, {-3 - s3, -6, -s3 - 1}});
}

// H3' A33 H3 etc. evaluated in closed form from the printed reflectors.
inline Matrix a0_F() {
  const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  return from_real({{3, (-3 + s3) / s6, (-3 - s3) / s6},
                    {(-3 + s3) / s6, s3 - 1, -2},
                    {(-3 - s3) / s6, -2, -s3 - 1}});
}

inline Matrix a0_hat_from(const Matrix& f) {
  Matrix out = Matrix::Zero(6, 6);
  out.topLeftCorner(3, 3) = a0_E();
  out.bottomRightCorner(3, 3) = f;
  return out;
}

// Ã = Ω Â Ω' with Ω swapping positions 3 and 4.
inline Matrix a0_tilde_from(const Matrix& f) {
  const Matrix hat = a0_hat_from(f);
  const int order[6] = {0, 1, 3, 2, 4, 5};
  Matrix out(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) out(i, j) = hat(order[i], order[j]);
  return out;
}

inline Matrix a0_hat() { return a0_hat_from(a0_F()); }
inline Matrix a0_tilde() { return a0_tilde_from(a0_F()); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

// Largest difference between the sorted singular values of a and b, with
// missing values read as zero. Empty matrices are allowed.
inline double sv_gap(const Matrix& a, const Matrix& b) {
  auto sv = [](const Matrix& m) {
    return m.size() == 0 ? RealVector() : RealVector(Eigen::JacobiSVD<Matrix>(m).singularValues());
  };
  const RealVector x = sv(a), y = sv(b);
  double gap = 0.0;
  for (Index i = 0; i < std::max(x.size(), y.size()); ++i) {
    const double xi = i < x.size() ? x(i) : 0.0;
    const double yi = i < y.size() ? y(i) : 0.0;
    gap = std::max(gap, std::abs(xi - yi));
  }
  return gap;
}

}  // namespace equitile::testing
