#include "equitile/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/aggregate.hpp"

namespace equitile {

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::frobenius: return "frobenius";
    case NormKind::spectral: return "spectral";
    case NormKind::nuclear: return "nuclear";
  }
  return "?";
}

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::BDCSVD<Matrix> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalFailure("singular value decomposition failed");
  return svd.singularValues();
}

double schatten_norm(const Matrix& m, NormKind kind) {
  if (kind == NormKind::frobenius) return m.size() == 0 ? 0.0 : m.norm();
  const RealVector s = singular_values(m);
  if (s.size() == 0) return 0.0;
  switch (kind) {
    case NormKind::frobenius: return s.norm();
    case NormKind::spectral: return s.maxCoeff();
    case NormKind::nuclear: return s.sum();
  }
  return 0.0;
}

DeviationReport deviation_report(const DeviationMatrix& t) {
  const Matrix& m = t.assembled();
  const RealVector s = singular_values(m);
  DeviationReport report;
  if (s.size() > 0) {
    report.frobenius = s.norm();
    report.spectral = s.maxCoeff();
    report.nuclear = s.sum();
  }
  const double total = m.size() == 0 ? 0.0 : m.norm();
  if (total > 0.0) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (m.col(c).norm() > 1e-13 * total) ++report.nonzero_columns;
    }
  }
  report.per_block_norms = t.block_norms();
  return report;
}

double theta_residual(const Matrix& a, const WeightedIndicator& wi, const Matrix& theta, Side side,
                      NormKind norm) {
  wi.require_admissible();
  detail::require_square(a, wi.size(), "theta_residual");
  const Index k = wi.num_cells();
  if (theta.rows() != k || theta.cols() != k) {
    throw InvalidArgument("theta_residual: Theta must be " + std::to_string(k) + "x" +
                          std::to_string(k));
  }
  const auto& cell_of = wi.partition().cell_of();
  const Vector& w = wi.weights();
  const RealVector nsq = wi.block_norms_squared();

  if (side == Side::front) {
    Matrix t = detail::weighted_aggregate(a, wi);  // AW
    for (Index j = 0; j < k; ++j) {
      const double inv = 1.0 / std::sqrt(nsq(j));
      for (Index v = 0; v < t.rows(); ++v) {
        t(v, j) = (t(v, j) - w(v) * theta(cell_of[static_cast<std::size_t>(v)], j)) * inv;
      }
    }
    return schatten_norm(t, norm);
  }
  const Matrix adj = a.adjoint();
  const Matrix bw = detail::weighted_aggregate(adj, wi);  // A'W = (W'A)'
  Matrix t(k, a.cols());
  for (Index u = 0; u < a.cols(); ++u) {
    const Index cu = cell_of[static_cast<std::size_t>(u)];
    for (Index i = 0; i < k; ++i) {
      t(i, u) = (std::conj(bw(u, i)) - theta(i, cu) * std::conj(w(u))) / std::sqrt(nsq(i));
    }
  }
  return schatten_norm(t, norm);
}

bool is_hermitian(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  return (a - a.adjoint()).norm() <= rel_tol * std::max(a.norm(), 1.0);
}

PerturbationCheck weyl_check(const Matrix& a, const TriangularizationResult& r) {
  if (!is_hermitian(a)) throw InvalidArgument("weyl_check requires a Hermitian matrix");
  if (r.size() != a.rows()) throw InvalidArgument("weyl_check: result does not belong to A");

  PerturbationCheck check;
  for (const Complex& z : eigenvalues(r.E, true)) check.joint_spectrum.push_back(z.real());
  for (const Complex& z : eigenvalues(r.F, true)) check.joint_spectrum.push_back(z.real());
  std::sort(check.joint_spectrum.begin(), check.joint_spectrum.end());
  for (const Complex& z : eigenvalues(a, true)) check.reference.push_back(z.real());

  check.tau_spec = r.D_minus.size() == 0 ? 0.0 : singular_values(r.D_minus).maxCoeff();
  for (std::size_t i = 0; i < check.reference.size(); ++i) {
    check.max_gap = std::max(check.max_gap, std::abs(check.joint_spectrum[i] - check.reference[i]));
  }
  check.slack = 1e-10 * a.norm();
  check.holds = check.max_gap <= check.tau_spec + check.slack;
  return check;
}

double max_matched_gap(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best = b.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(x - b[i]);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

}  // namespace equitile
