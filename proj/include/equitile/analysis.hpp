#pragma once

#include <vector>

#include "equitile/partition.hpp"
#include "equitile/triangularize.hpp"
#include "equitile/types.hpp"

namespace equitile {

enum class NormKind { frobenius, spectral, nuclear };

const char* to_string(NormKind kind);

/// Singular values, descending. Throws NumericalFailure.
RealVector singular_values(const Matrix& m);
double schatten_norm(const Matrix& m, NormKind kind);

struct DeviationReport {
  double frobenius = 0.0;
  double spectral = 0.0;
  double nuclear = 0.0;
  Index nonzero_columns = 0;
  RealMatrix per_block_norms;
};

DeviationReport deviation_report(const DeviationMatrix& t);

/// ‖T±_Θ‖ with T⁻_Θ = (AW - WΘ)N⁻¹ and T⁺_Θ = N⁻¹(W'A - ΘW').
double theta_residual(const Matrix& a, const WeightedIndicator& wi, const Matrix& theta, Side side,
                      NormKind norm);

struct PerturbationCheck {
  std::vector<double> joint_spectrum;  // μ, ascending
  std::vector<double> reference;       // λ, ascending
  double tau_spec = 0.0;
  double max_gap = 0.0;
  double slack = 0.0;
  bool holds = false;
};

bool is_hermitian(const Matrix& a, double rel_tol = 1e-12);

/// Weyl bound |μ_i - λ_i| <= τ_spec for Hermitian A. Throws InvalidArgument
/// for non-Hermitian input.
PerturbationCheck weyl_check(const Matrix& a, const TriangularizationResult& r);

/// Greedy nearest-neighbour matching of two eigenvalue multisets. Returns the
/// largest matched distance, or +inf when the sizes differ.
double max_matched_gap(std::vector<Complex> a, std::vector<Complex> b);

}  // namespace equitile
