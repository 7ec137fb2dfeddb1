#include "equitile/reflector.hpp"

#include <cmath>

namespace equitile {

namespace {

constexpr double kPhaseTol = 1e-12;
constexpr double kBranchTol = 1e-14;

// ‖x‖ - Re(βx¹) without cancellation when βx¹ is close to ‖x‖.
double distance_to_branch(const Vector& x, double norm, Complex beta_x1) {
  const double p = beta_x1.real();
  if (p <= 0.0) return norm - p;
  const double tail = x.size() > 1 ? x.tail(x.size() - 1).squaredNorm() : 0.0;
  return (beta_x1.imag() * beta_x1.imag() + tail) / (norm + p);
}

void require_nonzero(const Vector& x, double norm, const char* what) {
  if (x.size() == 0 || !(norm > 0.0)) {
    throw InvalidArgument(std::string(what) + ": vector must be nonzero");
  }
}

}  // namespace

Phase::Phase(Complex value) {
  const double mag = std::abs(value);
  if (!(std::abs(mag - 1.0) <= kPhaseTol)) {
    throw InvalidArgument("phase must have unit modulus, got |beta| = " + std::to_string(mag));
  }
  value_ = value / mag;
}

Phase Phase::from_angle(double radians) { return Phase(std::polar(1.0, radians)); }

ElementaryUnitary ElementaryUnitary::identity(Index n) {
  ElementaryUnitary h;
  h.dim_ = n;
  h.kind_ = Kind::identity;
  return h;
}

ElementaryUnitary ElementaryUnitary::rank_one_update(Complex coeff, const Vector& y) {
  const double norm = y.norm();
  if (!(norm > 0.0) || coeff == Complex(0.0, 0.0)) return identity(y.size());
  ElementaryUnitary h;
  h.dim_ = y.size();
  h.kind_ = Kind::rank_one;
  h.y_ = y / norm;
  h.coeff_ = coeff;
  return h;
}

Matrix ElementaryUnitary::dense() const {
  Matrix m = Matrix::Identity(dim_, dim_);
  if (kind_ == Kind::rank_one) m.noalias() += coeff_ * y_ * y_.adjoint();
  return m;
}

Vector ElementaryUnitary::apply(const Vector& v) const {
  if (kind_ == Kind::identity) return v;
  return v + (coeff_ * y_.dot(v)) * y_;
}

Vector ElementaryUnitary::apply_adjoint(const Vector& v) const {
  if (kind_ == Kind::identity) return v;
  return v + (std::conj(coeff_) * y_.dot(v)) * y_;
}

double gamma(const Vector& x, Phase beta) {
  const double norm = x.norm();
  require_nonzero(x, norm, "gamma");
  const Complex bx1 = beta.value() * x(0);
  const double s = distance_to_branch(x, norm, bx1);
  return s == 0.0 ? 0.0 : bx1.imag() / s;
}

Phase beta0(const Vector& x) {
  if (x.size() == 0 || x(0) == Complex(0.0, 0.0)) return Phase::one();
  return Phase(-std::conj(x(0)) / std::abs(x(0)));
}

ElementaryUnitary elementary_unitary(double gamma_value, const Vector& y) {
  return ElementaryUnitary::rank_one_update(-2.0 / Complex(1.0, gamma_value), y);
}

ElementaryUnitary build_reflector(const Vector& x, Phase beta) {
  const double norm = x.norm();
  require_nonzero(x, norm, "build_reflector");
  const Complex conj_beta = std::conj(beta.value());

  bool on_branch = std::abs(x(0) - norm * conj_beta) <= kBranchTol * norm;
  for (Index v = 1; on_branch && v < x.size(); ++v) {
    on_branch = std::abs(x(v)) <= kBranchTol * norm;
  }
  if (on_branch) return ElementaryUnitary::identity(x.size());

  const Complex bx1 = beta.value() * x(0);
  const double s = distance_to_branch(x, norm, bx1);
  // y = x - ‖x‖ conj(β) f, whose first entry is conj(β)(βx¹ - ‖x‖).
  Vector y = x;
  y(0) = conj_beta * Complex(-s, bx1.imag());
  return ElementaryUnitary::rank_one_update(-2.0 * s / Complex(s, bx1.imag()), y);
}

ElementaryUnitary build_reflector(const Vector& x) { return build_reflector(x, beta0(x)); }

Matrix apply_left(const ElementaryUnitary& h, const Matrix& m) {
  if (m.rows() != h.dim()) {
    throw InvalidArgument("apply_left: reflector of size " + std::to_string(h.dim()) +
                          " applied to " + std::to_string(m.rows()) + " rows");
  }
  if (h.is_identity()) return m;
  Matrix out = m;
  const Eigen::RowVectorXcd proj = h.direction().adjoint() * m;
  out.noalias() += std::conj(h.coeff()) * h.direction() * proj;
  return out;
}

Matrix apply_right(const Matrix& m, const ElementaryUnitary& h) {
  if (m.cols() != h.dim()) {
    throw InvalidArgument("apply_right: reflector of size " + std::to_string(h.dim()) +
                          " applied to " + std::to_string(m.cols()) + " columns");
  }
  if (h.is_identity()) return m;
  Matrix out = m;
  const Vector proj = m * h.direction();
  out.noalias() += h.coeff() * proj * h.direction().adjoint();
  return out;
}

}  // namespace equitile
