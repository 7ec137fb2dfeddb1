#pragma once

#include "equitile/types.hpp"

namespace equitile {

/// Complex number of unit modulus.
class Phase {
 public:
  /// Throws InvalidArgument if ||value| - 1| exceeds 1e-12.
  explicit Phase(Complex value);
  static Phase one() { return Phase(Complex(1.0, 0.0)); }
  static Phase from_angle(double radians);

  Complex value() const { return value_; }
  Phase conj() const { return Phase(std::conj(value_)); }

  friend bool operator==(const Phase&, const Phase&) = default;

 private:
  Complex value_{1.0, 0.0};
};

/// Unitary rank-one update of the identity, H = I + coeff * y y', with y of
/// unit norm. Stores O(n) data; the dense form is only built by dense().
class ElementaryUnitary {
 public:
  enum class Kind { identity, rank_one };

  static ElementaryUnitary identity(Index n);
  /// I + coeff * y y' / (y'y). Caller guarantees unitarity.
  static ElementaryUnitary rank_one_update(Complex coeff, const Vector& y);

  Index dim() const { return dim_; }
  Kind kind() const { return kind_; }
  bool is_identity() const { return kind_ == Kind::identity; }
  /// Unit-norm update direction (empty for the identity kind).
  const Vector& direction() const { return y_; }
  Complex coeff() const { return coeff_; }

  Matrix dense() const;

  /// H v and H' v.
  Vector apply(const Vector& v) const;
  Vector apply_adjoint(const Vector& v) const;

 private:
  ElementaryUnitary() = default;

  Index dim_ = 0;
  Kind kind_ = Kind::identity;
  Vector y_;
  Complex coeff_{0.0, 0.0};
};

/// (‖x‖ - Re(βx¹))† Im(βx¹) with c† = 0 for c = 0.
double gamma(const Vector& x, Phase beta);

/// -conj(x¹)/|x¹|, or 1 when x¹ = 0.
Phase beta0(const Vector& x);

/// U(γ, y) = I - 2/(1 + iγ) (y'y)† y y'.
ElementaryUnitary elementary_unitary(double gamma_value, const Vector& y);

/// H(x, β): the elementary unitary with H f = (β/‖x‖) x and H' x = (‖x‖/β) f,
/// where f is the first standard basis vector. Identity kind when
/// x/‖x‖ = conj(β) f up to 1e-14 elementwise.
ElementaryUnitary build_reflector(const Vector& x, Phase beta);
/// H(x, β0(x)).
ElementaryUnitary build_reflector(const Vector& x);

/// H' M.
Matrix apply_left(const ElementaryUnitary& h, const Matrix& m);
/// M H.
Matrix apply_right(const Matrix& m, const ElementaryUnitary& h);

inline Matrix dense(const ElementaryUnitary& h) { return h.dense(); }

}  // namespace equitile
