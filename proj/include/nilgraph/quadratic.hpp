#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "nilgraph/rational.hpp"

namespace nilgraph {

/// An element a + b*sqrt(d) of a real quadratic field Q(sqrt d), d a
/// squarefree integer >= 2 (d == 1 marks a plain rational with b == 0).
///
/// Orthogonal intertwiners between permutation representations generally
/// need square roots, so exact linear maps carry entries of this type. Two
/// irrational values from different fields cannot be combined; doing so
/// throws Error(InvalidArgument).
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(long value) : rational_(value) {}  // NOLINT: implicit
  QuadraticNumber(const Rational& value) : rational_(value) {}  // NOLINT
  QuadraticNumber(const Rational& rational, const Rational& irrational,
                  const mpz_class& radicand);

  const Rational& rational_part() const { return rational_; }
  const Rational& irrational_part() const { return irrational_; }
  const mpz_class& radicand() const { return radicand_; }

  bool is_rational() const { return irrational_ == 0; }
  bool is_zero() const { return rational_ == 0 && irrational_ == 0; }
  int sign() const;
  double to_double() const;

  /// "3/2", "-1/2*sqrt(2)", "1/7-3/14*sqrt(2)".
  std::string to_string() const;
  static QuadraticNumber parse(std::string_view text);

  /// Exact square root inside Q(sqrt d) (or a new quadratic field when the
  /// argument is rational). nullopt when the root is not of the form
  /// u + v*sqrt(d') or the argument is negative.
  static std::optional<QuadraticNumber> sqrt(const QuadraticNumber& x);

  QuadraticNumber operator-() const;
  QuadraticNumber conjugate() const;
  QuadraticNumber& operator+=(const QuadraticNumber& o);
  QuadraticNumber& operator-=(const QuadraticNumber& o);
  QuadraticNumber& operator*=(const QuadraticNumber& o);
  QuadraticNumber& operator/=(const QuadraticNumber& o);

  friend QuadraticNumber operator+(QuadraticNumber a, const QuadraticNumber& b) { return a += b; }
  friend QuadraticNumber operator-(QuadraticNumber a, const QuadraticNumber& b) { return a -= b; }
  friend QuadraticNumber operator*(QuadraticNumber a, const QuadraticNumber& b) { return a *= b; }
  friend QuadraticNumber operator/(QuadraticNumber a, const QuadraticNumber& b) { return a /= b; }
  friend bool operator==(const QuadraticNumber& a, const QuadraticNumber& b) {
    return a.rational_ == b.rational_ && a.irrational_ == b.irrational_ &&
           (a.irrational_ == 0 || a.radicand_ == b.radicand_);
  }
  friend bool operator<(const QuadraticNumber& a, const QuadraticNumber& b) {
    return (a - b).sign() < 0;
  }

 private:
  void normalize();
  const mpz_class& common_radicand(const QuadraticNumber& o) const;

  Rational rational_{0};
  Rational irrational_{0};
  mpz_class radicand_{1};
};

QuadraticNumber abs(const QuadraticNumber& x);

}  // namespace nilgraph
