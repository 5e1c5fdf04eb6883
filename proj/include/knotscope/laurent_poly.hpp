#pragma once

#include <map>
#include <string>

#include "knotscope/bigint.hpp"
#include "knotscope/cyc_int.hpp"

namespace knotscope {

/// Laurent polynomial in one variable with unbounded integer coefficients.
/// Zero coefficients are never stored.
class LaurentPoly {
public:
  LaurentPoly() = default;
  LaurentPoly(long constant); // NOLINT: integers promote naturally

  static LaurentPoly monomial(const BigInt& coeff, int exponent);

  bool is_zero() const noexcept { return terms_.empty(); }
  const std::map<int, BigInt>& terms() const noexcept { return terms_; }
  BigInt coefficient(int exponent) const;
  int min_degree() const; // requires nonzero
  int max_degree() const;

  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(const LaurentPoly& rhs);

  friend LaurentPoly operator+(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs += rhs; }
  friend LaurentPoly operator-(LaurentPoly lhs, const LaurentPoly& rhs) { return lhs -= rhs; }
  friend LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs);
  LaurentPoly operator-() const;

  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  // Multiply by x^k.
  LaurentPoly shifted(int k) const;
  LaurentPoly pow(unsigned n) const;

  // Exact division; throws InvalidArgument if the divisor does not divide
  // this polynomial or its leading coefficient is not a unit.
  LaurentPoly divided_exactly(const LaurentPoly& divisor) const;

  // Substitute x = zeta, a primitive 8th root of unity.
  CycInt evaluate_at_zeta() const;

  // e.g. "-A^-7 + A^-3 + A^5"
  std::string str(const std::string& var = "A") const;

private:
  void add_term(int exponent, const BigInt& coeff);

  std::map<int, BigInt> terms_;
};

} // namespace knotscope
