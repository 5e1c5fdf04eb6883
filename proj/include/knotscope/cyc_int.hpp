#pragma once

#include <array>
#include <string>

#include "knotscope/bigint.hpp"

namespace knotscope {

/// Element a0 + a1 z + a2 z^2 + a3 z^3 of Z[z], z a primitive 8th root of
/// unity (z^4 = -1).
class CycInt {
public:
  CycInt() = default;
  CycInt(long a0) : c_{BigInt(a0), 0, 0, 0} {} // NOLINT
  CycInt(BigInt a0, BigInt a1, BigInt a2, BigInt a3)
      : c_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {}

  static CycInt zeta() { return CycInt(0, 1, 0, 0); }
  // z^k for any integer k.
  static CycInt zeta_power(int k);

  const BigInt& operator[](std::size_t i) const { return c_[i]; }

  CycInt& operator+=(const CycInt& rhs);
  CycInt& operator-=(const CycInt& rhs);
  friend CycInt operator+(CycInt lhs, const CycInt& rhs) { return lhs += rhs; }
  friend CycInt operator-(CycInt lhs, const CycInt& rhs) { return lhs -= rhs; }
  friend CycInt operator*(const CycInt& lhs, const CycInt& rhs);
  CycInt& operator*=(const CycInt& rhs) { return *this = *this * rhs; }
  CycInt operator-() const;
  CycInt scaled(const BigInt& k) const;

  friend bool operator==(const CycInt&, const CycInt&) = default;

  // Complex conjugate: z -> z^-1 = -z^3.
  CycInt conjugate() const;
  // z * conj(z); lies in Z[sqrt 2].
  CycInt norm() const;
  bool is_integer() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

  std::string str() const;

private:
  std::array<BigInt, 4> c_{};
};

} // namespace knotscope
