#include <limits>
#include <sstream>

#include "knotscope/bigint.hpp"
#include "knotscope/cyc_int.hpp"
#include "knotscope/error.hpp"
#include "knotscope/int_matrix.hpp"
#include "knotscope/laurent_poly.hpp"

namespace knotscope {

// ---------------------------------------------------------------- BigInt

BigInt isqrt(const BigInt& n) {
  if (n < 0)
    fail(ErrorCode::InvalidArgument, "isqrt of a negative value");
  return boost::multiprecision::sqrt(n);
}

std::optional<BigInt> exact_sqrt(const BigInt& n) {
  if (n < 0)
    return std::nullopt;
  BigInt r = boost::multiprecision::sqrt(n);
  if (r * r != n)
    return std::nullopt;
  return r;
}

std::uint64_t to_u64(const BigInt& n) {
  if (n < 0 || n > BigInt(std::numeric_limits<std::uint64_t>::max()))
    fail(ErrorCode::Overflow, "value " + n.str() + " does not fit in 64 bits");
  return static_cast<std::uint64_t>(n);
}

// ---------------------------------------------------------------- CycInt

CycInt CycInt::zeta_power(int k) {
  int m = ((k % 8) + 8) % 8;
  CycInt out;
  if (m < 4)
    out.c_[m] = 1;
  else
    out.c_[m - 4] = -1;
  return out;
}

CycInt& CycInt::operator+=(const CycInt& rhs) {
  for (std::size_t i = 0; i < 4; ++i)
    c_[i] += rhs.c_[i];
  return *this;
}

CycInt& CycInt::operator-=(const CycInt& rhs) {
  for (std::size_t i = 0; i < 4; ++i)
    c_[i] -= rhs.c_[i];
  return *this;
}

CycInt operator*(const CycInt& lhs, const CycInt& rhs) {
  CycInt out;
  for (std::size_t i = 0; i < 4; ++i) {
    if (lhs.c_[i] == 0)
      continue;
    for (std::size_t j = 0; j < 4; ++j) {
      if (rhs.c_[j] == 0)
        continue;
      std::size_t k = i + j;
      if (k < 4)
        out.c_[k] += lhs.c_[i] * rhs.c_[j];
      else
        out.c_[k - 4] -= lhs.c_[i] * rhs.c_[j];
    }
  }
  return out;
}

CycInt CycInt::operator-() const { return CycInt(-c_[0], -c_[1], -c_[2], -c_[3]); }

CycInt CycInt::scaled(const BigInt& k) const {
  return CycInt(c_[0] * k, c_[1] * k, c_[2] * k, c_[3] * k);
}

CycInt CycInt::conjugate() const { return CycInt(c_[0], -c_[3], -c_[2], -c_[1]); }

CycInt CycInt::norm() const { return *this * conjugate(); }

std::string CycInt::str() const {
  std::ostringstream os;
  os << "(" << c_[0] << ", " << c_[1] << ", " << c_[2] << ", " << c_[3] << ")";
  return os.str();
}

// ----------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(long constant) {
  if (constant != 0)
    terms_.emplace(0, BigInt(constant));
}

LaurentPoly LaurentPoly::monomial(const BigInt& coeff, int exponent) {
  LaurentPoly p;
  p.add_term(exponent, coeff);
  return p;
}

void LaurentPoly::add_term(int exponent, const BigInt& coeff) {
  if (coeff == 0)
    return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0)
      terms_.erase(it);
  }
}

BigInt LaurentPoly::coefficient(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? BigInt(0) : it->second;
}

int LaurentPoly::min_degree() const {
  if (terms_.empty())
    fail(ErrorCode::InvalidArgument, "degree of the zero polynomial");
  return terms_.begin()->first;
}

int LaurentPoly::max_degree() const {
  if (terms_.empty())
    fail(ErrorCode::InvalidArgument, "degree of the zero polynomial");
  return terms_.rbegin()->first;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  for (const auto& [e, c] : rhs.terms_)
    add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
  for (const auto& [e, c] : rhs.terms_)
    add_term(e, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs) {
  LaurentPoly out;
  for (const auto& [e1, c1] : lhs.terms_)
    for (const auto& [e2, c2] : rhs.terms_)
      out.add_term(e1 + e2, c1 * c2);
  return out;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) { return *this = *this * rhs; }

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_)
    out.terms_.emplace(e, -c);
  return out;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_)
    out.terms_.emplace(e + k, c);
  return out;
}

LaurentPoly LaurentPoly::pow(unsigned n) const {
  LaurentPoly result(1);
  LaurentPoly base = *this;
  while (n > 0) {
    if (n & 1u)
      result *= base;
    n >>= 1u;
    if (n > 0)
      base *= base;
  }
  return result;
}

LaurentPoly LaurentPoly::divided_exactly(const LaurentPoly& divisor) const {
  if (divisor.is_zero())
    fail(ErrorCode::InvalidArgument, "division by the zero polynomial");
  const BigInt& lead = divisor.terms_.rbegin()->second;
  if (lead != 1 && lead != -1)
    fail(ErrorCode::InvalidArgument, "divisor leading coefficient is not a unit");
  if (is_zero())
    return {};

  const int dmax = divisor.max_degree();
  const int lowest_quotient_degree = min_degree() - divisor.min_degree();
  LaurentPoly remainder = *this;
  LaurentPoly quotient;
  while (!remainder.is_zero()) {
    int t = remainder.max_degree() - dmax;
    if (t < lowest_quotient_degree)
      fail(ErrorCode::InvalidArgument, "polynomial division leaves a remainder");
    BigInt q = remainder.terms_.rbegin()->second * lead; // lead is +-1
    quotient.add_term(t, q);
    for (const auto& [e, c] : divisor.terms_)
      remainder.add_term(e + t, -q * c);
  }
  return quotient;
}

CycInt LaurentPoly::evaluate_at_zeta() const {
  CycInt out;
  for (const auto& [e, c] : terms_)
    out += CycInt::zeta_power(e).scaled(c);
  return out;
}

std::string LaurentPoly::str(const std::string& var) const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    first = false;
    if (e == 0) {
      os << mag;
      continue;
    }
    if (mag != 1)
      os << mag << "*";
    os << var;
    if (e != 1)
      os << "^" << e;
  }
  return os.str();
}

// ------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols), row_labels_(rows), col_labels_(cols) {}

IntMatrix IntMatrix::minor(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_)
    fail(ErrorCode::InvalidArgument, "minor index out of range");
  IntMatrix out(rows_ - 1, cols_ - 1);
  for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
    if (i == r)
      continue;
    out.row_labels_[oi] = row_labels_[i];
    for (std::size_t j = 0, oj = 0; j < cols_; ++j) {
      if (j == c)
        continue;
      out.at(oi, oj) = at(i, j);
      ++oj;
    }
    ++oi;
  }
  for (std::size_t j = 0, oj = 0; j < cols_; ++j)
    if (j != c)
      out.col_labels_[oj++] = col_labels_[j];
  return out;
}

BigInt IntMatrix::determinant() const {
  if (rows_ != cols_)
    fail(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0)
    return 1;
  std::vector<BigInt> m = data_;
  auto a = [&](std::size_t i, std::size_t j) -> BigInt& { return m[i * n + j]; };
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0)
        ++p;
      if (p == n)
        return 0;
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // Sylvester's identity guarantees exact division.
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  BigInt det = a(n - 1, n - 1);
  return sign < 0 ? BigInt(-det) : det;
}

} // namespace knotscope
