#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace knotscope {

using BigInt = boost::multiprecision::cpp_int;

// Floor square root of a nonnegative value.
BigInt isqrt(const BigInt& n);

// Exact square root, or nullopt when n is negative or not a perfect square.
std::optional<BigInt> exact_sqrt(const BigInt& n);

// Narrowing with an Overflow error instead of wraparound.
std::uint64_t to_u64(const BigInt& n);

inline std::string to_decimal(const BigInt& n) { return n.str(); }

} // namespace knotscope
