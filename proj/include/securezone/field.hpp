#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

#include "securezone/bytes.hpp"

namespace securezone {

struct DuplicateIndices : Error {
  using Error::Error;
};

/// Arithmetic in Z_p for a runtime prime modulus up to 63 bits. Values are
/// canonical representatives in [0, p).
class PrimeField {
 public:
  explicit constexpr PrimeField(std::uint64_t modulus) : p_(modulus) {}

  constexpr std::uint64_t modulus() const noexcept { return p_; }

  constexpr std::uint64_t reduce(std::uint64_t a) const noexcept { return a % p_; }

  constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
    std::uint64_t r = a + b;  // p < 2^63, no overflow for canonical inputs
    if (r >= p_) r -= p_;
    return r;
  }

  constexpr std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }

  constexpr std::uint64_t neg(std::uint64_t a) const noexcept { return a == 0 ? 0 : p_ - a; }

  constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }

  constexpr std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const noexcept {
    std::uint64_t acc = 1;
    std::uint64_t b = reduce(base);
    while (exp != 0) {
      if (exp & 1) acc = mul(acc, b);
      b = mul(b, b);
      exp >>= 1;
    }
    return acc;
  }

  /// Multiplicative inverse via Fermat; requires a != 0 and p prime.
  constexpr std::uint64_t inverse(std::uint64_t a) const {
    if (reduce(a) == 0) throw std::invalid_argument("inverse of zero");
    return pow(a, p_ - 2);
  }

 private:
  std::uint64_t p_;
};

/// Evaluates sum coeffs[i] * x^i over the field (coeffs[0] is the constant
/// term, i.e. the shared secret in a threshold polynomial).
inline std::uint64_t eval_polynomial(const PrimeField& f, std::span<const std::uint64_t> coeffs,
                                     std::uint64_t x) {
  std::uint64_t acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = f.add(f.mul(acc, x), f.reduce(coeffs[i]));
  }
  return acc;
}

/// Lagrange basis coefficient at zero: product over j in S, j != i, of
/// (0 - j) / (i - j). Reconstruction weight for share i given share set S.
inline std::uint64_t lagrange_coefficient(const PrimeField& f, std::uint64_t i,
                                          std::span<const std::uint64_t> indices) {
  const std::uint64_t ic = f.reduce(i);
  bool found = false;
  std::uint64_t num = 1;
  std::uint64_t den = 1;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    const std::uint64_t ja = f.reduce(indices[a]);
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      if (ja == f.reduce(indices[b])) throw DuplicateIndices("duplicate share indices");
    }
    if (ja == ic) {
      found = true;
      continue;
    }
    num = f.mul(num, f.neg(ja));
    den = f.mul(den, f.sub(ic, ja));
  }
  if (!found) throw std::invalid_argument("lagrange index not in share set");
  return f.mul(num, f.inverse(den));
}

}  // namespace securezone
