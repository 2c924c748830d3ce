#pragma once

// Arithmetic in the prime field F_p: primality, primitive roots, dense
// discrete-log tables and factorial tables.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frlab {

/// A residue class mod p, always stored in [0, p-1].
using Residue = std::uint64_t;

/// Raised whenever a modulus is composite, even, or smaller than 3.
class NotAnOddPrime : public std::invalid_argument {
 public:
  explicit NotAnOddPrime(std::uint64_t value)
      : std::invalid_argument("not an odd prime: " + std::to_string(value)),
        value_(value) {}
  std::uint64_t value() const noexcept { return value_; }

 private:
  std::uint64_t value_;
};

/// Deterministic trial-division primality test.
bool is_prime(std::uint64_t n);

/// Distinct prime factors of n in increasing order.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// All primes in [lo, hi].
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi);

/// An odd prime together with a primitive root and the full discrete-log
/// table. Immutable; copies share the underlying tables.
class PrimeContext {
 public:
  /// Largest modulus accepted; tables are dense arrays of length p.
  static constexpr std::uint64_t kMaxPrime = (std::uint64_t{1} << 31) - 1;

  explicit PrimeContext(std::uint64_t p);

  std::uint64_t p() const noexcept { return p_; }
  /// Order of the multiplicative group, p - 1.
  std::uint64_t order() const noexcept { return p_ - 1; }
  Residue generator() const noexcept { return g_; }

  Residue reduce(std::int64_t a) const noexcept {
    const auto m = static_cast<std::int64_t>(p_);
    const std::int64_t r = a % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
  }
  Residue mul(Residue a, Residue b) const noexcept { return (a * b) % p_; }
  Residue add(Residue a, Residue b) const noexcept {
    const Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue pow(Residue base, std::uint64_t e) const noexcept;

  /// g^e for any e >= 0, by table lookup.
  Residue gpow(std::uint64_t e) const noexcept { return (*powers_)[e % order()]; }

  /// e in [0, p-2] with g^e = a. Throws for a = 0.
  std::uint32_t discrete_log(Residue a) const;
  /// Unchecked variant for hot loops; a must lie in [1, p-1].
  std::uint32_t dlog_unchecked(Residue a) const noexcept { return (*dlog_)[a]; }

  /// b with a*b = 1. Throws for a = 0.
  Residue inverse(Residue a) const;

  std::span<const std::uint32_t> dlog_table() const noexcept { return *dlog_; }

  friend bool operator==(const PrimeContext& a, const PrimeContext& b) noexcept {
    return a.p_ == b.p_ && a.g_ == b.g_;
  }

 private:
  std::uint64_t p_;
  Residue g_;
  std::shared_ptr<const std::vector<std::uint32_t>> dlog_;
  std::shared_ptr<const std::vector<std::uint32_t>> powers_;
};

/// Convenience wrapper matching the free-function style used elsewhere.
inline PrimeContext build_prime_context(std::uint64_t p) { return PrimeContext(p); }

inline Residue mod_inverse(const PrimeContext& ctx, Residue a) { return ctx.inverse(a); }
inline std::uint32_t discrete_log(const PrimeContext& ctx, Residue a) {
  return ctx.discrete_log(a);
}

/// vals[n] = n! mod p for 0 <= n <= n_max, with n_max <= p-1.
class FactorialTable {
 public:
  FactorialTable(const PrimeContext& ctx, std::uint64_t n_max);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::uint64_t n_max() const noexcept { return vals_.size() - 1; }
  Residue operator[](std::uint64_t n) const { return vals_.at(n); }
  std::span<const Residue> values() const noexcept { return vals_; }

 private:
  PrimeContext ctx_;
  std::vector<Residue> vals_;
};

inline FactorialTable factorial_table(const PrimeContext& ctx, std::uint64_t n_max) {
  return FactorialTable(ctx, n_max);
}

}  // namespace frlab
