#include "frlab/modarith.hpp"

#include <algorithm>

namespace frlab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  std::vector<bool> composite(hi + 1, false);
  for (std::uint64_t i = 2; i * i <= hi; ++i)
    if (!composite[i])
      for (std::uint64_t k = i * i; k <= hi; k += i) composite[k] = true;
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n)
    if (!composite[n]) out.push_back(n);
  return out;
}

PrimeContext::PrimeContext(std::uint64_t p) : p_(p), g_(0) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) throw NotAnOddPrime(p);
  if (p > kMaxPrime)
    throw std::invalid_argument("modulus exceeds supported range: " + std::to_string(p));

  const auto factors = prime_factors(p - 1);
  for (Residue cand = 2; cand < p; ++cand) {
    bool generates = true;
    for (auto q : factors) {
      if (pow(cand, (p - 1) / q) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) {
      g_ = cand;
      break;
    }
  }

  auto dlog = std::make_shared<std::vector<std::uint32_t>>(p, 0);
  auto powers = std::make_shared<std::vector<std::uint32_t>>(p - 1, 0);
  Residue acc = 1;
  for (std::uint64_t e = 0; e < p - 1; ++e) {
    (*powers)[e] = static_cast<std::uint32_t>(acc);
    (*dlog)[acc] = static_cast<std::uint32_t>(e);
    acc = mul(acc, g_);
  }
  dlog_ = std::move(dlog);
  powers_ = std::move(powers);
}

Residue PrimeContext::pow(Residue base, std::uint64_t e) const noexcept {
  Residue result = 1 % p_;
  base %= p_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint32_t PrimeContext::discrete_log(Residue a) const {
  a %= p_;
  if (a == 0) throw std::invalid_argument("zero has no discrete logarithm");
  return (*dlog_)[a];
}

Residue PrimeContext::inverse(Residue a) const {
  a %= p_;
  if (a == 0) throw std::invalid_argument("zero has no inverse");
  const std::uint64_t e = (*dlog_)[a];
  return gpow(e == 0 ? 0 : order() - e);
}

FactorialTable::FactorialTable(const PrimeContext& ctx, std::uint64_t n_max) : ctx_(ctx) {
  if (n_max >= ctx.p())
    throw std::invalid_argument("factorials vanish beyond p-1 (n_max = " +
                                std::to_string(n_max) + ")");
  vals_.resize(n_max + 1);
  vals_[0] = 1;
  for (std::uint64_t n = 1; n <= n_max; ++n) vals_[n] = ctx.mul(vals_[n - 1], n);
}

}  // namespace frlab
