#include "frlab/character_sums.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "compensated.hpp"

namespace frlab {

namespace {

constexpr std::uint64_t kVerifyLimit = 1000;

void require_double_sum_range(const PrimeContext& ctx, std::uint64_t N) {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (2 * N > ctx.p() - 1)
    throw std::invalid_argument("need 2N <= p-1 so that (n+m)! does not vanish (N = " +
                                std::to_string(N) + ", p = " + std::to_string(ctx.p()) + ")");
}

void require_same_modulus(const PrimeContext& ctx, const ResidueSet& s) {
  if (s.modulus() != ctx.p()) throw std::invalid_argument("modulus mismatch with context");
}

}  // namespace

CharacterTable::CharacterTable(const PrimeContext& ctx)
    : ctx_(ctx), roots_(detail::roots_of_unity(ctx.order())) {
  if (ctx.p() > kVerifyLimit) return;
  const auto n = order();
  const double tol = 1e-6 * static_cast<double>(n);
  // sum_k chi_k(a) = (p-1) [a = 1]
  for (Residue a = 1; a < ctx.p(); ++a) {
    std::complex<double> s = 0;
    for (std::uint64_t k = 0; k < n; ++k) s += (*this)(k, a);
    const double expect = a == 1 ? static_cast<double>(n) : 0.0;
    if (std::abs(s - expect) > tol)
      throw std::logic_error("character orthogonality failed at a = " + std::to_string(a));
  }
  // chi_1 is multiplicative; every chi_k is a power of it.
  for (Residue a = 1; a < ctx.p(); ++a)
    for (Residue b = 1; b < ctx.p(); ++b)
      if (std::abs((*this)(1, ctx.mul(a, b)) - (*this)(1, a) * (*this)(1, b)) > 1e-9)
        throw std::logic_error("character multiplicativity failed");
}

std::complex<double> CharacterTable::operator()(std::uint64_t k, Residue a) const {
  const auto d = ctx_.discrete_log(a);
  return roots_[((k % order()) * d) % order()];
}

Eigen::VectorXcd CharacterTable::transform(const Eigen::Ref<const Eigen::VectorXd>& weights) const {
  const auto n = order();
  if (static_cast<std::uint64_t>(weights.size()) != ctx_.p())
    throw std::invalid_argument("weight vector must have length p");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (Residue a = 1; a < ctx_.p(); ++a) {
    const double w = weights(static_cast<Eigen::Index>(a));
    if (w == 0) continue;
    const std::uint64_t d = ctx_.dlog_unchecked(a);
    std::uint64_t e = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
      out(static_cast<Eigen::Index>(k)) += w * roots_[e];
      e += d;
      if (e >= n) e -= n;
    }
  }
  return out;
}

Eigen::VectorXd pair_sum_multiplicities(std::uint64_t N) {
  // index s - 2 for s in [2, 2N]
  Eigen::VectorXd c(static_cast<Eigen::Index>(2 * N - 1));
  const auto n = static_cast<std::int64_t>(N);
  for (std::int64_t s = 2; s <= 2 * n; ++s) c(s - 2) = static_cast<double>(n - std::abs(s - n - 1));
  return c;
}

DoubleSumResult factorial_double_sum(const CharacterTable& tbl, std::uint64_t N, std::uint64_t k) {
  const auto& ctx = tbl.context();
  require_double_sum_range(ctx, N);
  const FactorialTable fact(ctx, 2 * N);
  const Eigen::VectorXd c = pair_sum_multiplicities(N);
  detail::Compensated<std::complex<double>> acc;
  for (std::uint64_t s = 2; s <= 2 * N; ++s)
    acc.add(c(static_cast<Eigen::Index>(s - 2)) * tbl(k, fact[s]));
  DoubleSumResult r;
  r.k = k;
  r.value = acc.value();
  r.modulus = std::abs(r.value);
  r.bound = std::pow(static_cast<double>(N), 1.75) * std::pow(static_cast<double>(ctx.p()), 0.125);
  return r;
}

DoubleSumResult factorial_double_sum(const PrimeContext& ctx, std::uint64_t N, std::uint64_t k) {
  return factorial_double_sum(CharacterTable(ctx), N, k);
}

Eigen::VectorXcd factorial_double_sums(const CharacterTable& tbl, std::uint64_t N) {
  const auto& ctx = tbl.context();
  require_double_sum_range(ctx, N);
  const FactorialTable fact(ctx, 2 * N);
  const Eigen::VectorXd c = pair_sum_multiplicities(N);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ctx.p()));
  for (std::uint64_t s = 2; s <= 2 * N; ++s)
    weights(static_cast<Eigen::Index>(fact[s])) += c(static_cast<Eigen::Index>(s - 2));
  return tbl.transform(weights);
}

MaxDoubleSumReport max_nonprincipal_double_sum(const CharacterTable& tbl, std::uint64_t N) {
  const auto& ctx = tbl.context();
  const Eigen::VectorXcd sums = factorial_double_sums(tbl, N);
  MaxDoubleSumReport r;
  r.principal = sums(0);
  r.max_modulus = -1;
  for (Eigen::Index k = 1; k < sums.size(); ++k) {
    const double m = std::abs(sums(k));
    if (m > r.max_modulus) {
      r.max_modulus = m;
      r.argmax = static_cast<std::uint64_t>(k);
    }
  }
  r.bound = std::pow(static_cast<double>(N), 1.75) * std::pow(static_cast<double>(ctx.p()), 0.125);
  r.ratio = r.max_modulus / r.bound;
  return r;
}

MaxDoubleSumReport max_nonprincipal_double_sum(const PrimeContext& ctx, std::uint64_t N) {
  return max_nonprincipal_double_sum(CharacterTable(ctx), N);
}

Eigen::VectorXcd set_character_sums(const CharacterTable& tbl, const ResidueSet& s) {
  require_same_modulus(tbl.context(), s);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.modulus()));
  s.for_each([&](Residue a) { weights(static_cast<Eigen::Index>(a)) = 1.0; });
  return tbl.transform(weights);
}

ParsevalReport parseval_check(const CharacterTable& tbl, const ResidueSet& s) {
  const Eigen::VectorXcd t = set_character_sums(tbl, s);
  ParsevalReport r;
  r.lhs = t.squaredNorm() / static_cast<double>(tbl.order());
  r.rhs = s.size();
  const double rhs = static_cast<double>(r.rhs);
  r.holds = std::abs(r.lhs - rhs) <= 1e-6 * std::max(1.0, rhs);
  return r;
}

CharacterCount j7_via_characters(const CharacterTable& tbl, std::uint64_t N, const ResidueSet& aa,
                                 Residue lambda) {
  const auto& ctx = tbl.context();
  require_double_sum_range(ctx, N);
  require_same_modulus(ctx, aa);
  lambda %= ctx.p();
  if (lambda == 0) throw std::invalid_argument("lambda must be nonzero mod p");

  const Eigen::VectorXcd s = factorial_double_sums(tbl, N);
  const Eigen::VectorXcd t = set_character_sums(tbl, aa);
  detail::Compensated<std::complex<double>> acc;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const auto sk = s(k);
    const auto tk = t(k);
    acc.add(sk * sk * sk * tk * tk * std::conj(tbl(static_cast<std::uint64_t>(k), lambda)));
  }
  const std::complex<double> total = acc.value() / static_cast<double>(tbl.order());
  return {total.real(), total.imag()};
}

CharacterCount j7_via_characters(const PrimeContext& ctx, std::uint64_t N, const ResidueSet& aa,
                                 Residue lambda) {
  return j7_via_characters(CharacterTable(ctx), N, aa, lambda);
}

std::uint64_t j7_bruteforce(const PrimeContext& ctx, std::uint64_t N, const ResidueSet& aa,
                            Residue lambda) {
  require_double_sum_range(ctx, N);
  require_same_modulus(ctx, aa);
  lambda %= ctx.p();
  if (lambda == 0) throw std::invalid_argument("lambda must be nonzero mod p");
  const double work = std::pow(static_cast<double>(N), 6) * static_cast<double>(aa.size()) *
                      static_cast<double>(aa.size());
  if (work > 1e9) throw std::invalid_argument("brute-force instance too large (N^6 |AA|^2 > 1e9)");

  const FactorialTable f(ctx, 2 * N);
  const auto xs = aa.members();
  std::uint64_t count = 0;
  for (std::uint64_t n1 = 1; n1 <= N; ++n1)
    for (std::uint64_t m1 = 1; m1 <= N; ++m1)
      for (std::uint64_t n2 = 1; n2 <= N; ++n2)
        for (std::uint64_t m2 = 1; m2 <= N; ++m2)
          for (std::uint64_t n3 = 1; n3 <= N; ++n3)
            for (std::uint64_t m3 = 1; m3 <= N; ++m3) {
              const Residue head = ctx.mul(ctx.mul(f[n1 + m1], f[n2 + m2]), f[n3 + m3]);
              for (auto x : xs) {
                const Residue hx = ctx.mul(head, x);
                for (auto y : xs)
                  if (ctx.mul(hx, y) == lambda) ++count;
              }
            }
  return count;
}

}  // namespace frlab
