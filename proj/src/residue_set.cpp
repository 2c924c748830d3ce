#include "frlab/residue_set.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace frlab {

ResidueSet::ResidueSet(std::uint64_t p) : p_(p), words_((p + 63) / 64, 0) {
  if (p < 2) throw std::invalid_argument("residue set modulus must be at least 2");
}

ResidueSet::ResidueSet(std::uint64_t p, std::initializer_list<Residue> members)
    : ResidueSet(p, std::span<const Residue>(members.begin(), members.size())) {}

ResidueSet::ResidueSet(std::uint64_t p, std::span<const Residue> members) : ResidueSet(p) {
  for (auto a : members) insert(a);
}

ResidueSet ResidueSet::full(std::uint64_t p) {
  ResidueSet s(p);
  for (Residue a = 1; a < p; ++a) s.insert(a);
  return s;
}

bool ResidueSet::insert(Residue a) {
  if (a == 0) throw std::invalid_argument("zero is not a member of F_p^*");
  if (a >= p_)
    throw std::invalid_argument("residue " + std::to_string(a) + " out of range for p = " +
                                std::to_string(p_));
  std::uint64_t& w = words_[a >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (a & 63);
  if (w & bit) return false;
  w |= bit;
  ++card_;
  return true;
}

std::vector<Residue> ResidueSet::members() const {
  std::vector<Residue> out;
  out.reserve(card_);
  for_each([&](Residue a) { out.push_back(a); });
  return out;
}

void ResidueSet::check_same_modulus(const ResidueSet& other) const {
  if (other.p_ != p_)
    throw std::invalid_argument("modulus mismatch: " + std::to_string(p_) + " vs " +
                                std::to_string(other.p_));
}

void ResidueSet::recount() noexcept {
  card_ = 0;
  for (auto w : words_) card_ += static_cast<std::uint64_t>(std::popcount(w));
}

ResidueSet& ResidueSet::operator|=(const ResidueSet& other) {
  check_same_modulus(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  recount();
  return *this;
}

ResidueSet& ResidueSet::operator&=(const ResidueSet& other) {
  check_same_modulus(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  recount();
  return *this;
}

std::uint64_t ResidueSet::count_not_in(const ResidueSet& other) const {
  check_same_modulus(other);
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i)
    n += static_cast<std::uint64_t>(std::popcount(words_[i] & ~other.words_[i]));
  return n;
}

void WindowSpec::validate(std::uint64_t p) const {
  // N = 1 is admitted here; the quotient experiment requires N >= 2.
  if (N < 1) throw std::invalid_argument("window length N must be at least 1");
  if (L + N >= p)
    throw std::invalid_argument("window violates L+N < p (L = " + std::to_string(L) +
                                ", N = " + std::to_string(N) + ", p = " + std::to_string(p) +
                                ")");
}

ResidueSet factorial_range_set(const FactorialTable& table, const WindowSpec& w) {
  const auto p = table.context().p();
  w.validate(p);
  if (w.last() > table.n_max())
    throw std::invalid_argument("factorial table too short for window");
  ResidueSet s(p);
  for (auto n = w.first(); n <= w.last(); ++n) s.insert(table[n]);
  return s;
}

ResidueSet factorial_range_set(const PrimeContext& ctx, const WindowSpec& w) {
  w.validate(ctx.p());
  return factorial_range_set(FactorialTable(ctx, w.last()), w);
}

ResidueSet product_set(const ResidueSet& a, const ResidueSet& b) {
  if (a.modulus() != b.modulus())
    throw std::invalid_argument("modulus mismatch: " + std::to_string(a.modulus()) + " vs " +
                                std::to_string(b.modulus()));
  const auto p = a.modulus();
  ResidueSet out(p);
  const auto bm = b.members();
  a.for_each([&](Residue x) {
    for (auto y : bm) out.insert((x * y) % p);
  });
  return out;
}

ResidueSet inverse_set(const PrimeContext& ctx, const ResidueSet& a) {
  if (a.modulus() != ctx.p()) throw std::invalid_argument("modulus mismatch with context");
  ResidueSet out(ctx.p());
  a.for_each([&](Residue x) { out.insert(ctx.inverse(x)); });
  return out;
}

ResidueSet quotient_set(const PrimeContext& ctx, const ResidueSet& a, const ResidueSet& b) {
  if (a.modulus() != b.modulus())
    throw std::invalid_argument("modulus mismatch: " + std::to_string(a.modulus()) + " vs " +
                                std::to_string(b.modulus()));
  return product_set(a, inverse_set(ctx, b));
}

InclusionReport interval_inclusion_check(const FactorialTable& table, const WindowSpec& w) {
  const auto& ctx = table.context();
  const ResidueSet set = factorial_range_set(table, w);

  InclusionReport report;
  report.witnesses.reserve(w.N);
  auto verify = [&](Residue element, std::uint64_t num, std::uint64_t den) {
    const Residue a = table[num];
    const Residue b = table[den];
    const bool ok = set.contains(a) && set.contains(b) && ctx.mul(a, ctx.inverse(b)) == element;
    if (!ok) {
      report.holds = false;
      if (!report.missing) report.missing = element;
      return;
    }
    report.witnesses.push_back({element, num, den});
  };

  verify(1, w.first(), w.first());
  for (auto m = w.L + 2; m <= w.last(); ++m) verify(m % ctx.p(), m, m - 1);
  return report;
}

InclusionReport interval_inclusion_check(const PrimeContext& ctx, const WindowSpec& w) {
  w.validate(ctx.p());
  return interval_inclusion_check(FactorialTable(ctx, w.last()), w);
}

RuzsaReport ruzsa_check(const PrimeContext& ctx, const ResidueSet& x, const ResidueSet& y,
                        const ResidueSet& z) {
  if (z.empty()) throw std::invalid_argument("Ruzsa check needs a nonempty Z");
  RuzsaReport r;
  r.lhs = quotient_set(ctx, x, y).size();
  r.xz = product_set(x, z).size();
  r.zy = product_set(z, y).size();
  r.z = z.size();
  r.rhs = static_cast<double>(r.xz) * static_cast<double>(r.zy) / static_cast<double>(r.z);
  r.holds = r.lhs * r.z <= r.xz * r.zy;
  return r;
}

std::uint64_t distinct_factorials(std::uint64_t p) {
  if (p < 3 || !is_prime(p)) throw NotAnOddPrime(p);
  ResidueSet s(p);
  Residue f = 1;
  for (std::uint64_t n = 1; n < p; ++n) {
    f = (f * n) % p;
    s.insert(f);
  }
  return s.size();
}

DensityReport density_experiment(std::span<const std::uint64_t> primes) {
  for (auto p : primes)
    if (p < 3 || !is_prime(p)) throw NotAnOddPrime(p);
  DensityReport report;
  for (auto p : primes) {
    const auto d = distinct_factorials(p);
    report.rows.push_back({p, d, static_cast<double>(d) / static_cast<double>(p - 1)});
  }
  if (!report.rows.empty()) {
    double sum = 0;
    for (const auto& r : report.rows) sum += r.density;
    report.mean = sum / static_cast<double>(report.rows.size());
    report.deviation = report.mean - kFactorialDensityConjecture;
  }
  return report;
}

FareyReport farey_count(const PrimeContext& ctx, std::uint64_t N) {
  if (N < 1) throw std::invalid_argument("Farey count needs N >= 1");
  if (N * N >= ctx.p())
    throw std::invalid_argument("Farey count needs N < sqrt(p) (N = " + std::to_string(N) +
                                ", p = " + std::to_string(ctx.p()) + ")");
  FareyReport r;
  r.N = N;
  ResidueSet residues(ctx.p());
  for (std::uint64_t m = 1; m <= N; ++m) {
    const Residue inv = ctx.inverse(m);
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (std::gcd(n, m) == 1) ++r.coprime_pairs;
      residues.insert(ctx.mul(n, inv));
    }
  }
  r.distinct_residues = residues.size();
  const double pi = std::acos(-1.0);
  r.ratio = static_cast<double>(r.coprime_pairs) /
            (6.0 / (pi * pi) * static_cast<double>(N) * static_cast<double>(N));
  return r;
}

std::vector<QuotientGrowthRow> quotient_growth_experiment(const PrimeContext& ctx,
                                                          std::span<const WindowSpec> windows) {
  std::uint64_t longest = 0;
  for (const auto& w : windows) {
    w.validate(ctx.p());
    if (w.N < 2) throw std::invalid_argument("quotient growth experiment needs N >= 2");
    longest = std::max(longest, w.last());
  }
  const FactorialTable table(ctx, longest);
  std::vector<QuotientGrowthRow> rows;
  for (const auto& w : windows) {
    const auto a = factorial_range_set(table, w);
    const auto q = quotient_set(ctx, a, a);
    const double n = static_cast<double>(w.N);
    rows.push_back({w, a.size(), q.size(),
                    static_cast<double>(q.size()) / (n * std::log(static_cast<double>(ctx.p()) / n)),
                    q.size() >= w.N, q.size() <= a.size() * a.size()});
  }
  return rows;
}

}  // namespace frlab
