#pragma once

// Subsets of F_p^* as dense bitsets, plus the factorial-window sets
// A(L, N) = { n! mod p : L+1 <= n <= L+N } and the cardinality experiments
// built on them.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "frlab/modarith.hpp"

namespace frlab {

/// A subset of F_p^* with an exact cardinality counter. Zero is never a member.
class ResidueSet {
 public:
  explicit ResidueSet(std::uint64_t p);
  ResidueSet(std::uint64_t p, std::initializer_list<Residue> members);
  ResidueSet(std::uint64_t p, std::span<const Residue> members);

  /// All of F_p^*.
  static ResidueSet full(std::uint64_t p);

  std::uint64_t modulus() const noexcept { return p_; }
  std::uint64_t size() const noexcept { return card_; }
  bool empty() const noexcept { return card_ == 0; }

  bool contains(Residue a) const noexcept {
    return a != 0 && a < p_ && ((words_[a >> 6] >> (a & 63)) & 1u);
  }

  /// Adds a; returns true when a was new. Throws for 0 or a >= p.
  bool insert(Residue a);

  /// Members in increasing order.
  std::vector<Residue> members() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        f(static_cast<Residue>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  ResidueSet& operator|=(const ResidueSet& other);
  ResidueSet& operator&=(const ResidueSet& other);

  friend ResidueSet operator|(ResidueSet a, const ResidueSet& b) { return a |= b; }
  friend ResidueSet operator&(ResidueSet a, const ResidueSet& b) { return a &= b; }
  friend bool operator==(const ResidueSet& a, const ResidueSet& b) noexcept {
    return a.p_ == b.p_ && a.words_ == b.words_;
  }

  /// |A \ B| without materializing the difference.
  std::uint64_t count_not_in(const ResidueSet& other) const;

 private:
  void check_same_modulus(const ResidueSet& other) const;
  void recount() noexcept;

  std::uint64_t p_;
  std::vector<std::uint64_t> words_;
  std::uint64_t card_ = 0;
};

/// The window (L, L+N] of factorial arguments; requires 0 < L+1 <= L+N < p.
struct WindowSpec {
  std::uint64_t L = 0;
  std::uint64_t N = 1;

  /// Throws std::invalid_argument when the window does not fit below p.
  void validate(std::uint64_t p) const;
  std::uint64_t first() const noexcept { return L + 1; }
  std::uint64_t last() const noexcept { return L + N; }
};

ResidueSet factorial_range_set(const PrimeContext& ctx, const WindowSpec& w);
/// Same set, reading factorials from a precomputed table covering L+N.
ResidueSet factorial_range_set(const FactorialTable& table, const WindowSpec& w);

ResidueSet product_set(const ResidueSet& a, const ResidueSet& b);
ResidueSet quotient_set(const PrimeContext& ctx, const ResidueSet& a, const ResidueSet& b);
/// { a^{-1} : a in A }
ResidueSet inverse_set(const PrimeContext& ctx, const ResidueSet& a);

/// m = n! / (n-1)!; element 1 is witnessed by the pair (L+1, L+1).
struct InclusionWitness {
  Residue element;
  std::uint64_t numerator_arg;
  std::uint64_t denominator_arg;
};

struct InclusionReport {
  bool holds = true;
  std::vector<InclusionWitness> witnesses;
  std::optional<Residue> missing;
};

/// Verifies {1} u {L+2, ..., L+N} (mod p) lies in A/A by exhibiting the
/// factorial pair for each element and checking both against the set.
InclusionReport interval_inclusion_check(const PrimeContext& ctx, const WindowSpec& w);
InclusionReport interval_inclusion_check(const FactorialTable& table, const WindowSpec& w);

struct RuzsaReport {
  std::uint64_t lhs = 0;  ///< |X/Y|
  double rhs = 0;         ///< |XZ| |ZY| / |Z|
  std::uint64_t xz = 0, zy = 0, z = 0;
  bool holds = false;     ///< decided exactly as lhs * |Z| <= |XZ| |ZY|
};

RuzsaReport ruzsa_check(const PrimeContext& ctx, const ResidueSet& x, const ResidueSet& y,
                        const ResidueSet& z);

/// 1 - 1/e, the conjectured limiting density of distinct factorials.
inline constexpr double kFactorialDensityConjecture = 0.63212055882855767;

struct DensityRow {
  std::uint64_t p;
  std::uint64_t distinct;  ///< |A(0, p-1)|
  double density;          ///< distinct / (p - 1)
};

struct DensityReport {
  std::vector<DensityRow> rows;
  double mean = 0;
  double deviation = 0;  ///< mean - (1 - 1/e)
};

/// Distinct values among 1!, ..., (p-1)! mod p.
std::uint64_t distinct_factorials(std::uint64_t p);
DensityReport density_experiment(std::span<const std::uint64_t> primes);

struct FareyReport {
  std::uint64_t N = 0;
  std::uint64_t coprime_pairs = 0;
  std::uint64_t distinct_residues = 0;
  double ratio = 0;  ///< coprime_pairs / ((6/pi^2) N^2)
};

/// Requires N^2 < p, where distinct reduced fractions stay distinct mod p.
FareyReport farey_count(const PrimeContext& ctx, std::uint64_t N);

struct QuotientGrowthRow {
  WindowSpec window;
  std::uint64_t set_size;       ///< |A|
  std::uint64_t quotient_size;  ///< |A/A|
  double normalized;            ///< |A/A| / (N log(p/N))
  bool lower_bound_holds;       ///< |A/A| >= N
  bool square_bound_holds;      ///< |A/A| <= |A|^2
};

std::vector<QuotientGrowthRow> quotient_growth_experiment(const PrimeContext& ctx,
                                                          std::span<const WindowSpec> windows);

}  // namespace frlab
