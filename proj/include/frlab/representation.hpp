#pragma once

// Representing residues as products of seven factorials with small
// arguments. Two engines: a witness-producing tuple search and an exact
// coverage computation by iterated product sets.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "frlab/modarith.hpp"
#include "frlab/residue_set.hpp"

namespace frlab {

/// Maps each residue v to the smallest n <= B with n! = v (mod p).
class FactorialIndex {
 public:
  FactorialIndex(const PrimeContext& ctx, std::uint64_t B);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::uint64_t bound() const noexcept { return bound_; }
  std::optional<std::uint64_t> lookup(Residue v) const noexcept {
    if (v >= index_.size() || index_[v] == 0) return std::nullopt;
    return index_[v];
  }
  /// |A(0, B)|
  std::uint64_t size() const noexcept { return size_; }
  /// (residue, smallest argument) pairs in increasing residue order.
  std::vector<std::pair<Residue, std::uint64_t>> entries() const;

 private:
  PrimeContext ctx_;
  std::uint64_t bound_;
  std::vector<std::uint32_t> index_;
  std::uint64_t size_ = 0;
};

inline FactorialIndex build_factorial_index(const PrimeContext& ctx, std::uint64_t B) {
  return FactorialIndex(ctx, B);
}

/// n_1! ... n_7! = lambda (mod p), checked on construction.
class RepresentationResult {
 public:
  /// Throws std::logic_error when the product does not equal lambda.
  RepresentationResult(const PrimeContext& ctx, Residue lambda, std::array<std::uint64_t, 7> args);

  Residue lambda() const noexcept { return lambda_; }
  const std::array<std::uint64_t, 7>& args() const noexcept { return args_; }
  std::uint64_t max_arg() const noexcept { return max_arg_; }

 private:
  Residue lambda_;
  std::array<std::uint64_t, 7> args_;
  std::uint64_t max_arg_;
};

/// Product of n_i! mod p, by direct multiplication (no table).
Residue factorial_product(const PrimeContext& ctx, std::span<const std::uint64_t> args);

enum class SearchStatus { Found, NotFound, BudgetExhausted };

const char* to_string(SearchStatus s) noexcept;

struct SearchOutcome {
  SearchStatus status = SearchStatus::NotFound;
  std::optional<RepresentationResult> result;
  std::uint64_t attempts = 0;  ///< index lookups performed
};

inline constexpr std::uint64_t kDefaultSearchBudget = 100'000'000;

/// Nondecreasing n_1 <= ... <= n_6 <= B in order of increasing n_6, with n_7
/// resolved by one index lookup. NotFound only after every 6-tuple is tried.
SearchOutcome find_representation(const PrimeContext& ctx, Residue lambda, std::uint64_t B,
                                  std::uint64_t budget = kDefaultSearchBudget);
SearchOutcome find_representation(const FactorialIndex& index, Residue lambda,
                                  std::uint64_t budget = kDefaultSearchBudget);

/// Seven-fold product set of F_B = { n! mod p : 1 <= n <= B }.
ResidueSet seven_fold_coverage(const PrimeContext& ctx, std::uint64_t B);

struct CoveragePoint {
  std::uint64_t B;
  std::uint64_t covered;
  double fraction;
};

struct MinimalBoundReport {
  std::optional<std::uint64_t> B_star;  ///< empty when no B <= p-1 suffices
  std::vector<CoveragePoint> coverage;
};

MinimalBoundReport minimal_bound_for_all(const PrimeContext& ctx);

/// Smallest b such that lambda is a product of seven factorials with all
/// arguments <= b. Exact, via coverage sets.
std::optional<std::uint64_t> exact_minimal_max(const PrimeContext& ctx, Residue lambda);

/// p^{11/12} / (log p)^{1/2}
double theorem_scale(std::uint64_t p);

struct TrendReport {
  double exponent = 0;   ///< slope of log B* against log p
  double intercept = 0;
  std::vector<double> residuals;
  std::vector<double> ratios;  ///< B* / theorem_scale(p)
};

TrendReport exponent_trend(std::span<const std::pair<std::uint64_t, std::uint64_t>> points);

}  // namespace frlab
