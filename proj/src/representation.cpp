#include "frlab/representation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace frlab {

FactorialIndex::FactorialIndex(const PrimeContext& ctx, std::uint64_t B)
    : ctx_(ctx), bound_(B), index_(ctx.p(), 0) {
  if (B < 1) throw std::invalid_argument("argument bound B must be at least 1");
  if (B >= ctx.p())
    throw std::invalid_argument("argument bound B must be below p (B = " + std::to_string(B) + ")");
  Residue f = 1;
  for (std::uint64_t n = 1; n <= B; ++n) {
    f = ctx.mul(f, n);
    if (index_[f] == 0) {
      index_[f] = static_cast<std::uint32_t>(n);
      ++size_;
    }
  }
}

std::vector<std::pair<Residue, std::uint64_t>> FactorialIndex::entries() const {
  std::vector<std::pair<Residue, std::uint64_t>> out;
  for (Residue v = 1; v < index_.size(); ++v)
    if (index_[v] != 0) out.emplace_back(v, index_[v]);
  return out;
}

Residue factorial_product(const PrimeContext& ctx, std::span<const std::uint64_t> args) {
  Residue acc = 1;
  for (auto n : args)
    for (std::uint64_t i = 2; i <= n; ++i) acc = ctx.mul(acc, i % ctx.p());
  return acc;
}

RepresentationResult::RepresentationResult(const PrimeContext& ctx, Residue lambda,
                                           std::array<std::uint64_t, 7> args)
    : lambda_(lambda % ctx.p()), args_(args), max_arg_(*std::max_element(args.begin(), args.end())) {
  if (std::any_of(args.begin(), args.end(), [](auto n) { return n < 1; }))
    throw std::logic_error("factorial arguments must be positive");
  if (factorial_product(ctx, args_) != lambda_)
    throw std::logic_error("product of factorials does not equal lambda = " +
                           std::to_string(lambda_));
}

const char* to_string(SearchStatus s) noexcept {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NotFound: return "not_found";
    case SearchStatus::BudgetExhausted: return "budget_exhausted";
  }
  return "unknown";
}

namespace {

class TupleSearch {
 public:
  TupleSearch(const FactorialIndex& index, Residue lambda, std::uint64_t budget)
      : index_(index), ctx_(index.context()), fact_(ctx_, index.bound()), lambda_(lambda),
        budget_(budget) {}

  SearchOutcome run() {
    for (std::uint64_t top = 1; top <= index_.bound(); ++top) {
      tuple_[5] = top;
      if (descend(0, top, fact_[top])) break;
      if (outcome_.status == SearchStatus::BudgetExhausted) break;
    }
    return std::move(outcome_);
  }

 private:
  // Fills tuple_[depth..4] nondecreasing and <= tuple_[5].
  bool descend(std::size_t depth, std::uint64_t upper, Residue partial) {
    if (depth == 5) return probe(partial);
    const std::uint64_t lower = depth == 0 ? 1 : tuple_[depth - 1];
    for (std::uint64_t n = lower; n <= upper; ++n) {
      tuple_[depth] = n;
      if (descend(depth + 1, upper, ctx_.mul(partial, fact_[n]))) return true;
      if (outcome_.status == SearchStatus::BudgetExhausted) return false;
    }
    return false;
  }

  bool probe(Residue partial) {
    if (outcome_.attempts >= budget_) {
      outcome_.status = SearchStatus::BudgetExhausted;
      return false;
    }
    ++outcome_.attempts;
    const auto n7 = index_.lookup(ctx_.mul(lambda_, ctx_.inverse(partial)));
    if (!n7) return false;
    std::array<std::uint64_t, 7> args{};
    std::copy(tuple_.begin(), tuple_.end(), args.begin());
    args[6] = *n7;
    outcome_.result.emplace(ctx_, lambda_, args);
    outcome_.status = SearchStatus::Found;
    return true;
  }

  const FactorialIndex& index_;
  const PrimeContext& ctx_;
  FactorialTable fact_;
  Residue lambda_;
  std::uint64_t budget_;
  std::array<std::uint64_t, 6> tuple_{};
  SearchOutcome outcome_;
};

}  // namespace

SearchOutcome find_representation(const FactorialIndex& index, Residue lambda, std::uint64_t budget) {
  lambda %= index.context().p();
  if (lambda == 0) throw std::invalid_argument("lambda must be nonzero mod p");
  return TupleSearch(index, lambda, budget).run();
}

SearchOutcome find_representation(const PrimeContext& ctx, Residue lambda, std::uint64_t B,
                                  std::uint64_t budget) {
  if (lambda % ctx.p() == 0) throw std::invalid_argument("lambda must be nonzero mod p");
  return find_representation(FactorialIndex(ctx, B), lambda, budget);
}

namespace {

ResidueSet factorial_prefix_set(const FactorialTable& table, std::uint64_t B) {
  ResidueSet f(table.context().p());
  for (std::uint64_t n = 1; n <= B; ++n) f.insert(table[n]);
  return f;
}

ResidueSet seven_fold(const ResidueSet& f) {
  ResidueSet s(f.modulus(), {1});
  for (int i = 0; i < 7 && s.size() < f.modulus() - 1; ++i) s = product_set(s, f);
  return s;
}

}  // namespace

ResidueSet seven_fold_coverage(const PrimeContext& ctx, std::uint64_t B) {
  if (B < 1 || B >= ctx.p()) throw std::invalid_argument("argument bound must satisfy 1 <= B < p");
  const FactorialTable table(ctx, B);
  return seven_fold(factorial_prefix_set(table, B));
}

MinimalBoundReport minimal_bound_for_all(const PrimeContext& ctx) {
  const auto p = ctx.p();
  const FactorialTable table(ctx, p - 1);
  MinimalBoundReport report;
  ResidueSet f(p);
  for (std::uint64_t B = 1; B < p; ++B) {
    f.insert(table[B]);
    const auto covered = seven_fold(f).size();
    report.coverage.push_back(
        {B, covered, static_cast<double>(covered) / static_cast<double>(p - 1)});
    if (covered == p - 1) {
      report.B_star = B;
      break;
    }
  }
  return report;
}

std::optional<std::uint64_t> exact_minimal_max(const PrimeContext& ctx, Residue lambda) {
  lambda %= ctx.p();
  if (lambda == 0) throw std::invalid_argument("lambda must be nonzero mod p");
  const FactorialTable table(ctx, ctx.p() - 1);
  ResidueSet f(ctx.p());
  for (std::uint64_t b = 1; b < ctx.p(); ++b) {
    f.insert(table[b]);
    if (seven_fold(f).contains(lambda)) return b;
  }
  return std::nullopt;
}

double theorem_scale(std::uint64_t p) {
  const double pd = static_cast<double>(p);
  return std::pow(pd, 11.0 / 12.0) / std::sqrt(std::log(pd));
}

TrendReport exponent_trend(std::span<const std::pair<std::uint64_t, std::uint64_t>> points) {
  if (points.size() < 3) throw std::invalid_argument("exponent fit needs at least 3 points");
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [p, b] = points[static_cast<std::size_t>(i)];
    if (p < 2 || b < 1) throw std::invalid_argument("exponent fit needs p >= 2 and B* >= 1");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(static_cast<double>(p));
    target(i) = std::log(static_cast<double>(b));
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
  const Eigen::VectorXd resid = target - design * coef;

  TrendReport r;
  r.intercept = coef(0);
  r.exponent = coef(1);
  r.residuals.assign(resid.data(), resid.data() + resid.size());
  for (const auto& [p, b] : points) r.ratios.push_back(static_cast<double>(b) / theorem_scale(p));
  return r;
}

}  // namespace frlab
