// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frlab/character_sums.hpp"
#include "frlab/curve_sums.hpp"
#include "frlab/experiment.hpp"
#include "frlab/representation.hpp"
#include "frlab/residue_set.hpp"

using namespace frlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

int failures = 0;

template <class Fn>
void criterion(const char* id, const char* title, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    fn(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  std::printf("[%s] %s %s -- %s(%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str(),
              dt.count());
  for (const auto& n : o.notes) std::printf("       note: %s\n", n.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

ResidueSet random_set(std::mt19937_64& rng, std::uint64_t p, std::uint64_t max_size) {
  ResidueSet s(p);
  const auto size = 1 + rng() % std::min(max_size, p - 1);
  while (s.size() < size) s.insert(1 + rng() % (p - 1));
  return s;
}

// Windows (L, N) at p on which X_1..X_5 are all defined.
std::vector<WindowSpec> xj_windows(std::uint64_t p) {
  std::vector<WindowSpec> out;
  for (const WindowSpec w : {WindowSpec{0, (p - 1) / 2}, WindowSpec{p / 5, p / 2}, WindowSpec{0, p / 10 + 13},
                             WindowSpec{p / 3, p / 3}})
    if (w.N >= 13 && w.L + w.N < p && xj_range(w.N) + w.L + 5 < p) out.push_back(w);
  return out;
}

}  // namespace

int main() {
  criterion("AC1", "modular and character identities", [](Outcome& o) {
    std::mt19937_64 rng(101);
    std::uint64_t primes = 0, sets = 0;
    for (auto p : primes_between(3, 499)) {
      const PrimeContext ctx(p);
      if (factorial_table(ctx, p - 1)[p - 1] != p - 1) o.fail("Wilson at p=" + std::to_string(p));
      const CharacterTable tbl(ctx);
      // row sums: sum_a chi_k(a) = (p-1) [k = 0]
      const Eigen::VectorXcd rows = tbl.transform(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(p)));
      for (Eigen::Index k = 0; k < rows.size(); ++k)
        if (std::abs(rows(k) - (k == 0 ? static_cast<double>(p - 1) : 0.0)) > 1e-8 * static_cast<double>(p))
          o.fail("orthogonality at p=" + std::to_string(p));
      for (int t = 0; t < 50; ++t, ++sets)
        if (!parseval_check(tbl, random_set(rng, p, p - 1)).holds) o.fail("Parseval at p=" + std::to_string(p));
      ++primes;
    }
    const PrimeContext ctx(1009);
    std::uint64_t ruzsa = 0;
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_set(rng, 1009, 40), y = random_set(rng, 1009, 40), z = random_set(rng, 1009, 40);
      if (!ruzsa_check(ctx, x, y, z).holds) o.fail("Ruzsa triangle inequality");
      ++ruzsa;
    }
    o.detail << primes << " primes, " << sets << " Parseval sets, " << ruzsa << " Ruzsa triples ";
  });

  criterion("AC2", "interval inclusion {1} u {L+2..L+N} in A/A", [](Outcome& o) {
    std::uint64_t windows = 0;
    for (auto p : primes_between(3, 199)) {
      const PrimeContext ctx(p);
      const FactorialTable table(ctx, p - 1);
      for (std::uint64_t L = 0; L + 1 < p; ++L)
        for (std::uint64_t N = 1; L + N < p; ++N, ++windows)
          if (!interval_inclusion_check(table, {L, N}).holds)
            o.fail("p=" + std::to_string(p) + " L=" + std::to_string(L) + " N=" + std::to_string(N));
    }
    const PrimeContext ctx(10007);
    const FactorialTable table(ctx, 10006);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 1000; ++t, ++windows) {
      const auto N = 1 + rng() % 10005;
      const auto L = rng() % (10007 - N);
      if (!interval_inclusion_check(table, {L, N}).holds) o.fail("p=10007 L=" + std::to_string(L));
    }
    o.detail << windows << " windows ";
  });

  criterion("AC3", "curve sums within 2 d^2 sqrt(p)", [](Outcome& o) {
    std::uint64_t curves = 0;
    double worst = 0;
    for (auto p : primes_between(101, 499)) {
      const PrimeContext ctx(p);
      for (std::uint64_t L : {0, 5, 17})
        for (std::uint64_t j = 2; j <= 4; ++j)
          for (std::uint64_t k = 1; k < j; ++k, ++curves) {
            const auto f = build_difference_polynomial(ctx, L, j, k);
            if (find_dividing_line(f)) {
              o.fail("line divides f at p=" + std::to_string(p));
              continue;
            }
            const auto r = bombieri_check(f);
            worst = std::max(worst, r.max_modulus / r.bound);
            if (!r.holds || !r.full_scan) o.fail("p=" + std::to_string(p) + " j=" + std::to_string(j));
          }
    }
    o.detail << curves << " curves, worst |S|/bound " << worst << " ";
  });

  criterion("AC4", "J7 character formula against enumeration", [](Outcome& o) {
    std::mt19937_64 rng(4);
    const auto primes = primes_between(7, 31);
    std::uint64_t instances = 0, evaluations = 0;
    for (; instances < 250; ++instances) {
      const auto p = primes[rng() % primes.size()];
      const PrimeContext ctx(p);
      const CharacterTable tbl(ctx);
      const auto N = 1 + rng() % std::min<std::uint64_t>(3, (p - 1) / 2);
      const auto aa = random_set(rng, p, 6);
      double total = 0;
      for (Residue lambda = 1; lambda < p; ++lambda, ++evaluations) {
        const auto c = j7_via_characters(tbl, N, aa, lambda);
        if (std::llround(c.value) != static_cast<long long>(j7_bruteforce(ctx, N, aa, lambda)) ||
            std::abs(c.imaginary) > 1e-6)
          o.fail("p=" + std::to_string(p) + " lambda=" + std::to_string(lambda));
        total += c.value;
      }
      const double expect = std::pow(static_cast<double>(N), 6) * static_cast<double>(aa.size() * aa.size());
      if (std::abs(total - expect) > 1e-6 * expect) o.fail("sum over lambda");
    }
    o.detail << instances << " instances, " << evaluations << " lambda evaluations ";
  });

  criterion("AC5", "X_j size, overlap, union and kernel bounds", [](Outcome& o) {
    std::uint64_t windows = 0, pairs = 0;
    for (auto p : primes_between(11, 499)) {
      const PrimeContext ctx(p);
      for (const auto& w : xj_windows(p)) {
        ++windows;
        const auto xmax = xj_range(w.N);
        std::vector<ResidueSet> xs;
        for (std::uint64_t j = 1; j <= 5; ++j) {
          xs.push_back(build_xj(ctx, w, j));
          if (xs.back().size() * j < xmax) o.fail("|X_j| bound");
        }
        for (std::uint64_t j = 1; j <= 5; ++j)
          for (std::uint64_t k = 1; k <= 5; ++k, ++pairs)
            if ((xs[j - 1] & xs[k - 1]).size() > count_J(ctx, w, j, k)) o.fail("overlap above J(j,k)");
        XjParams params;
        params.M = 5;
        params.window = w;
        const auto r = xj_new_elements(ctx, params);
        if (!r.union_in_quotient || r.witnessed != r.union_size) o.fail("union outside A/A");
        for (const auto& row : r.rows)
          if (!row.exclusion_holds) o.fail("inclusion-exclusion bound");
        if (!dirichlet_kernel_l1(ctx, xmax).holds) o.fail("kernel L1 bound");
      }
    }
    o.detail << windows << " windows, " << pairs << " (j,k) pairs ";

    const PrimeContext big(10007);
    for (std::uint64_t N : {150, 400, 1100, 3000}) {
      XjParams params = XjParams::from_epsilon(10007, 0.3, {0, N});
      params.M = 4;
      const auto r = xj_new_elements(big, params);
      std::ostringstream os;
      os << "p=10007 N=" << N << ": |X_1 u..u X_4| = " << r.union_size << " vs N log(p/N) = " << r.theorem_scale;
      for (const auto& row : r.rows)
        if (row.j >= 2)
          os << "; j=" << row.j << " new " << row.new_elements << " (N/3j " << row.new_target << "), max J "
             << row.j_max << " (N/6j^2 " << row.j_target << ")";
      o.notes.push_back(os.str());
    }
  });

  criterion("AC6", "every residue is a product of seven small factorials", [](Outcome& o) {
    std::uint64_t primes = 0, witnesses = 0;
    for (auto p : primes_between(53, 499)) {
      const PrimeContext ctx(p);
      const auto bstar = minimal_bound_for_all(ctx).B_star;
      if (!bstar) {
        o.fail("no B* at p=" + std::to_string(p));
        continue;
      }
      const FactorialIndex index(ctx, *bstar);
      for (Residue lambda = 1; lambda < p; ++lambda) {
        const auto s = find_representation(index, lambda);
        if (s.status != SearchStatus::Found || factorial_product(ctx, s.result->args()) != lambda ||
            s.result->max_arg() > *bstar)
          o.fail("p=" + std::to_string(p) + " lambda=" + std::to_string(lambda));
        else
          ++witnesses;
      }
      ++primes;
    }
    std::vector<std::pair<std::uint64_t, std::uint64_t>> points;
    for (auto p : primes_between(53, 2000))
      if (const auto b = minimal_bound_for_all(PrimeContext(p)).B_star) points.emplace_back(p, *b);
    const auto trend = exponent_trend(points);
    o.detail << primes << " primes, " << witnesses << " verified witnesses ";
    std::ostringstream os;
    os << "fitted exponent of B*(p) over " << points.size() << " primes up to 2000: " << trend.exponent
       << " (11/12 = " << 11.0 / 12.0 << "); B*(1999) = " << points.back().second;
    o.notes.push_back(os.str());
  });

  criterion("AC7", "factorial density near 1 - 1/e on [10^4, 2*10^4]", [](Outcome& o) {
    const auto primes = primes_between(10'000, 20'000);
    const auto d = density_experiment(primes);
    if (std::abs(d.mean - kFactorialDensityConjecture) > 0.05) o.fail("mean outside band");
    o.detail << primes.size() << " primes, mean " << d.mean << ", deviation " << d.deviation << " ";
  });

  criterion("AC8", "quotient growth |A/A| / (N log(p/N)) stable within factor 5", [](Outcome& o) {
    const PrimeContext ctx(10007);
    const std::vector<WindowSpec> windows{{0, 150}, {0, 400}, {0, 1100}, {0, 3000}};
    const auto rows = quotient_growth_experiment(ctx, windows);
    double lo = INFINITY, hi = 0;
    for (const auto& r : rows) {
      o.detail << "N=" << r.window.N << ": |A|=" << r.set_size << " |A/A|=" << r.quotient_size
               << " ratio " << r.normalized << "; ";
      if (!(r.normalized > 0)) o.fail("nonpositive ratio");
      if (!r.lower_bound_holds || !r.square_bound_holds) o.fail("exact bounds");
      lo = std::min(lo, r.normalized);
      hi = std::max(hi, r.normalized);
    }
    o.detail << "spread " << hi / lo << " ";
    if (!(hi / lo < 5)) o.fail("spread " + std::to_string(hi / lo) + " >= 5");
  });

  criterion("AC9", "reports byte-identical across runs and worker counts", [](Outcome& o) {
    std::vector<ExperimentConfig> configs;
    auto add = [&](Experiment e, auto&& tweak) {
      ExperimentConfig c;
      c.experiment = e;
      c.seed = 17;
      tweak(c);
      configs.push_back(c);
    };
    add(Experiment::Density, [](auto& c) { c.p_min = 1000; c.p_max = 3000; });
    add(Experiment::Quotient, [](auto& c) { c.p = 1009; c.N = {20, 100, 400}; c.L = {0, 7}; });
    add(Experiment::Inclusion, [](auto& c) { c.p_min = 1000; c.p_max = 1100; c.trials = 20; });
    add(Experiment::Xj, [](auto& c) { c.p = 10007; c.N = {1100}; c.M = 4; });
    add(Experiment::Curve, [](auto& c) { c.p_min = 101; c.p_max = 131; c.L = {0, 5}; });
    add(Experiment::Curve, [](auto& c) { c.p = 1013; c.j = 3; c.k = 1; });
    add(Experiment::Charsum, [](auto& c) { c.p_min = 101; c.p_max = 199; c.N = {30}; c.trials = 5; });
    add(Experiment::J7, [](auto& c) { c.p_min = 7; c.p_max = 31; c.trials = 20; });
    add(Experiment::Represent, [](auto& c) { c.p_min = 53; c.p_max = 300; c.all_lambda = true; });
    add(Experiment::Represent, [](auto& c) { c.p = 211; c.lambda = 5; });
    add(Experiment::Ruzsa, [](auto& c) { c.p = 1009; c.trials = 300; });
    add(Experiment::Farey, [](auto& c) { c.p = 10007; c.N = {10, 50, 99}; });
    std::uint64_t compared = 0;
    for (auto c : configs) {
      std::string first[2];
      for (unsigned workers : {1u, 4u, 4u, 1u}) {
        c.workers = workers;
        const auto r = run_experiment(c);
        int i = 0;
        for (auto fmt : {ReportFormat::Json, ReportFormat::Csv}) {
          const auto text = render(r, fmt);
          if (first[i].empty()) first[i] = text;
          else if (text != first[i]) o.fail(std::string(experiment_name(c.experiment)) + " output differs");
          ++compared;
          ++i;
        }
      }
    }
    o.detail << configs.size() << " configurations, " << compared << " renders compared ";
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
