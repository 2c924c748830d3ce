#include "doctest.h"
#include "frlab/curve_sums.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace frlab;

namespace {

std::uint64_t shifted(std::uint64_t x, std::uint64_t L, std::uint64_t j, std::uint64_t p) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i <= j; ++i) acc = acc * ((x + L + i) % p) % p;
  return acc;
}

// Curve sum by scanning all of F_p x F_p with the product definition.
std::complex<double> brute_sum(std::uint64_t p, std::uint64_t L, std::uint64_t j, std::uint64_t k,
                               std::uint64_t b1, std::uint64_t b2) {
  std::complex<double> s = 0;
  for (std::uint64_t x = 0; x < p; ++x)
    for (std::uint64_t y = 0; y < p; ++y)
      if (shifted(x, L, j, p) == shifted(y, L, k, p))
        s += oracle::e(static_cast<std::int64_t>((b1 * x + b2 * y) % p), p);
  return s;
}

}  // namespace

TEST_CASE("difference polynomial coefficients") {
  const PrimeContext c11(11), c7(7);
  // (x+1)(x+2) - (y+1) = x^2 + 3x - y + 1
  const auto f = build_difference_polynomial(c11, 0, 2, 1);
  CHECK(f.coefficient(2, 0) == 1);
  CHECK(f.coefficient(1, 0) == 3);
  CHECK(f.coefficient(0, 1) == 10);
  CHECK(f.coefficient(0, 0) == 1);
  CHECK(f.coefficient(1, 1) == 0);
  CHECK(f.total_degree() == 2);

  // (x+2)(x+3) - (y+2) = x^2 + 5x - y + 4
  const auto g = build_difference_polynomial(c7, 1, 2, 1);
  const auto grid = g.coefficient_grid();
  CHECK(grid.rows() == 3);
  CHECK(grid.cols() == 2);
  CHECK(grid(2, 0) == 1);
  CHECK(grid(1, 0) == 5);
  CHECK(grid(0, 1) == 6);
  CHECK(grid(0, 0) == 4);

  for (std::uint64_t j = 2; j <= 5; ++j) {
    const auto h = build_difference_polynomial(c11, 3, j, 1);
    for (std::uint64_t i = 1; i <= j; ++i) CHECK(eval_poly(c11, h.u(), c11.reduce(-3 - static_cast<std::int64_t>(i))) == 0);
  }

  CHECK_THROWS(build_difference_polynomial(c11, 0, 2, 2));
  CHECK_THROWS(build_difference_polynomial(c11, 0, 3, 0));
  CHECK_THROWS(build_difference_polynomial(c7, 0, 7, 1));
}

TEST_CASE("curve points") {
  const PrimeContext c11(11);
  CHECK(curve_points(build_difference_polynomial(c11, 0, 2, 1)).size() == 11);
  for (std::uint64_t j = 2; j <= 5; ++j) CHECK(curve_points(build_difference_polynomial(c11, 4, j, 1)).size() == 11);
  // brute force over F_11 x F_11 gives 16 points
  const auto pts = curve_points(build_difference_polynomial(c11, 0, 3, 2));
  CHECK(pts.size() == 16);
  CHECK(pts.size() <= 33);
  for (const auto& pt : pts) CHECK(shifted(pt.x, 0, 3, 11) == shifted(pt.y, 0, 2, 11));
}

TEST_CASE("point count bound j p, exhaustive for p <= 499") {
  for (auto p : primes_between(5, 499)) {
    const PrimeContext ctx(p);
    for (std::uint64_t j = 2; j <= 4; ++j)
      for (std::uint64_t k = 1; k < j; ++k)
        REQUIRE(curve_points(build_difference_polynomial(ctx, 5, j, k)).size() <= j * p);
  }
}

TEST_CASE("curve exponential sums") {
  const PrimeContext c11(11);
  const auto f = build_difference_polynomial(c11, 0, 2, 1);
  const auto zero = curve_exponential_sum(f, 0, 0);
  CHECK(zero.real() == doctest::Approx(11));
  CHECK(zero.imag() == doctest::Approx(0).epsilon(1e-9));
  // complete quadratic Gauss sum
  CHECK(std::abs(curve_exponential_sum(f, 0, 1)) == doctest::Approx(std::sqrt(11.0)).epsilon(1e-9));
  for (Residue b1 = 0; b1 < 11; ++b1)
    for (Residue b2 = 0; b2 < 11; ++b2) {
      const auto s = curve_exponential_sum(f, b1, b2);
      const auto c = curve_exponential_sum(f, (11 - b1) % 11, (11 - b2) % 11);
      REQUIRE(std::abs(s - std::conj(c)) < 1e-9);
    }
}

TEST_CASE("GEMM sum table agrees with brute-force scan") {
  for (std::uint64_t p : {11, 13, 31}) {
    const PrimeContext ctx(p);
    for (std::uint64_t L : {0, 5})
      for (std::uint64_t j = 2; j <= 4; ++j)
        for (std::uint64_t k = 1; k < j; ++k) {
          const auto f = build_difference_polynomial(ctx, L, j, k);
          const auto table = curve_sum_table(f);
          REQUIRE(table.rows() == static_cast<Eigen::Index>(p));
          REQUIRE(table(0, 0).real() == doctest::Approx(static_cast<double>(curve_points(f).size())));
          for (std::uint64_t b1 = 0; b1 < p; b1 += 3)
            for (std::uint64_t b2 = 0; b2 < p; b2 += 2)
              REQUIRE(std::abs(table(b1, b2) - brute_sum(p, L, j, k, b1, b2)) < 1e-6 * static_cast<double>(j * p));
        }
  }
}

TEST_CASE("line divisibility") {
  const PrimeContext c11(11), c13(13);
  // f = x - y is itself the line x - y = 0
  const CurvePolynomial diag(c13, Poly{0, 1}, Poly{0, 1});
  CHECK(line_divisibility_check(diag, 1, 12));
  CHECK_FALSE(line_divisibility_check(diag, 1, 1));
  CHECK(find_dividing_line(diag).has_value());
  CHECK_THROWS(line_divisibility_check(diag, 0, 0));
  CHECK_THROWS(bombieri_check(diag));

  const auto f = build_difference_polynomial(c11, 0, 2, 1);
  for (Residue b1 = 0; b1 < 11; ++b1)
    for (Residue b2 = 0; b2 < 11; ++b2)
      if (b1 || b2) REQUIRE_FALSE(line_divisibility_check(f, b1, b2));

  for (auto p : primes_between(5, 101)) {
    const PrimeContext ctx(p);
    for (std::uint64_t j = 2; j <= 4; ++j)
      for (std::uint64_t k = 1; k < j; ++k)
        REQUIRE_FALSE(find_dividing_line(build_difference_polynomial(ctx, 3, j, k)).has_value());
  }
}

TEST_CASE("Bombieri check") {
  const PrimeContext c11(11);
  const auto r = bombieri_check(build_difference_polynomial(c11, 0, 2, 1));
  CHECK(r.holds);
  CHECK(r.full_scan);
  CHECK(r.hypothesis_verified);
  CHECK(r.bound == doctest::Approx(8 * std::sqrt(11.0)));
  CHECK(r.max_modulus == doctest::Approx(std::sqrt(11.0)));
  CHECK((r.arg_b1 != 0 || r.arg_b2 != 0));
  CHECK(r.points == 11);

  for (std::uint64_t p : {101, 211, 307}) {
    const PrimeContext ctx(p);
    for (std::uint64_t L : {0, 5})
      for (std::uint64_t j = 2; j <= 4; ++j)
        for (std::uint64_t k = 1; k < j; ++k) REQUIRE(bombieri_check(build_difference_polynomial(ctx, L, j, k)).holds);
  }
}

TEST_CASE("sampled Bombieri scan above the full-scan limit") {
  const PrimeContext ctx(1013);
  BombieriOptions opts;
  opts.samples = 256;
  opts.seed = 9;
  const auto f = build_difference_polynomial(ctx, 0, 3, 1);
  const auto r = bombieri_check(f, opts);
  CHECK_FALSE(r.full_scan);
  CHECK(r.holds);
  const auto again = bombieri_check(f, opts);
  CHECK(again.max_modulus == r.max_modulus);
  CHECK(std::abs(curve_exponential_sum(f, r.arg_b1, r.arg_b2)) == doctest::Approx(r.max_modulus));
}

TEST_CASE("J(j,k) and X_j examples") {
  const PrimeContext c11(11);
  const WindowSpec w{0, 10};
  CHECK(xj_range(10) == 5);
  CHECK(xj_range(5) == 2);
  CHECK(xj_range(7) == 4);
  CHECK(count_J(c11, w, 2, 1) == 1);
  const auto x1 = build_xj(c11, w, 1);
  CHECK(x1.members() == std::vector<Residue>{2, 3, 4, 5, 6});
  const auto x2 = build_xj(c11, w, 2);
  CHECK(x2.members() == std::vector<Residue>{1, 6, 8, 9});
  CHECK(count_J(c11, w, 2, 2) >= 5);
  CHECK_THROWS(build_xj(c11, w, 7));
}

TEST_CASE("X_j invariants against brute force") {
  for (auto p : primes_between(11, 499)) {
    const PrimeContext ctx(p);
    for (const WindowSpec w : {WindowSpec{0, p / 2}, WindowSpec{p / 5, p / 2}}) {
      const auto xmax = xj_range(w.N);
      std::vector<ResidueSet> xs;
      for (std::uint64_t j = 1; j <= 5; ++j) {
        xs.push_back(build_xj(ctx, w, j));
        REQUIRE(xs.back().size() * j >= xmax);
      }
      for (std::uint64_t j = 1; j <= 5; ++j)
        for (std::uint64_t k = 1; k <= j; ++k) {
          const auto jk = count_J(ctx, w, j, k);
          REQUIRE((xs[j - 1] & xs[k - 1]).size() <= jk);
          if (p < 60) {
            std::uint64_t brute = 0;
            for (std::uint64_t x = 1; x <= xmax; ++x)
              for (std::uint64_t y = 1; y <= xmax; ++y)
                brute += shifted(x, w.L, j, p) == shifted(y, w.L, k, p);
            REQUIRE(brute == jk);
          }
        }
    }
  }
}

TEST_CASE("X_j new-element table") {
  const PrimeContext ctx(1009);
  XjParams params;
  params.M = 5;
  params.window = {0, 300};
  const auto r = xj_new_elements(ctx, params);
  REQUIRE(r.rows.size() == 5);
  CHECK(r.rows[0].size == xj_range(300));
  CHECK(r.rows[0].new_elements == r.rows[0].size);
  for (const auto& row : r.rows) {
    CHECK(row.size_bound_holds);
    CHECK(row.overlap_bound_holds);
    CHECK(row.exclusion_holds);
  }
  CHECK(r.union_in_quotient);
  CHECK(r.witnessed == r.union_size);
  std::uint64_t total = 0;
  for (const auto& row : r.rows) total += row.new_elements;
  CHECK(total == r.union_size);

  const auto auto_m = XjParams::from_epsilon(10007, 0.3, {0, 1100});
  CHECK(auto_m.M == 1);
  CHECK(xj_new_elements(PrimeContext(10007), auto_m).rows.size() == 1);
}

TEST_CASE("Dirichlet kernel L1 norm") {
  auto direct = [](std::uint64_t p, std::uint64_t H) {
    double total = 0;
    for (std::uint64_t b = 0; b < p; ++b) {
      std::complex<double> s = 0;
      for (std::uint64_t z = 1; z <= H; ++z) s += oracle::e(static_cast<std::int64_t>(b * z % p), p);
      total += std::abs(s);
    }
    return total;
  };
  const PrimeContext c101(101);
  CHECK(dirichlet_kernel_l1(c101, 1).value == doctest::Approx(101));
  CHECK(dirichlet_kernel_l1(c101, 100).value == doctest::Approx(200));
  const auto r = dirichlet_kernel_l1(c101, 60);
  CHECK(r.value == doctest::Approx(272.9444711439607));
  CHECK(r.holds);
  CHECK(r.bound == doctest::Approx(101 * std::log(101.0)));
  for (std::uint64_t H : {2, 7, 33, 99}) CHECK(dirichlet_kernel_l1(c101, H).value == doctest::Approx(direct(101, H)));
  CHECK_THROWS(dirichlet_kernel_l1(c101, 0));
  CHECK_THROWS(dirichlet_kernel_l1(c101, 101));
}
