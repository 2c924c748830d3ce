#pragma once

// Curves u(x) = v(y) over F_p built from shifted factorial products, their
// exponential sums, and the X_j / J(j,k) counting machinery used to show
// growth of the quotient set A/A.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "frlab/modarith.hpp"
#include "frlab/residue_set.hpp"

namespace frlab {

/// Univariate polynomial over F_p, coefficients lowest degree first.
using Poly = std::vector<Residue>;

/// prod_{i=1}^{j} (x + L + i) mod p, expanded.
Poly shifted_product(const PrimeContext& ctx, std::uint64_t L, std::uint64_t j);

Residue eval_poly(const PrimeContext& ctx, const Poly& f, Residue x);

/// f(x, y) = u(x) - v(y) over F_p.
class CurvePolynomial {
 public:
  using Grid = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

  /// Any separable curve with deg u >= 1 and deg v >= 1 (leading coefficients nonzero).
  CurvePolynomial(const PrimeContext& ctx, Poly u, Poly v);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::uint64_t p() const noexcept { return ctx_.p(); }
  std::uint64_t x_degree() const noexcept { return u_.size() - 1; }
  std::uint64_t y_degree() const noexcept { return v_.size() - 1; }
  std::uint64_t total_degree() const noexcept { return std::max(x_degree(), y_degree()); }
  const Poly& u() const noexcept { return u_; }
  const Poly& v() const noexcept { return v_; }

  /// Coefficient of x^a y^b, in [0, p-1].
  Residue coefficient(std::size_t a, std::size_t b) const;
  /// (j+1) x (k+1) grid of coefficients, entry (a, b) for x^a y^b.
  Grid coefficient_grid() const;

  Residue operator()(Residue x, Residue y) const {
    return ctx_.sub(eval_poly(ctx_, u_, x), eval_poly(ctx_, v_, y));
  }

 private:
  PrimeContext ctx_;
  Poly u_;
  Poly v_;
};

/// prod_{i<=j}(x+L+i) - prod_{i<=k}(y+L+i); requires 1 <= k < j <= p-1.
CurvePolynomial build_difference_polynomial(const PrimeContext& ctx, std::uint64_t L,
                                            std::uint64_t j, std::uint64_t k);

struct CurvePoint {
  Residue x, y;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// All affine points, ordered by x then y.
std::vector<CurvePoint> curve_points(const CurvePolynomial& f);

/// sum over f(x,y)=0 of e((b1 x + b2 y)/p), compensated summation.
std::complex<double> curve_exponential_sum(const CurvePolynomial& f, Residue b1, Residue b2);

/// Table S(b1, b2) for every frequency pair, computed as U * V^T where
/// U(b1, t) sums e(b1 x / p) over u(x) = t and V likewise for v.
Eigen::MatrixXcd curve_sum_table(const CurvePolynomial& f);

/// True iff f vanishes identically on some line b1 x + b2 y + c = 0.
bool line_divisibility_check(const CurvePolynomial& f, Residue b1, Residue b2);

/// Scans every line direction; returns a direction (b1, b2) that divides f, if any.
std::optional<std::pair<Residue, Residue>> find_dividing_line(const CurvePolynomial& f);

struct BombieriOptions {
  /// Full (b1, b2) scan at or below this modulus; sampled frequencies above.
  std::uint64_t full_scan_limit = 1000;
  /// Line-divisibility hypothesis is verified exhaustively at or below this modulus.
  std::uint64_t hypothesis_check_limit = 1000;
  std::uint64_t samples = 4096;
  std::uint64_t seed = 0;
};

struct BombieriReport {
  double max_modulus = 0;
  Residue arg_b1 = 0, arg_b2 = 0;
  double bound = 0;  ///< 2 d^2 sqrt(p)
  bool holds = false;
  bool full_scan = false;
  bool hypothesis_verified = false;
  std::uint64_t points = 0;
};

/// Max over (b1, b2) != (0, 0) of |S(b1, b2)| compared with 2 d^2 sqrt(p).
/// Throws when the curve contains a line (the bound does not apply).
BombieriReport bombieri_check(const CurvePolynomial& f, const BombieriOptions& opts = {});

/// Largest x with 1 <= x < 0.6 N, i.e. ceil(3N/5) - 1.
constexpr std::uint64_t xj_range(std::uint64_t N) noexcept { return (3 * N + 4) / 5 - 1; }

/// Solutions of prod_{i<=j}(x+L+i) = prod_{i<=k}(y+L+i) with 1 <= x, y <= xj_range(N).
std::uint64_t count_J(const PrimeContext& ctx, const WindowSpec& w, std::uint64_t j,
                      std::uint64_t k);

/// X_j = { prod_{i<=j}(x+L+i) : 1 <= x <= xj_range(N) }.
ResidueSet build_xj(const PrimeContext& ctx, const WindowSpec& w, std::uint64_t j);

struct XjParams {
  double epsilon = 0.3;
  std::uint64_t M = 1;
  WindowSpec window;

  /// M = floor(min(p^{0.1 eps}, (p/N)^{0.1})), clamped to at least 1.
  static XjParams from_epsilon(std::uint64_t p, double epsilon, const WindowSpec& w);
};

struct XjRow {
  std::uint64_t j;
  std::uint64_t size;                ///< |X_j|
  std::uint64_t new_elements;        ///< |X_j \ (X_1 u ... u X_{j-1})|
  std::int64_t exclusion_bound;      ///< |X_j| - sum_k |X_j n X_k|
  std::uint64_t overlap_sum;         ///< sum_{k<j} |X_j n X_k|
  std::uint64_t j_sum;               ///< sum_{k<j} J(j,k)
  std::uint64_t j_max;               ///< max_{k<j} J(j,k)
  double new_target;                 ///< N / (3j)
  double j_target;                   ///< N / (6 j^2)
  bool size_bound_holds;             ///< |X_j| * j >= xj_range(N)
  bool overlap_bound_holds;          ///< |X_j n X_k| <= J(j,k) for all k < j
  bool exclusion_holds;              ///< new_elements >= exclusion_bound
};

struct XjReport {
  std::uint64_t M = 1;
  std::vector<XjRow> rows;
  std::uint64_t union_size = 0;
  double theorem_scale = 0;          ///< N log(p/N)
  std::uint64_t witnessed = 0;       ///< union elements with an x + j <= N witness
  bool union_in_quotient = true;     ///< every witnessed element is in A/A
  std::optional<Residue> quotient_counterexample;
};

XjReport xj_new_elements(const PrimeContext& ctx, const XjParams& params);

struct KernelReport {
  double value = 0;
  double bound = 0;  ///< p log p
  bool holds = false;
};

/// sum_{b=0}^{p-1} | sum_{z=1}^{H} e(b z / p) |, for 1 <= H < p.
KernelReport dirichlet_kernel_l1(const PrimeContext& ctx, std::uint64_t H);

}  // namespace frlab
