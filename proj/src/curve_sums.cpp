#include "frlab/curve_sums.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "compensated.hpp"
#include "frlab/rng.hpp"

namespace frlab {

Poly shifted_product(const PrimeContext& ctx, std::uint64_t L, std::uint64_t j) {
  Poly f{1};
  for (std::uint64_t i = 1; i <= j; ++i) {
    const Residue shift = (L + i) % ctx.p();
    Poly next(f.size() + 1, 0);
    for (std::size_t d = 0; d < f.size(); ++d) {
      next[d + 1] = ctx.add(next[d + 1], f[d]);
      next[d] = ctx.add(next[d], ctx.mul(f[d], shift));
    }
    f = std::move(next);
  }
  return f;
}

Residue eval_poly(const PrimeContext& ctx, const Poly& f, Residue x) {
  Residue acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = ctx.add(ctx.mul(acc, x), *it);
  return acc;
}

CurvePolynomial::CurvePolynomial(const PrimeContext& ctx, Poly u, Poly v)
    : ctx_(ctx), u_(std::move(u)), v_(std::move(v)) {
  if (u_.size() < 2 || v_.size() < 2)
    throw std::invalid_argument("curve polynomial needs positive degree in x and y");
  if (u_.back() == 0 || v_.back() == 0)
    throw std::invalid_argument("leading coefficients must be nonzero");
  auto in_range = [&](Residue c) { return c < ctx_.p(); };
  if (!std::all_of(u_.begin(), u_.end(), in_range) || !std::all_of(v_.begin(), v_.end(), in_range))
    throw std::invalid_argument("coefficients must be reduced mod p");
}

Residue CurvePolynomial::coefficient(std::size_t a, std::size_t b) const {
  if (a == 0 && b == 0) return ctx_.sub(u_[0], v_[0]);
  if (b == 0) return a < u_.size() ? u_[a] : 0;
  if (a == 0) return b < v_.size() ? ctx_.neg(v_[b]) : 0;
  return 0;
}

CurvePolynomial::Grid CurvePolynomial::coefficient_grid() const {
  Grid g(static_cast<Eigen::Index>(u_.size()), static_cast<Eigen::Index>(v_.size()));
  for (Eigen::Index a = 0; a < g.rows(); ++a)
    for (Eigen::Index b = 0; b < g.cols(); ++b)
      g(a, b) = static_cast<std::int64_t>(
          coefficient(static_cast<std::size_t>(a), static_cast<std::size_t>(b)));
  return g;
}

CurvePolynomial build_difference_polynomial(const PrimeContext& ctx, std::uint64_t L,
                                            std::uint64_t j, std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("degree k must be at least 1");
  if (k >= j) throw std::invalid_argument("need j > k (got j = " + std::to_string(j) +
                                          ", k = " + std::to_string(k) + ")");
  if (j > ctx.p() - 1) throw std::invalid_argument("degree j must not exceed p-1");
  return CurvePolynomial(ctx, shifted_product(ctx, L, j), shifted_product(ctx, L, k));
}

namespace {

std::vector<Residue> values_on_field(const PrimeContext& ctx, const Poly& f) {
  std::vector<Residue> out(ctx.p());
  for (Residue x = 0; x < ctx.p(); ++x) out[x] = eval_poly(ctx, f, x);
  return out;
}

}  // namespace

std::vector<CurvePoint> curve_points(const CurvePolynomial& f) {
  const auto& ctx = f.context();
  const auto vy = values_on_field(ctx, f.v());
  std::vector<CurvePoint> pts;
  for (Residue x = 0; x < ctx.p(); ++x) {
    const Residue ux = eval_poly(ctx, f.u(), x);
    for (Residue y = 0; y < ctx.p(); ++y)
      if (vy[y] == ux) pts.push_back({x, y});
  }
  return pts;
}

std::complex<double> curve_exponential_sum(const CurvePolynomial& f, Residue b1, Residue b2) {
  const auto p = f.p();
  const auto tw = detail::roots_of_unity(p);
  b1 %= p;
  b2 %= p;
  detail::Compensated<std::complex<double>> acc;
  for (const auto& pt : curve_points(f)) acc.add(tw[(b1 * pt.x + b2 * pt.y) % p]);
  return acc.value();
}

Eigen::MatrixXcd curve_sum_table(const CurvePolynomial& f) {
  const auto& ctx = f.context();
  const auto p = ctx.p();
  const auto ux = values_on_field(ctx, f.u());
  const auto vy = values_on_field(ctx, f.v());

  // Only values hit by both u and v contribute.
  std::vector<std::uint8_t> hit(p, 0);
  for (auto t : ux) hit[t] |= 1;
  for (auto t : vy) hit[t] |= 2;
  std::vector<Eigen::Index> column(p, -1);
  Eigen::Index cols = 0;
  for (Residue t = 0; t < p; ++t)
    if (hit[t] == 3) column[t] = cols++;

  const auto tw = detail::roots_of_unity(p);
  const auto n = static_cast<Eigen::Index>(p);
  auto fibre_sums = [&](const std::vector<Residue>& vals) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, cols);
    for (Residue z = 0; z < p; ++z) {
      const Eigen::Index c = column[vals[z]];
      if (c < 0) continue;
      for (Residue b = 0; b < p; ++b) m(static_cast<Eigen::Index>(b), c) += tw[(b * z) % p];
    }
    return m;
  };
  const Eigen::MatrixXcd U = fibre_sums(ux);
  const Eigen::MatrixXcd V = fibre_sums(vy);
  return U * V.transpose();
}

namespace {

// (a1 X + a2) composed into v, as a polynomial in X.
Poly compose_linear(const PrimeContext& ctx, const Poly& v, Residue a1, Residue a2) {
  Poly acc{0};
  for (auto it = v.rbegin(); it != v.rend(); ++it) {
    Poly next(acc.size() + 1, 0);
    for (std::size_t d = 0; d < acc.size(); ++d) {
      next[d + 1] = ctx.add(next[d + 1], ctx.mul(acc[d], a1));
      next[d] = ctx.add(next[d], ctx.mul(acc[d], a2));
    }
    next[0] = ctx.add(next[0], *it);
    acc = std::move(next);
  }
  return acc;
}

bool vanishes_on_line(const CurvePolynomial& f, Residue b1, Residue b2, Residue c) {
  const auto& ctx = f.context();
  if (b2 != 0) {
    // y = -(b1 x + c) / b2
    const Residue inv = ctx.inverse(b2);
    const Residue a1 = ctx.neg(ctx.mul(b1, inv));
    const Residue a2 = ctx.neg(ctx.mul(c, inv));
    const Poly vy = compose_linear(ctx, f.v(), a1, a2);
    const std::size_t deg = std::max(f.u().size(), vy.size());
    for (std::size_t d = 0; d < deg; ++d) {
      const Residue ud = d < f.u().size() ? f.u()[d] : 0;
      const Residue vd = d < vy.size() ? vy[d] : 0;
      if (ud != vd) return false;
    }
    return true;
  }
  // x = -c / b1 fixed; restriction is u(x0) - v(Y).
  const Residue x0 = ctx.neg(ctx.mul(c, ctx.inverse(b1)));
  if (ctx.sub(eval_poly(ctx, f.u(), x0), f.v()[0]) != 0) return false;
  for (std::size_t d = 1; d < f.v().size(); ++d)
    if (f.v()[d] != 0) return false;
  return true;
}

}  // namespace

bool line_divisibility_check(const CurvePolynomial& f, Residue b1, Residue b2) {
  const auto p = f.p();
  b1 %= p;
  b2 %= p;
  if (b1 == 0 && b2 == 0) throw std::invalid_argument("line direction (0, 0) is not a line");
  for (Residue c = 0; c < p; ++c)
    if (vanishes_on_line(f, b1, b2, c)) return true;
  return false;
}

std::optional<std::pair<Residue, Residue>> find_dividing_line(const CurvePolynomial& f) {
  const auto p = f.p();
  for (Residue b1 = 0; b1 < p; ++b1)
    if (line_divisibility_check(f, b1, 1)) return std::pair<Residue, Residue>{b1, 1};
  if (line_divisibility_check(f, 1, 0)) return std::pair<Residue, Residue>{1, 0};
  return std::nullopt;
}

BombieriReport bombieri_check(const CurvePolynomial& f, const BombieriOptions& opts) {
  const auto p = f.p();
  BombieriReport r;
  if (p <= opts.hypothesis_check_limit || f.x_degree() == f.y_degree()) {
    if (auto line = find_dividing_line(f))
      throw std::invalid_argument("curve contains the line " + std::to_string(line->first) +
                                  "x + " + std::to_string(line->second) +
                                  "y + c; exponential-sum bound does not apply");
    r.hypothesis_verified = true;
  }
  const double d = static_cast<double>(f.total_degree());
  r.bound = 2.0 * d * d * std::sqrt(static_cast<double>(p));

  auto consider = [&](Residue b1, Residue b2, double modulus) {
    if (modulus > r.max_modulus || (r.arg_b1 == 0 && r.arg_b2 == 0)) {
      r.max_modulus = modulus;
      r.arg_b1 = b1;
      r.arg_b2 = b2;
    }
  };

  if (p <= opts.full_scan_limit) {
    const Eigen::MatrixXcd table = curve_sum_table(f);
    r.points = static_cast<std::uint64_t>(std::llround(table(0, 0).real()));
    for (Eigen::Index b1 = 0; b1 < table.rows(); ++b1)
      for (Eigen::Index b2 = 0; b2 < table.cols(); ++b2)
        if (b1 != 0 || b2 != 0)
          consider(static_cast<Residue>(b1), static_cast<Residue>(b2), std::abs(table(b1, b2)));
    r.full_scan = true;
  } else {
    const auto pts = curve_points(f);
    r.points = pts.size();
    const auto tw = detail::roots_of_unity(p);
    std::mt19937_64 rng(mix_seed(opts.seed, p));
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
      Residue b1 = 0, b2 = 0;
      while (b1 == 0 && b2 == 0) {
        b1 = uniform_below(rng, p);
        b2 = uniform_below(rng, p);
      }
      detail::Compensated<std::complex<double>> acc;
      for (const auto& pt : pts) acc.add(tw[(b1 * pt.x + b2 * pt.y) % p]);
      consider(b1, b2, std::abs(acc.value()));
    }
  }
  r.holds = r.max_modulus <= r.bound;
  return r;
}

namespace {

void check_xj_domain(const PrimeContext& ctx, const WindowSpec& w, std::uint64_t degree) {
  w.validate(ctx.p());
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  if (xj_range(w.N) + w.L + degree >= ctx.p())
    throw std::invalid_argument("degree " + std::to_string(degree) +
                                " too large for window: shifted product vanishes mod p");
}

Residue shifted_value(const PrimeContext& ctx, std::uint64_t x, std::uint64_t L, std::uint64_t j) {
  Residue acc = 1;
  for (std::uint64_t i = 1; i <= j; ++i) acc = ctx.mul(acc, (x + L + i) % ctx.p());
  return acc;
}

}  // namespace

std::uint64_t count_J(const PrimeContext& ctx, const WindowSpec& w, std::uint64_t j,
                      std::uint64_t k) {
  check_xj_domain(ctx, w, std::max(j, k));
  if (std::min(j, k) < 1) throw std::invalid_argument("degree must be at least 1");
  const auto xmax = xj_range(w.N);
  std::vector<std::uint32_t> hist(ctx.p(), 0);
  for (std::uint64_t x = 1; x <= xmax; ++x) ++hist[shifted_value(ctx, x, w.L, j)];
  std::uint64_t total = 0;
  for (std::uint64_t y = 1; y <= xmax; ++y) total += hist[shifted_value(ctx, y, w.L, k)];
  return total;
}

ResidueSet build_xj(const PrimeContext& ctx, const WindowSpec& w, std::uint64_t j) {
  check_xj_domain(ctx, w, j);
  ResidueSet s(ctx.p());
  const auto xmax = xj_range(w.N);
  for (std::uint64_t x = 1; x <= xmax; ++x) s.insert(shifted_value(ctx, x, w.L, j));
  return s;
}

XjParams XjParams::from_epsilon(std::uint64_t p, double epsilon, const WindowSpec& w) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  w.validate(p);
  const double pd = static_cast<double>(p);
  const double m = std::min(std::pow(pd, 0.1 * epsilon),
                            std::pow(pd / static_cast<double>(w.N), 0.1));
  XjParams params;
  params.epsilon = epsilon;
  params.M = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(m)));
  params.window = w;
  return params;
}

XjReport xj_new_elements(const PrimeContext& ctx, const XjParams& params) {
  const auto& w = params.window;
  if (params.M < 1) throw std::invalid_argument("M must be at least 1");
  if (w.N < 2) throw std::invalid_argument("X_j machinery needs N >= 2");
  check_xj_domain(ctx, w, params.M);

  const auto xmax = xj_range(w.N);
  const double n = static_cast<double>(w.N);
  XjReport report;
  report.M = params.M;
  report.theorem_scale = n * std::log(static_cast<double>(ctx.p()) / n);

  std::vector<ResidueSet> xs;
  ResidueSet united(ctx.p());
  for (std::uint64_t j = 1; j <= params.M; ++j) {
    xs.push_back(build_xj(ctx, w, j));
    const ResidueSet& xj = xs.back();
    XjRow row{};
    row.j = j;
    row.size = xj.size();
    row.new_elements = xj.count_not_in(united);
    row.overlap_bound_holds = true;
    for (std::uint64_t k = 1; k < j; ++k) {
      const auto overlap = (xj & xs[k - 1]).size();
      const auto jk = count_J(ctx, w, j, k);
      row.overlap_sum += overlap;
      row.j_sum += jk;
      row.j_max = std::max(row.j_max, jk);
      if (overlap > jk) row.overlap_bound_holds = false;
    }
    row.exclusion_bound =
        static_cast<std::int64_t>(row.size) - static_cast<std::int64_t>(row.overlap_sum);
    row.new_target = n / (3.0 * static_cast<double>(j));
    row.j_target = n / (6.0 * static_cast<double>(j * j));
    row.size_bound_holds = row.size * j >= xmax;
    row.exclusion_holds = static_cast<std::int64_t>(row.new_elements) >= row.exclusion_bound;
    report.rows.push_back(row);
    united |= xj;
  }
  report.union_size = united.size();

  const FactorialTable table(ctx, w.last());
  const ResidueSet a = factorial_range_set(table, w);
  const ResidueSet q = quotient_set(ctx, a, a);
  ResidueSet witnessed(ctx.p());
  for (std::uint64_t j = 1; j <= params.M; ++j) {
    for (std::uint64_t x = 1; x <= xmax && x + j <= w.N; ++x) {
      const Residue e = shifted_value(ctx, x, w.L, j);
      const Residue num = table[x + w.L + j];
      const Residue den = table[x + w.L];
      const bool ok = a.contains(num) && a.contains(den) &&
                      ctx.mul(num, ctx.inverse(den)) == e && q.contains(e);
      if (!ok && report.union_in_quotient) {
        report.union_in_quotient = false;
        report.quotient_counterexample = e;
      }
      witnessed.insert(e);
    }
  }
  report.witnessed = witnessed.size();
  return report;
}

KernelReport dirichlet_kernel_l1(const PrimeContext& ctx, std::uint64_t H) {
  const auto p = ctx.p();
  if (H < 1 || H >= p) throw std::invalid_argument("kernel length H must satisfy 1 <= H < p");
  const double pd = static_cast<double>(p);
  const double hd = static_cast<double>(H);
  detail::Compensated<double> acc;
  acc.add(hd);
  for (std::uint64_t b = 1; b < p; ++b) {
    const double angle = std::numbers::pi * static_cast<double>(b) / pd;
    acc.add(std::abs(std::sin(angle * hd) / std::sin(angle)));
  }
  KernelReport r;
  r.value = acc.value();
  r.bound = pd * std::log(pd);
  r.holds = r.value < r.bound;
  return r;
}

}  // namespace frlab
