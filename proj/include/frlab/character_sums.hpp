#pragma once

// Multiplicative characters of F_p^* through the discrete-log table:
// chi_k(a) = omega^{k dlog(a)} with omega = e^{2 pi i / (p-1)}.

#include <complex>
#include <cstdint>

#include <Eigen/Core>

#include "frlab/modarith.hpp"
#include "frlab/residue_set.hpp"

namespace frlab {

class CharacterTable {
 public:
  /// Verifies principal character, orthogonality and multiplicativity when p <= 1000.
  explicit CharacterTable(const PrimeContext& ctx);

  const PrimeContext& context() const noexcept { return ctx_; }
  /// Number of characters, p - 1.
  std::uint64_t order() const noexcept { return ctx_.order(); }

  /// chi_k(a) for a in F_p^*; a = 0 throws.
  std::complex<double> operator()(std::uint64_t k, Residue a) const;
  /// omega^e.
  std::complex<double> root(std::uint64_t e) const noexcept { return roots_[e % order()]; }

  /// Vector over k of sum_{a} w[a] chi_k(a), weights indexed by residue (w[0] ignored).
  Eigen::VectorXcd transform(const Eigen::Ref<const Eigen::VectorXd>& weights) const;

 private:
  PrimeContext ctx_;
  std::vector<std::complex<double>> roots_;
};

inline CharacterTable build_character_table(const PrimeContext& ctx) { return CharacterTable(ctx); }

struct DoubleSumResult {
  std::uint64_t k = 0;
  std::complex<double> value;
  double modulus = 0;
  double bound = 0;  ///< N^{7/4} p^{1/8}
};

/// c[s] = #{(n, m) in [1,N]^2 : n + m = s} = N - |s - N - 1| for s in [2, 2N].
Eigen::VectorXd pair_sum_multiplicities(std::uint64_t N);

/// sum_{n,m <= N} chi_k((n+m)!); requires 2N <= p-1.
DoubleSumResult factorial_double_sum(const CharacterTable& tbl, std::uint64_t N, std::uint64_t k);
DoubleSumResult factorial_double_sum(const PrimeContext& ctx, std::uint64_t N, std::uint64_t k);

/// Double sums for every character k in [0, p-2] at once.
Eigen::VectorXcd factorial_double_sums(const CharacterTable& tbl, std::uint64_t N);

struct MaxDoubleSumReport {
  std::uint64_t argmax = 0;
  double max_modulus = 0;
  double bound = 0;
  double ratio = 0;  ///< max_modulus / bound
  std::complex<double> principal;  ///< k = 0 term, N^2 exactly
};

/// Maximum over nonprincipal characters; ties resolve to the smallest k.
MaxDoubleSumReport max_nonprincipal_double_sum(const CharacterTable& tbl, std::uint64_t N);
MaxDoubleSumReport max_nonprincipal_double_sum(const PrimeContext& ctx, std::uint64_t N);

/// T_k = sum_{x in S} chi_k(x) for every k.
Eigen::VectorXcd set_character_sums(const CharacterTable& tbl, const ResidueSet& s);

struct ParsevalReport {
  double lhs = 0;
  std::uint64_t rhs = 0;
  bool holds = false;
};

/// (1/(p-1)) sum_k |T_k|^2 against |S|, to relative tolerance 1e-6.
ParsevalReport parseval_check(const CharacterTable& tbl, const ResidueSet& s);

struct CharacterCount {
  double value = 0;      ///< real part of the character expression
  double imaginary = 0;  ///< residual imaginary part, zero up to rounding
};

/// (1/(p-1)) sum_k S_k^3 T_k^2 conj(chi_k(lambda)), the character-sum
/// expression for the number of solutions of
/// (n1+m1)!(n2+m2)!(n3+m3)! x y = lambda, n_i, m_i in [1,N], x, y in AA.
CharacterCount j7_via_characters(const CharacterTable& tbl, std::uint64_t N, const ResidueSet& aa,
                                 Residue lambda);
CharacterCount j7_via_characters(const PrimeContext& ctx, std::uint64_t N, const ResidueSet& aa,
                                 Residue lambda);

/// Direct enumeration of the same count over all eight variables.
/// Rejects instances with N^6 |AA|^2 > 1e9.
std::uint64_t j7_bruteforce(const PrimeContext& ctx, std::uint64_t N, const ResidueSet& aa,
                            Residue lambda);

}  // namespace frlab
