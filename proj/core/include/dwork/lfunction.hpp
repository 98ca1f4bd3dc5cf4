#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "dwork/dwork_operator.hpp"
#include "dwork/padic_ring.hpp"

namespace dwork {

// S_m by direct summation over (F_{q^m}^*)^n with characters: Teichmueller
// powers for the twist and theta(1)^Tr for the additive part. Exact in R(f, M).
// LevelTooLarge when (q^m - 1)^n exceeds `point_budget`.
RamifiedElement sums_oracle_characters(const DworkProblem& problem, int m, double point_budget = 5e7,
                                       unsigned workers = 1);

// S_m by evaluating the truncated splitting series at Teichmueller points of
// R(f m, M), then descending to R(f, M).
RamifiedElement sums_oracle_series(const DworkProblem& problem, int m, double point_budget = 5e6);

// Hyp(x) = S_1 with coefficients x, for every x in F_q^N (index order of
// each coordinate, first coordinate most significant). BudgetExceeded when
// q^N (q-1)^n exceeds `budget`.
std::vector<std::pair<std::vector<FqElement>, RamifiedElement>> hyp_table(const DworkProblem& problem,
                                                                          double budget = 2e6);

// Truncated power series in T with per-coefficient certified precision.
struct PowerSeriesT {
  Ring ring;
  std::vector<RamifiedElement> coeffs;
  std::vector<Rational> precision;

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

// exp(sum_m S_m T^m / m) up to T^{m_max}; S[m-1] is S_m.
PowerSeriesT l_series_from_sums(const std::vector<Certified>& S);

// prod_{k=0}^n P(q^{n-k} T)^{(-1)^{k+1} binom(n,k)} up to T^{m_max}.
// NonUnitConstantTerm when P(0) is not a unit.
PowerSeriesT l_from_charseries(const std::vector<Certified>& P, int n, std::uint64_t q, std::size_t m_max);

// Series with coefficients reduced to known digits: higher digits zeroed.
RamifiedElement truncate_to(const RamifiedElement& x, const Rational& precision);

struct LPolynomial {
  Ring ring;
  std::vector<RamifiedElement> coeffs;
  std::vector<Rational> precision;
  int exponent;  // L = poly^exponent, exponent = (-1)^{n-1}
};

struct NotPolynomial {
  std::size_t index;  // first coefficient beyond the expected degree that is nonzero
};

using Recognition = std::variant<LPolynomial, NotPolynomial>;

// Raises L to (-1)^{n-1} and accepts when every coefficient above
// expected_degree vanishes to min(its precision, compare_precision).
// InvalidArgument when the series is known to fewer than expected_degree + 3 terms.
Recognition rational_recognition(const PowerSeriesT& L, std::size_t expected_degree, int n,
                                 const Rational& compare_precision);

struct NewtonPolygon {
  std::vector<std::pair<std::int64_t, Rational>> vertices;  // (i, ord_p c_i) on the lower hull
  std::vector<std::pair<Rational, std::int64_t>> slopes;    // (slope, multiplicity), nondecreasing
  std::vector<std::size_t> below_precision;                 // coefficients indistinguishable from 0
};

NewtonPolygon newton_polygon(const LPolynomial& poly);

// Comparison precision M - ceil(log_p m_max) - 2.
int comparison_precision(int M, std::uint64_t p, int m_max);

// Power-series helpers on coefficient vectors truncated at a common order.
PowerSeriesT series_multiply(const PowerSeriesT& a, const PowerSeriesT& b);
PowerSeriesT series_inverse(const PowerSeriesT& a);

}  // namespace dwork
