#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dwork/finite_field.hpp"
#include "dwork/padic_ring.hpp"
#include "dwork/polytope.hpp"

namespace dwork {

// gamma_i = k_i / (1 - q).
struct TwistData {
  IntVec k;
};

RatVec twist_gamma(const TwistData& twist, std::uint64_t q);

// gamma in delta, i.e. -k in delta.
bool twist_validate(const TwistData& twist, const NewtonData& nd);

// gamma (1 - q^m) = k (1 + q + ... + q^{m-1}).
IntVec level_shift(const TwistData& twist, std::uint64_t q, int m);

// Everything a computation needs, validated once: A, p, q = p^f, the twist,
// the coefficients in F_q and their Teichmueller lifts in R(f, M).
struct DworkProblem {
  ExponentConfig config;
  NewtonData nd;
  std::uint64_t p;
  int f;
  std::uint64_t q;
  int M;
  TwistData twist;
  Field field;
  Ring ring;
  std::vector<FqElement> a_bar;
  std::vector<RamifiedElement> a;
};

// Throws RankDeficient, NotPrime, UnsupportedPrime, TwistOutsideCone or
// InvalidArgument (wrong lengths).
DworkProblem make_problem(std::vector<IntVec> A, std::uint64_t p, int f, IntVec k, std::vector<FqElement> a_bar, int M);

// ceil(M p q / ((p-1)(q-1))) + d(-k) + 2.
Rational auto_basis_cap(const DworkProblem& problem);

// H(t) = t^{shift} prod_j exp(pi a_j t^{w_j} - pi (a_j t^{w_j})^Q), Q = q^level,
// stored by full exponent (shift included). Every coefficient is exact mod
// p^M; only exponents v with d(v - shift) <= support_cap are kept.
struct SeriesOnCone {
  Ring ring;
  std::uint64_t q = 0;
  std::uint64_t Q = 0;
  int level = 1;
  IntVec shift;
  RatVec gamma;
  std::map<IntVec, RamifiedElement> coeffs;
  std::optional<Rational> support_cap;

  const RamifiedElement* find(const IntVec& v) const;
  // (p - 1) / (p Q): slope of the coefficient valuation floor.
  Rational floor_slope() const;
};

// Lower bound for ord_p of the coefficient at v, or nullopt when v - shift
// is outside delta (the coefficient vanishes).
std::optional<Rational> coefficient_floor(const SeriesOnCone& h, const NewtonData& nd, const IntVec& v);

// NotTeichmueller unless a_j^q = a_j; TwistOutsideCone for an invalid twist.
SeriesOnCone h_series(const std::vector<RamifiedElement>& a, const TwistData& twist, int level, const NewtonData& nd,
                      std::uint64_t q, std::optional<Rational> D_support = std::nullopt, unsigned workers = 1);

// Matrix (c_{Q w - u}) on the basis u with u + gamma in delta and
// d(u + gamma) <= D, rows and columns in basis order.
struct DworkMatrix {
  std::vector<LatticePoint> basis;
  RingMatrix entries;
  std::uint64_t Q = 0;
  Rational cap;
  Rational next_weight;  // smallest weight left out
  Rational tail_bound;   // ord_p lower bound of anything the truncation drops
  Rational precision;    // min(M, tail_bound)
};

// SupportTooSmall when a needed coefficient may be nonzero but was not kept.
DworkMatrix matrix_build(const SeriesOnCone& h, const NewtonData& nd, const Rational& D, unsigned workers = 1);

enum class TraceRoute { MatrixPower, LevelSeries };

// Tr(G^m) from powers of the matrix.
Certified trace_matrix_power(const DworkMatrix& dm, int m, unsigned workers = 1);

// Tr(G^m) = sum_u c^{(m)}_{(q^m - 1) u} from the level-m series; D defaults to
// the smallest cap whose dropped terms sit above p^M.
Certified trace_level_series(const SeriesOnCone& h_m, const NewtonData& nd, std::optional<Rational> D = std::nullopt);

// Coefficients of det(I - T G) up to max_degree (default: dimension).
std::vector<Certified> char_series(const DworkMatrix& dm, std::optional<std::size_t> max_degree = std::nullopt,
                                   unsigned workers = 1);

// One-call convenience over a problem: builds the level-1 or level-m series
// as needed. D defaults to auto_basis_cap.
Certified problem_trace(const DworkProblem& problem, int m, TraceRoute route, std::optional<Rational> D = std::nullopt,
                        unsigned workers = 1);

}  // namespace dwork
