#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "dwork/finite_field.hpp"
#include "dwork/rational.hpp"

namespace dwork {

// n x N integer matrix of rank n; columns w_1..w_N are the exponents.
class ExponentConfig {
 public:
  // RankDeficient unless rank = n; InvalidArgument for ragged or empty rows.
  explicit ExponentConfig(std::vector<IntVec> rows);

  int n() const noexcept { return static_cast<int>(rows_.size()); }
  int N() const noexcept { return static_cast<int>(rows_.front().size()); }
  const std::vector<IntVec>& rows() const noexcept { return rows_; }
  IntVec column(int j) const;
  // A v for v in Z^N.
  IntVec apply(const IntVec& v) const;

 private:
  std::vector<IntVec> rows_;
};

// Face of Delta = conv{0, w_j} not through 0: ell(x) = 1 on it, ell <= 1 on Delta.
struct Facet {
  RatVec ell;
  std::vector<int> columns;  // j with ell(w_j) = 1
};

// Facet of the cone: normal . x >= 0 on delta, equality on `columns`.
struct ConeFacet {
  IntVec normal;
  std::vector<int> columns;
};

struct NewtonData {
  ExponentConfig config;
  std::vector<Facet> facets;
  std::vector<ConeFacet> cone_facets;  // empty when delta = R^n
  std::int64_t denom = 1;

  bool in_cone(const RatVec& x) const;
  bool in_cone(const IntVec& w) const;
};

NewtonData newton_data(const ExponentConfig& config);

// d(w) = inf{a > 0 : w in a Delta}; nullopt when w lies outside delta.
std::optional<Rational> weight(const NewtonData& nd, const RatVec& w);
std::optional<Rational> weight(const NewtonData& nd, const IntVec& w);

struct LatticePoint {
  IntVec w;
  Rational weight;
};

// Points u in Z^n with u + shift in delta and d(u + shift) <= D, ordered by
// (weight, lexicographic). The plain lattice-point set is shift = 0.
std::vector<LatticePoint> enumerate(const NewtonData& nd, const Rational& D);
std::vector<LatticePoint> enumerate_shifted(const NewtonData& nd, const RatVec& shift, const Rational& D);

// Smallest weight d(u + shift) strictly above D over the same point set.
Rational next_weight(const NewtonData& nd, const RatVec& shift, const Rational& D);

struct InCA {
  IntVec witness;  // k in Z_{>=0}^N with A k = w
};
struct NotInCA {};
struct Unknown {};
using MonoidVerdict = std::variant<InCA, NotInCA, Unknown>;

MonoidVerdict monoid_membership(const NewtonData& nd, const IntVec& w, int K_max = 50);

std::int64_t normalized_volume(const NewtonData& nd);

struct Simplex {
  std::vector<int> columns;  // i_1..i_n
  std::int64_t det = 0;      // det(w_{i_1}, ..., w_{i_n}), nonzero
  std::vector<IntVec> fundamental_points;  // B(tau): lattice points of the half-open parallelepiped
};

// Cones over a placing triangulation of every facet not through 0; they
// cover delta and the generators of C(tau) are the simplex columns.
std::vector<Simplex> simplicial_decomposition(const NewtonData& nd);

// Faces of Delta not containing 0, as column index sets (every column lying
// on the face), in a deterministic order.
std::vector<std::vector<int>> faces_without_origin(const NewtonData& nd);

struct NondegenerateUpTo {
  int s_max;
};
struct DegenerateWitness {
  std::vector<int> face;
  int level;  // the point lies in (F_{q^level}^*)^n
  std::vector<FqElement> point;
};
using NondegeneracyVerdict = std::variant<NondegenerateUpTo, DegenerateWitness>;

// Brute force over (F_{q^s}^*)^n, s <= s_max, of t_i dF_tau/dt_i = 0 for
// every face tau; a is given in F_q. Parallel over faces with `workers`.
NondegeneracyVerdict nondegeneracy_check(const NewtonData& nd, const std::vector<FqElement>& a, int s_max = 2,
                                         unsigned workers = 1);

}  // namespace dwork
