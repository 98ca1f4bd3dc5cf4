#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dwork/polytope.hpp"
#include "dwork/rational.hpp"

namespace dwork {

// Basis of Lambda = ker_Z(A), in row Hermite normal form.
struct LatticeBasis {
  std::vector<IntVec> vectors;
};

LatticeBasis lattice_kernel(const ExponentConfig& config);

// prod_{l_j>0} (pi^-1 d_j)^{l_j} - prod_{l_j<0} (pi^-1 d_j)^{-l_j}
struct BoxOperator {
  IntVec lambda;
  IntVec plus;
  IntVec minus;

  bool is_zero() const;
  std::string text() const;
};

// NotARelation unless A lambda = 0.
BoxOperator box_operator(const ExponentConfig& config, const IntVec& lambda);

// Image of d^v / pi^|v| under phi: the exponent sum v_1 w_1 + ... + v_N w_N.
IntVec phi_image(const ExponentConfig& config, const IntVec& v);

// Laurent polynomial in t: exponent -> integer coefficient, zeros dropped.
using LaurentPoly = std::map<IntVec, std::int64_t>;

LaurentPoly phi_box(const ExponentConfig& config, const BoxOperator& box);

// sum_j w_ij x_j d_j + gamma_i, gamma_i = k_i / (1 - q).
struct EulerOperator {
  IntVec row;
  Rational gamma;

  std::string text() const;
};

struct EulerTerm {
  int column;
  std::int64_t coefficient;  // w_ij
  IntVec t_exponent;         // w_j
};

// E_i applied to 1 under the presentation: gamma_i + pi sum_j w_ij x_j t^{w_j}.
struct EulerImage {
  Rational constant;
  std::vector<EulerTerm> pi_terms;
};

EulerImage euler_image(const ExponentConfig& config, const EulerOperator& euler);

struct SystemPresentation {
  std::vector<EulerOperator> euler;
  std::vector<BoxOperator> box;
  LatticeBasis basis;
  std::vector<IntVec> saturation_extras;
  std::string text;
};

SystemPresentation emit_system(const ExponentConfig& config, const IntVec& k, std::uint64_t q, bool saturate = false);

// Generators of the lattice ideal I_Lambda: Buchberger completion of the
// basis binomials followed by saturation at each variable. The input basis
// comes first. Timeout once `step_budget` reductions are spent.
std::vector<IntVec> toric_saturation(const ExponentConfig& config, const LatticeBasis& basis,
                                     std::size_t step_budget = 200000);

}  // namespace dwork
