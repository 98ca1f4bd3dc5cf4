#pragma once

#include <optional>
#include <vector>

#include "dwork/rational.hpp"

namespace dwork::detail {

using IntMat = std::vector<IntVec>;  // row-major

int rank(const IntMat& a);

// Exact determinant of a square integer matrix (Bareiss).
std::int64_t determinant(const IntMat& a);

// A * U = H with U unimodular and H in column echelon form: the first
// `rank` columns of H carry the pivots, the remaining ones are zero.
struct ColumnReduction {
  IntMat H;
  IntMat U;
  int rank = 0;
  std::vector<int> pivot_rows;  // pivot row of column k, k < rank
};

ColumnReduction column_reduce(const IntMat& a);

// Row Hermite normal form in place: echelon, positive pivots, entries above a
// pivot reduced into [0, pivot). Zero rows are dropped.
void hermite_rows(IntMat& rows);

// Basis of ker_Z(a) in row Hermite normal form.
IntMat integer_kernel(const IntMat& a);

// Integer x with a x = b, if one exists.
std::optional<IntVec> lattice_solve(const IntMat& a, const IntVec& b);

// Unique solution of the square system m x = b over Q, if m is invertible.
std::optional<RatVec> rational_solve(std::vector<RatVec> m, RatVec b);

// Primitive integer normal of the hyperplane spanned by n-1 vectors in Z^n
// (signed maximal minors). Zero when they are dependent.
IntVec hyperplane_normal(const std::vector<IntVec>& vectors, int n);

std::int64_t gcd_all(const IntVec& v);

}  // namespace dwork::detail
