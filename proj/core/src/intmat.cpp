#include "intmat.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "dwork/error.hpp"

namespace dwork::detail {

namespace {

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(ErrorKind::InvalidArgument, "integer overflow in lattice arithmetic");
  return static_cast<std::int64_t>(v);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

int rank(const IntMat& a) {
  if (a.empty()) return 0;
  std::vector<RatVec> m;
  for (const auto& row : a) m.emplace_back(row.begin(), row.end());
  const std::size_t rows = m.size(), cols = m[0].size();
  int r = 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(r) < rows; ++c) {
    std::size_t piv = static_cast<std::size_t>(r);
    while (piv < rows && m[piv][c] == Rational(0)) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[static_cast<std::size_t>(r)]);
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows; ++i) {
      if (m[i][c] == Rational(0)) continue;
      const Rational f = m[i][c] / m[static_cast<std::size_t>(r)][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[static_cast<std::size_t>(r)][k];
    }
    ++r;
  }
  return r;
}

std::int64_t determinant(const IntMat& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i].at(j);
  int sign = 1;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && m[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(m[s], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return checked(sign * m[n - 1][n - 1]);
}

ColumnReduction column_reduce(const IntMat& a) {
  ColumnReduction out;
  out.H = a;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  out.U.assign(cols, IntVec(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) out.U[i][i] = 1;
  auto col_axpy = [&](std::size_t dst, std::size_t src, std::int64_t f) {
    for (auto& row : out.H) row[dst] = checked(static_cast<__int128>(row[dst]) - static_cast<__int128>(f) * row[src]);
    for (auto& row : out.U) row[dst] = checked(static_cast<__int128>(row[dst]) - static_cast<__int128>(f) * row[src]);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (auto& row : out.H) std::swap(row[x], row[y]);
    for (auto& row : out.U) std::swap(row[x], row[y]);
  };
  std::size_t c = 0;
  for (std::size_t i = 0; i < rows && c < cols; ++i) {
    for (;;) {
      std::size_t best = cols;
      for (std::size_t j = c; j < cols; ++j) {
        if (out.H[i][j] != 0 && (best == cols || std::abs(out.H[i][j]) < std::abs(out.H[i][best]))) best = j;
      }
      if (best == cols) break;
      if (best != c) col_swap(best, c);
      bool done = true;
      for (std::size_t j = c + 1; j < cols; ++j) {
        if (out.H[i][j] == 0) continue;
        col_axpy(j, c, floor_div(out.H[i][j], out.H[i][c]));
        if (out.H[i][j] != 0) done = false;
      }
      if (done) break;
    }
    if (c < cols && out.H[i][c] != 0) {
      if (out.H[i][c] < 0) {
        for (auto& row : out.H) row[c] = -row[c];
        for (auto& row : out.U) row[c] = -row[c];
      }
      out.pivot_rows.push_back(static_cast<int>(i));
      ++c;
    }
  }
  out.rank = static_cast<int>(c);
  return out;
}

void hermite_rows(IntMat& m) {
  if (m.empty()) return;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    for (;;) {
      std::size_t best = m.size();
      for (std::size_t i = r; i < m.size(); ++i) {
        if (m[i][c] != 0 && (best == m.size() || std::abs(m[i][c]) < std::abs(m[best][c]))) best = i;
      }
      if (best == m.size()) break;
      std::swap(m[best], m[r]);
      bool done = true;
      for (std::size_t i = r + 1; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        const std::int64_t f = floor_div(m[i][c], m[r][c]);
        for (std::size_t k = 0; k < cols; ++k) m[i][k] = checked(static_cast<__int128>(m[i][k]) - static_cast<__int128>(f) * m[r][k]);
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (r < m.size() && m[r][c] != 0) {
      if (m[r][c] < 0)
        for (auto& v : m[r]) v = -v;
      for (std::size_t i = 0; i < r; ++i) {
        const std::int64_t f = floor_div(m[i][c], m[r][c]);
        if (f == 0) continue;
        for (std::size_t k = 0; k < cols; ++k) m[i][k] = checked(static_cast<__int128>(m[i][k]) - static_cast<__int128>(f) * m[r][k]);
      }
      ++r;
    }
  }
  m.resize(r);
}

IntMat integer_kernel(const IntMat& a) {
  const ColumnReduction red = column_reduce(a);
  const std::size_t cols = red.U.size();
  IntMat basis;
  for (std::size_t k = static_cast<std::size_t>(red.rank); k < cols; ++k) {
    IntVec v(cols);
    for (std::size_t i = 0; i < cols; ++i) v[i] = red.U[i][k];
    basis.push_back(std::move(v));
  }
  hermite_rows(basis);
  return basis;
}

std::optional<IntVec> lattice_solve(const IntMat& a, const IntVec& b) {
  const ColumnReduction red = column_reduce(a);
  const std::size_t rows = a.size();
  const std::size_t cols = red.U.size();
  IntVec y(cols, 0);
  for (int k = 0; k < red.rank; ++k) {
    const auto r = static_cast<std::size_t>(red.pivot_rows[static_cast<std::size_t>(k)]);
    __int128 rhs = b.at(r);
    for (int j = 0; j < k; ++j) rhs -= static_cast<__int128>(red.H[r][static_cast<std::size_t>(j)]) * y[static_cast<std::size_t>(j)];
    const std::int64_t piv = red.H[r][static_cast<std::size_t>(k)];
    if (rhs % piv != 0) return std::nullopt;
    y[static_cast<std::size_t>(k)] = checked(rhs / piv);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    __int128 s = 0;
    for (std::size_t j = 0; j < cols; ++j) s += static_cast<__int128>(red.H[r][j]) * y[j];
    if (s != b[r]) return std::nullopt;
  }
  IntVec x(cols, 0);
  for (std::size_t i = 0; i < cols; ++i) {
    __int128 s = 0;
    for (std::size_t j = 0; j < cols; ++j) s += static_cast<__int128>(red.U[i][j]) * y[j];
    x[i] = checked(s);
  }
  return x;
}

std::optional<RatVec> rational_solve(std::vector<RatVec> m, RatVec b) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == Rational(0)) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == Rational(0)) continue;
      const Rational f = m[i][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
      b[i] -= f * b[c];
    }
  }
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

std::int64_t gcd_all(const IntVec& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g;
}

IntVec hyperplane_normal(const std::vector<IntVec>& vectors, int n) {
  IntVec normal(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    IntMat minor;
    for (int r = 0; r < n; ++r) {
      if (r == i) continue;
      IntVec row;
      for (const auto& v : vectors) row.push_back(v.at(static_cast<std::size_t>(r)));
      minor.push_back(std::move(row));
    }
    const std::int64_t d = determinant(minor);
    normal[static_cast<std::size_t>(i)] = (i % 2 == 0) ? d : -d;
  }
  const std::int64_t g = gcd_all(normal);
  if (g > 1)
    for (auto& x : normal) x /= g;
  return normal;
}

}  // namespace dwork::detail
