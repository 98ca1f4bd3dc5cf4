#pragma once

// Independent reference computations for the test suites. Each one uses a
// different method from the library code it checks.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

#include "dwork/dwork_operator.hpp"
#include "dwork/padic_ring.hpp"
#include "dwork/polytope.hpp"

namespace oracle {

using dwork::FqElement;
using dwork::IntVec;
using dwork::RamifiedElement;
using dwork::Rational;

// Deterministic generator for property tests.
struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  }
  RamifiedElement element(const dwork::Ring& R) {
    RamifiedElement x(R);
    for (auto& c : x.coords()) c = std::uniform_int_distribution<std::uint64_t>(0, R->modulus() - 1)(rng);
    return x;
  }
  // Element with a prescribed p-adic valuation profile: random digits scaled
  // by p^e on a random subset of coordinates.
  RamifiedElement sparse_element(const dwork::Ring& R) {
    RamifiedElement x(R);
    for (auto& c : x.coords()) {
      if (range(0, 2) == 0) continue;
      std::uint64_t v = static_cast<std::uint64_t>(range(1, static_cast<std::int64_t>(R->p()) - 1));
      const auto e = range(0, R->precision() / 3);
      for (std::int64_t i = 0; i < e; ++i) v *= R->p();
      c = v % R->modulus();
    }
    return x;
  }
  FqElement field_element(const dwork::Field& F) {
    return FqElement::from_index(F, static_cast<std::uint64_t>(range(0, static_cast<std::int64_t>(F->order()) - 1)));
  }
  std::mt19937_64 rng;
};

// Determinant by expansion over all permutations.
inline std::int64_t det_permutation(const std::vector<IntVec>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t total = 0;
  do {
    std::int64_t term = 1;
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      term *= m[i][perm[i]];
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    total += inversions % 2 ? -term : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// det(I - T X) by permutation expansion of polynomial entries.
inline std::vector<RamifiedElement> char_poly_permutation(const dwork::RingMatrix& X) {
  const std::size_t n = X.rows();
  const auto& R = X.ring();
  using Poly = std::vector<RamifiedElement>;
  auto entry = [&](std::size_t i, std::size_t j) {
    Poly e{RamifiedElement::from_integer(R, i == j ? 1 : 0), -X.element(i, j)};
    return e;
  };
  Poly total(n + 1, RamifiedElement(R));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Poly term{RamifiedElement::from_integer(R, 1)};
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Poly e = entry(i, perm[i]);
      Poly next(term.size() + 1, RamifiedElement(R));
      for (std::size_t a = 0; a < term.size(); ++a) {
        for (std::size_t b = 0; b < 2; ++b) next[a + b] += term[a] * e[b];
      }
      term = std::move(next);
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (inversions % 2) {
        total[k] -= term[k];
      } else {
        total[k] += term[k];
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Solves the square system M x = b over Q; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> M, std::vector<Rational> b) {
  const std::size_t n = M.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && M[piv][c] == Rational(0)) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(M[piv], M[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || M[r][c] == Rational(0)) continue;
      const Rational f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= M[i][i];
  return b;
}

// min sum(lambda) subject to A lambda = w, lambda >= 0, by enumerating basic
// solutions on n-subsets of columns. nullopt when infeasible (w outside the
// cone). This is the definition inf{a : w in a Delta}.
inline std::optional<Rational> lp_weight(const dwork::ExponentConfig& A, const IntVec& w) {
  const int n = A.n(), N = A.N();
  if (std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x == 0; })) return Rational(0);
  std::optional<Rational> best;
  std::vector<bool> mask(static_cast<std::size_t>(N), false);
  std::fill(mask.begin(), mask.begin() + n, true);
  std::sort(mask.begin(), mask.end());
  do {
    std::vector<int> cols;
    for (int j = 0; j < N; ++j) {
      if (mask[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    std::vector<std::vector<Rational>> M(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    std::vector<Rational> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = Rational(A.rows()[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])]);
      b[static_cast<std::size_t>(i)] = Rational(w[static_cast<std::size_t>(i)]);
    }
    const auto x = solve_square(M, b);
    if (!x) continue;
    if (std::any_of(x->begin(), x->end(), [](const Rational& v) { return v < Rational(0); })) continue;
    Rational s(0);
    for (const auto& v : *x) s += v;
    if (!best || s < *best) best = s;
  } while (std::next_permutation(mask.begin(), mask.end()));
  return best;
}

// n! vol(conv{0, w_j}) for n <= 2: interval length, or twice the shoelace area
// of the convex hull.
inline std::int64_t hull_volume(const dwork::ExponentConfig& A) {
  if (A.n() == 1) {
    std::int64_t lo = 0, hi = 0;
    for (auto x : A.rows()[0]) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return hi - lo;
  }
  using P = std::pair<std::int64_t, std::int64_t>;
  std::vector<P> pts{{0, 0}};
  for (int j = 0; j < A.N(); ++j) pts.emplace_back(A.rows()[0][static_cast<std::size_t>(j)], A.rows()[1][static_cast<std::size_t>(j)]);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto cross = [](const P& o, const P& a, const P& b) {
    return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
  };
  std::vector<P> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const auto& pt : pts) {
      while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
      hull.push_back(pt);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  std::int64_t twice = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a.first * b.second - a.second * b.first;
  }
  return std::abs(twice);
}

// S_m summed point by point: each x in (F_{q^m}^*)^n contributes
// prod_i teich(Norm x_i)^{k_i} * theta(1)^{Tr F(a, x)}.
inline RamifiedElement brute_sum(const dwork::DworkProblem& pr, int m) {
  const dwork::Field ext = m == 1 ? pr.field : dwork::field_create(pr.p, pr.f * m);
  std::vector<FqElement> a;
  if (m == 1) {
    a = pr.a_bar;
  } else {
    const dwork::FieldEmbedding emb(pr.field, ext);
    for (const auto& x : pr.a_bar) a.push_back(emb.apply(x));
  }
  const auto units = dwork::enumerate_units(ext);
  const RamifiedElement theta = dwork::theta_one(pr.ring);
  const int n = pr.config.n(), N = pr.config.N();
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  RamifiedElement total(pr.ring);
  for (;;) {
    RamifiedElement term = RamifiedElement::from_integer(pr.ring, 1);
    for (int i = 0; i < n; ++i) {
      const FqElement& x = units[idx[static_cast<std::size_t>(i)]];
      const FqElement norm = m == 1 ? x : dwork::trace_norm(x, pr.field).norm;
      RamifiedElement t = dwork::teichmueller(norm, pr.ring);
      std::int64_t k = pr.twist.k[static_cast<std::size_t>(i)];
      if (k < 0) {
        t = dwork::inverse(t);
        k = -k;
      }
      term *= t.pow(static_cast<std::uint64_t>(k));
    }
    FqElement F(ext);
    for (int j = 0; j < N; ++j) {
      FqElement mono = a[static_cast<std::size_t>(j)];
      for (int i = 0; i < n; ++i) {
        mono *= units[idx[static_cast<std::size_t>(i)]].pow_signed(pr.config.rows()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      }
      F += mono;
    }
    term *= theta.pow(dwork::absolute_trace(F));
    total += term;
    int i = n - 1;
    while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == units.size()) idx[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return total;
}

// True when x and y agree to ord_p >= bound.
inline bool agree(const RamifiedElement& x, const RamifiedElement& y, const Rational& bound) {
  return dwork::vanishes_to(x - y, bound);
}

inline dwork::DworkProblem problem(std::vector<IntVec> A, std::uint64_t p, IntVec k, std::vector<std::int64_t> a, int M,
                                   int f = 1) {
  const auto F = dwork::field_create(p, f);
  std::vector<FqElement> ab;
  for (auto x : a) ab.push_back(FqElement::from_integer(F, x));
  return dwork::make_problem(std::move(A), p, f, std::move(k), std::move(ab), M);
}

}  // namespace oracle
