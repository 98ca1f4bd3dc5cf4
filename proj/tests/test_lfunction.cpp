#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwork/lfunction.hpp"
#include "oracles.hpp"

using namespace dwork;

namespace {

struct Config {
  const char* name;
  std::vector<IntVec> A;
  std::uint64_t p;
  IntVec k;
  std::vector<std::int64_t> a;
};

std::vector<Config> desk_configs() {
  return {{"A=(1) p=3", {{1}}, 3, {0}, {1}},
          {"Kloosterman p=5", {{1, -1}}, 5, {0}, {1, 1}},
          {"unit square p=3", {{1, 0, 1}, {0, 1, 1}}, 3, {0, 0}, {1, 1, 1}},
          {"twist A=(1) p=5", {{1}}, 5, {-1}, {1}},
          {"twisted Kloosterman p=7", {{1, -1}}, 7, {-2}, {3, 1}}};
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Integer power series with constant term 1, truncated at `order`.
using IntSeries = std::vector<std::int64_t>;

IntSeries imul(const IntSeries& a, const IntSeries& b) {
  IntSeries c(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

IntSeries iinv(const IntSeries& a) {
  IntSeries b(a.size(), 0);
  b[0] = 1;
  for (std::size_t k = 1; k < a.size(); ++k) {
    for (std::size_t i = 1; i <= k; ++i) b[k] -= a[i] * b[k - i];
  }
  return b;
}

PowerSeriesT series_of(const Ring& R, const std::vector<std::int64_t>& c) {
  PowerSeriesT s{R, {}, {}};
  for (auto x : c) {
    s.coeffs.push_back(RamifiedElement::from_integer(R, x));
    s.precision.push_back(Rational(R->precision()));
  }
  return s;
}

std::vector<Certified> exact_sums(const Ring& R, const std::vector<std::int64_t>& S) {
  std::vector<Certified> out;
  for (auto s : S) out.push_back({RamifiedElement::from_integer(R, s), Rational(R->precision())});
  return out;
}

LPolynomial poly_of(const Ring& R, const std::vector<RamifiedElement>& c) {
  LPolynomial poly{R, c, std::vector<Rational>(c.size(), Rational(R->precision())), 1};
  return poly;
}

}  // namespace

TEST_CASE("character oracle examples") {
  for (const auto& cfg : desk_configs()) {
    if (cfg.k != IntVec(cfg.k.size(), 0)) continue;
    const auto pr = oracle::problem(cfg.A, cfg.p, cfg.k, std::vector<std::int64_t>(cfg.a.size(), 0), 6);
    for (int m = 1; m <= 2; ++m) {
      const auto expected = RamifiedElement::from_integer(pr.ring, ipow(ipow(static_cast<std::int64_t>(cfg.p), m) - 1, pr.config.n()));
      CHECK(sums_oracle_characters(pr, m) == expected);
      CHECK(sums_oracle_series(pr, m) == expected);
    }
  }
  const auto one = oracle::problem({{1}}, 3, {0}, {1}, 6);
  CHECK(sums_oracle_characters(one, 1) == RamifiedElement::from_integer(one.ring, -1));
  CHECK(sums_oracle_series(one, 1) == RamifiedElement::from_integer(one.ring, -1));
  // t + 1/t over F_5^* takes the values 2, 0, 0, 3
  const auto kl = oracle::problem({{1, -1}}, 5, {0}, {1, 1}, 6);
  const RamifiedElement theta = theta_one(kl.ring);
  CHECK(sums_oracle_characters(kl, 1) == RamifiedElement::from_integer(kl.ring, 2) + theta.pow(2) + theta.pow(3));
  try {
    sums_oracle_characters(kl, 6, 1e3);
    FAIL("budget ignored");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LevelTooLarge);
  }
}

TEST_CASE("oracles agree with each other and with point-by-point sums") {
  for (const auto& cfg : desk_configs()) {
    CAPTURE(cfg.name);
    const auto pr = oracle::problem(cfg.A, cfg.p, cfg.k, cfg.a, 7);
    for (int m = 1; m <= 2; ++m) {
      const auto c = sums_oracle_characters(pr, m, 5e7, 3);
      CHECK(c == oracle::brute_sum(pr, m));
      CHECK(oracle::agree(c, sums_oracle_series(pr, m), Rational(comparison_precision(pr.M, pr.p, 2))));
    }
  }
  const auto F9 = field_create(3, 2);
  const auto pr = make_problem({{1, 0, 1}, {0, 1, 1}}, 3, 2, {0, -2}, {FqElement(F9, {0, 1}), FqElement(F9, {1, 2}), FqElement(F9, {2, 0})}, 5);
  for (int m = 1; m <= 2; ++m) {
    const auto c = sums_oracle_characters(pr, m, 5e7, 2);
    CHECK(c == oracle::brute_sum(pr, m));
    CHECK(oracle::agree(c, sums_oracle_series(pr, m), Rational(comparison_precision(pr.M, pr.p, 2))));
  }
}

TEST_CASE("hypergeometric table") {
  const auto pr = oracle::problem({{1}}, 3, {0}, {1}, 6);
  const auto table = hyp_table(pr);
  REQUIRE(table.size() == 3);
  const std::vector<std::int64_t> expected{2, -1, -1};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(table[i].first[0].index() == i);
    CHECK(table[i].second == RamifiedElement::from_integer(pr.ring, expected[i]));
  }
  const auto sq = oracle::problem({{1, 0, 1}, {0, 1, 1}}, 3, {0, 0}, {1, 1, 1}, 5);
  const auto st = hyp_table(sq);
  CHECK(st.size() == 27);
  CHECK(st.front().second == RamifiedElement::from_integer(sq.ring, 4));
  for (const auto& [x, v] : st) {
    auto sub = sq;
    sub.a_bar = x;
    CHECK(v == oracle::brute_sum(sub, 1));
  }
  try {
    hyp_table(sq, 10);
    FAIL("budget ignored");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
}

TEST_CASE("L-series from sums") {
  const Ring R = ring_create(3, 1, 8);
  const auto L = l_series_from_sums(exact_sums(R, std::vector<std::int64_t>(7, -1)));
  CHECK(L.order() == 7);
  CHECK(L.coeffs[0] == RamifiedElement::from_integer(R, 1));
  CHECK(L.coeffs[1] == RamifiedElement::from_integer(R, -1));
  for (std::size_t i = 2; i <= 7; ++i) CHECK(vanishes_to(L.coeffs[i], L.precision[i]));
  // division by 3 and 6 costs one digit each, recorded in the precision
  CHECK(L.precision[2] == Rational(8));
  CHECK(L.precision[3] == Rational(7));
  CHECK(L.precision[6] == Rational(6));
}

TEST_CASE("L-series of the torus count matches the binomial product") {
  for (std::uint64_t q : {3u, 5u}) {
    for (int n = 1; n <= 2; ++n) {
      const Ring R = ring_create(q, 1, 9);
      const int order = 6;
      std::vector<std::int64_t> S;
      for (int m = 1; m <= order; ++m) S.push_back(ipow(ipow(static_cast<std::int64_t>(q), m) - 1, n));
      const auto L = l_series_from_sums(exact_sums(R, S));
      // prod_k (1 - q^{n-k} T)^{(-1)^{k+1} binom(n, k)}
      IntSeries expected(order + 1, 0);
      expected[0] = 1;
      std::int64_t binom = 1;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) binom = binom * (n - k + 1) / k;
        IntSeries f(order + 1, 0);
        f[0] = 1;
        f[1] = -ipow(static_cast<std::int64_t>(q), n - k);
        if (k % 2 == 0) f = iinv(f);
        for (std::int64_t r = 0; r < binom; ++r) expected = imul(expected, f);
      }
      for (int i = 0; i <= order; ++i) {
        CHECK(oracle::agree(L.coeffs[static_cast<std::size_t>(i)], RamifiedElement::from_integer(R, expected[static_cast<std::size_t>(i)]),
                            L.precision[static_cast<std::size_t>(i)]));
      }
    }
  }
}

TEST_CASE("L-series first coefficient is S_1") {
  oracle::Gen gen(41);
  const Ring R = ring_create(5, 2, 6);
  std::vector<Certified> S;
  for (int m = 0; m < 4; ++m) S.push_back({gen.element(R), Rational(6)});
  CHECK(l_series_from_sums(S).coeffs[1] == S[0].value);
}

TEST_CASE("L from the characteristic series") {
  const Ring R = ring_create(5, 1, 6);
  std::vector<Certified> P{{RamifiedElement::from_integer(R, 1), Rational(6)}, {RamifiedElement::from_integer(R, -1), Rational(6)}};
  // n = 1: P(T) / P(qT) = (1 - T) / (1 - 5T)
  const auto L = l_from_charseries(P, 1, 5, 5);
  IntSeries expected = imul(IntSeries{1, -1, 0, 0, 0, 0}, iinv(IntSeries{1, -5, 0, 0, 0, 0}));
  for (std::size_t i = 0; i <= 5; ++i) CHECK(L.coeffs[i] == RamifiedElement::from_integer(R, expected[i]));
  std::vector<Certified> bad{{RamifiedElement::from_integer(R, 5), Rational(6)}};
  try {
    l_from_charseries(bad, 1, 5, 3);
    FAIL("non-unit constant accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonUnitConstantTerm);
  }
}

TEST_CASE("L identity on desk configurations") {
  for (const auto& cfg : desk_configs()) {
    CAPTURE(cfg.name);
    const auto pr = oracle::problem(cfg.A, cfg.p, cfg.k, cfg.a, 8);
    const int m_max = 4;
    std::vector<Certified> S;
    for (int m = 1; m <= m_max; ++m) S.push_back({sums_oracle_characters(pr, m), Rational(pr.M)});
    const auto from_sums = l_series_from_sums(S);
    const auto h = h_series(pr.a, pr.twist, 1, pr.nd, pr.q);
    const auto dm = matrix_build(h, pr.nd, auto_basis_cap(pr));
    const auto from_char = l_from_charseries(char_series(dm, m_max), pr.config.n(), pr.q, m_max);
    const Rational compare(comparison_precision(pr.M, pr.p, m_max));
    for (std::size_t i = 0; i <= static_cast<std::size_t>(m_max); ++i) {
      CHECK(oracle::agree(from_sums.coeffs[i], from_char.coeffs[i],
                          std::min({compare, from_sums.precision[i], from_char.precision[i]})));
    }
  }
}

TEST_CASE("rational recognition") {
  const auto one = oracle::problem({{1}}, 3, {0}, {1}, 8);
  std::vector<Certified> S;
  for (int m = 1; m <= 4; ++m) S.push_back({sums_oracle_characters(one, m), Rational(8)});
  const auto r1 = rational_recognition(l_series_from_sums(S), 1, 1, Rational(5));
  REQUIRE(std::holds_alternative<LPolynomial>(r1));
  const auto& p1 = std::get<LPolynomial>(r1);
  CHECK(p1.exponent == 1);
  CHECK(p1.coeffs.size() == 2);
  CHECK(oracle::agree(p1.coeffs[1], RamifiedElement::from_integer(one.ring, -1), Rational(5)));

  const auto kl = oracle::problem({{1, -1}}, 5, {0}, {1, 1}, 8);
  S.clear();
  for (int m = 1; m <= 5; ++m) S.push_back({sums_oracle_characters(kl, m), Rational(8)});
  const auto r2 = rational_recognition(l_series_from_sums(S), 2, 1, Rational(comparison_precision(8, 5, 5)));
  REQUIRE(std::holds_alternative<LPolynomial>(r2));
  const auto& p2 = std::get<LPolynomial>(r2);
  CHECK(*pi_ord(p2.coeffs[1]).value == Rational(0));
  CHECK(*pi_ord(p2.coeffs[2]).value == Rational(1));

  const auto zero = oracle::problem({{1, -1}}, 5, {0}, {0, 0}, 8);
  S.clear();
  for (int m = 1; m <= 5; ++m) S.push_back({sums_oracle_characters(zero, m), Rational(8)});
  const auto r3 = rational_recognition(l_series_from_sums(S), 2, 1, Rational(5));
  REQUIRE(std::holds_alternative<NotPolynomial>(r3));
  CHECK(std::get<NotPolynomial>(r3).index == 3);

  CHECK_THROWS_AS(rational_recognition(l_series_from_sums(exact_sums(kl.ring, {1, 2})), 2, 1, Rational(5)), Error);

  // n = 2 raises L to the power -1
  const auto sq = oracle::problem({{1, 0, 1}, {0, 1, 1}}, 3, {0, 0}, {1, 1, 1}, 8);
  S.clear();
  for (int m = 1; m <= 5; ++m) S.push_back({sums_oracle_characters(sq, m), Rational(8)});
  const auto r4 = rational_recognition(l_series_from_sums(S), 2, 2, Rational(comparison_precision(8, 3, 5)));
  REQUIRE(std::holds_alternative<LPolynomial>(r4));
  CHECK(std::get<LPolynomial>(r4).exponent == -1);
}

TEST_CASE("newton polygon examples") {
  const Ring R = ring_create(5, 1, 6);
  const auto np1 = newton_polygon(poly_of(R, {RamifiedElement::from_integer(R, 1), RamifiedElement::from_integer(R, -1)}));
  REQUIRE(np1.slopes.size() == 1);
  CHECK(np1.slopes[0] == std::pair{Rational(0), std::int64_t{1}});
  const auto np2 = newton_polygon(poly_of(R, {RamifiedElement::from_integer(R, 1), RamifiedElement::from_integer(R, 5)}));
  REQUIRE(np2.slopes.size() == 1);
  CHECK(np2.slopes[0] == std::pair{Rational(1), std::int64_t{1}});
  // 1 + 0 T + 25 T^2: the middle coefficient is below precision
  const auto np3 = newton_polygon(poly_of(R, {RamifiedElement::from_integer(R, 1), RamifiedElement(R), RamifiedElement::from_integer(R, 25)}));
  CHECK(np3.below_precision == std::vector<std::size_t>{1});
  REQUIRE(np3.slopes.size() == 1);
  CHECK(np3.slopes[0] == std::pair{Rational(1), std::int64_t{2}});
}

TEST_CASE("property: newton polygon equals the brute-force lower hull") {
  oracle::Gen gen(53);
  for (std::uint64_t p : {3u, 5u, 7u}) {
    const Ring R = ring_create(p, 1, 12);
    for (int trial = 0; trial < 80; ++trial) {
      const auto deg = static_cast<std::size_t>(gen.range(1, 7));
      std::vector<RamifiedElement> c{RamifiedElement::from_integer(R, 1)};
      std::vector<std::int64_t> ords{0};
      for (std::size_t i = 1; i <= deg; ++i) {
        const auto e = gen.range(0, 5);
        std::int64_t v = gen.range(1, static_cast<std::int64_t>(p) - 1);
        for (std::int64_t k = 0; k < e; ++k) v *= static_cast<std::int64_t>(p);
        c.push_back(RamifiedElement::from_integer(R, v));
        ords.push_back(e);
      }
      const auto np = newton_polygon(poly_of(R, c));
      // hull(x) = min over j <= x <= k of the chord through (j, o_j), (k, o_k)
      auto hull = [&](std::size_t x) {
        Rational best(1000);
        for (std::size_t j = 0; j <= x; ++j) {
          for (std::size_t k = x; k <= deg; ++k) {
            const Rational y = j == k ? Rational(ords[j])
                                      : Rational(ords[j]) + Rational(ords[k] - ords[j]) * Rational(static_cast<std::int64_t>(x - j), static_cast<std::int64_t>(k - j));
            best = std::min(best, y);
          }
        }
        return best;
      };
      std::vector<Rational> unit_slopes;
      for (const auto& [s, mult] : np.slopes) {
        for (std::int64_t r = 0; r < mult; ++r) unit_slopes.push_back(s);
      }
      REQUIRE(unit_slopes.size() == deg);
      for (std::size_t x = 0; x < deg; ++x) CHECK(unit_slopes[x] == hull(x + 1) - hull(x));
      for (std::size_t i = 1; i < np.slopes.size(); ++i) CHECK(np.slopes[i - 1].first < np.slopes[i].first);
    }
  }
}

TEST_CASE("Kloosterman numerator has slopes 0 and 1") {
  const auto kl = oracle::problem({{1, -1}}, 5, {0}, {1, 1}, 8);
  std::vector<Certified> S;
  for (int m = 1; m <= 5; ++m) S.push_back({sums_oracle_characters(kl, m), Rational(8)});
  const auto r = rational_recognition(l_series_from_sums(S), 2, 1, Rational(comparison_precision(8, 5, 5)));
  const auto np = newton_polygon(std::get<LPolynomial>(r));
  REQUIRE(np.slopes.size() == 2);
  CHECK(np.slopes[0] == std::pair{Rational(0), std::int64_t{1}});
  CHECK(np.slopes[1] == std::pair{Rational(1), std::int64_t{1}});
  // product of the reciprocal roots is c_2 = q
  CHECK(oracle::agree(std::get<LPolynomial>(r).coeffs[2], RamifiedElement::from_integer(kl.ring, 5), Rational(5)));
}

TEST_CASE("comparison precision and truncation") {
  CHECK(comparison_precision(8, 5, 2) == 5);
  CHECK(comparison_precision(6, 3, 2) == 3);
  CHECK(comparison_precision(8, 3, 4) == 4);
  CHECK(comparison_precision(8, 3, 1) == 6);
  const Ring R = ring_create(3, 1, 6);
  RamifiedElement x(R);
  x.set_coeff(0, 0, 728);
  x.set_coeff(1, 0, 728);
  // digits known to 5/2: pi^0 keeps 3 digits, pi^1 keeps 2
  const auto t = truncate_to(x, Rational(5, 2));
  CHECK(t.coeff(0, 0) == 728 % 27);
  CHECK(t.coeff(1, 0) == 728 % 9);
}

TEST_CASE("series inverse") {
  oracle::Gen gen(61);
  const Ring R = ring_create(7, 2, 5);
  PowerSeriesT a{R, {RamifiedElement::from_integer(R, 3)}, {Rational(5)}};
  for (int i = 0; i < 6; ++i) {
    a.coeffs.push_back(gen.element(R));
    a.precision.push_back(Rational(5));
  }
  const auto prod = series_multiply(a, series_inverse(a));
  CHECK(prod.coeffs[0] == RamifiedElement::from_integer(R, 1));
  for (std::size_t i = 1; i <= prod.order(); ++i) CHECK(prod.coeffs[i].is_zero());
  CHECK(series_of(R, {1, 2}).order() == 1);
}
