#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dwork/finite_field.hpp"
#include "dwork/padic_ring.hpp"
#include "oracles.hpp"

using namespace dwork;

namespace {

bool irreducible_brute(std::uint64_t p, const std::vector<std::uint32_t>& g) {
  // Monic polynomials of degree 1..deg/2 that divide g, found by trial division.
  const int s = static_cast<int>(g.size());
  std::vector<std::int64_t> full(g.begin(), g.end());
  full.push_back(1);
  for (int d = 1; d <= s / 2; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::int64_t> h(static_cast<std::size_t>(d) + 1, 1);
      std::uint64_t r = idx;
      for (int i = 0; i < d; ++i) {
        h[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(r % p);
        r /= p;
      }
      auto rem = full;
      const auto P = static_cast<std::int64_t>(p);
      for (int top = s; top >= d; --top) {
        const std::int64_t c = rem[static_cast<std::size_t>(top)];
        for (int i = 0; i <= d; ++i) {
          auto& x = rem[static_cast<std::size_t>(top - d + i)];
          x = ((x - c * h[static_cast<std::size_t>(i)]) % P + P) % P;
        }
      }
      if (std::all_of(rem.begin(), rem.end(), [](std::int64_t x) { return x == 0; })) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("primality and field creation") {
  CHECK(is_prime(2));
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(9));
  CHECK_THROWS_AS(field_create(4, 1), Error);
  CHECK(field_create(5, 2)->order() == 25);
}

TEST_CASE("modulus is the lexicographically smallest irreducible") {
  // F_9 = F_3[b]/(b^2 + 1)
  CHECK(select_modulus(3, 2) == std::vector<std::uint32_t>{1, 0});
  for (std::uint64_t p : {3u, 5u, 7u}) {
    for (int s = 1; s <= 3; ++s) {
      const auto g = select_modulus(p, s);
      CHECK(irreducible_brute(p, g));
      // every smaller candidate (c_0 compared first) is reducible
      std::uint64_t total = 1;
      for (int i = 0; i < s; ++i) total *= p;
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<std::uint32_t> c(static_cast<std::size_t>(s));
        std::uint64_t r = idx;
        for (int i = s - 1; i >= 0; --i) {
          c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(r % p);
          r /= p;
        }
        if (c == g) break;
        CHECK_FALSE(irreducible_brute(p, c));
      }
    }
  }
  CHECK(field_create(3, 2)->modulus() == ring_create(3, 2, 2)->generator_modulus());
}

TEST_CASE("arithmetic examples") {
  const Field F9 = field_create(3, 2);
  const FqElement b(F9, {0, 1});
  CHECK(b * b == FqElement::from_integer(F9, -1));
  CHECK(FqElement::from_integer(F9, 1).inverse().is_one());
  CHECK_THROWS_AS(FqElement(F9).inverse(), Error);
  for (const auto& x : enumerate_units(F9)) {
    CHECK(x.pow(8).is_one());
    CHECK((x * x.inverse()).is_one());
    CHECK(fq_arith(x, x, FqOp::Mul) == x * x);
    CHECK(fq_arith(x, x, FqOp::Pow, 3) == x.pow(3));
  }
}

TEST_CASE("enumerate_units order and size") {
  const auto u3 = enumerate_units(field_create(3, 1));
  REQUIRE(u3.size() == 2);
  CHECK(u3[0].index() == 1);
  CHECK(u3[1].index() == 2);
  const auto u5 = enumerate_units(field_create(5, 1));
  REQUIRE(u5.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(u5[i] == FqElement::from_integer(field_create(5, 1), static_cast<std::int64_t>(i + 1)));
  for (auto [p, s] : {std::pair{3, 3}, std::pair{5, 2}, std::pair{7, 2}}) {
    const Field F = field_create(static_cast<std::uint64_t>(p), s);
    const auto u = enumerate_units(F);
    CHECK(u.size() == F->order() - 1);
    for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i - 1].index() < u[i].index());
  }
}

TEST_CASE("primitive element generates the unit group") {
  for (auto [p, s] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 2}, std::pair{7, 1}}) {
    const Field F = field_create(static_cast<std::uint64_t>(p), s);
    const FqElement g = primitive_element(F);
    std::vector<bool> seen(F->order(), false);
    FqElement x = FqElement::from_integer(F, 1);
    for (std::uint64_t e = 0; e + 1 < F->order(); ++e) {
      CHECK_FALSE(seen[x.index()]);
      seen[x.index()] = true;
      x *= g;
    }
    CHECK(x.is_one());
  }
}

TEST_CASE("trace and norm") {
  const Field F3 = field_create(3, 1);
  const Field F9 = field_create(3, 2);
  CHECK(trace_norm(FqElement::from_integer(F9, 1), F3).trace == FqElement::from_integer(F3, 2));
  CHECK(trace_norm(FqElement(F9), F3).trace.is_zero());
  CHECK_THROWS_AS(trace_norm(FqElement::from_integer(field_create(3, 3), 1), F9), Error);
  const FieldEmbedding emb(F3, F9);
  for (const auto& x : enumerate_units(F9)) {
    // cyclic norm x^{(q^m - 1)/(q - 1)}
    CHECK(emb.apply(trace_norm(x, F3).norm) == x.pow(4));
    CHECK(emb.apply(trace_norm(x, F3).trace) == x + x.frobenius());
  }
}

TEST_CASE("property: Frobenius, trace linearity, norm multiplicativity") {
  oracle::Gen gen(11);
  for (auto [p, s, base] : {std::tuple{3, 4, 2}, std::tuple{5, 2, 1}, std::tuple{7, 3, 1}, std::tuple{3, 3, 1}}) {
    const Field E = field_create(static_cast<std::uint64_t>(p), s);
    const Field B = field_create(static_cast<std::uint64_t>(p), base);
    const FieldEmbedding emb(B, E);
    for (int trial = 0; trial < 60; ++trial) {
      const FqElement x = gen.field_element(E), y = gen.field_element(E);
      const FqElement c = gen.field_element(B);
      CHECK((x + y).frobenius() == x.frobenius() + y.frobenius());
      CHECK((x * y).frobenius() == x.frobenius() * y.frobenius());
      const auto tx = trace_norm(x, B), ty = trace_norm(y, B);
      CHECK(trace_norm(emb.apply(c) * x + y, B).trace == c * tx.trace + ty.trace);
      CHECK(trace_norm(x * y, B).norm == tx.norm * ty.norm);
      CHECK(absolute_trace(x + y) == (absolute_trace(x) + absolute_trace(y)) % static_cast<std::uint32_t>(p));
      CHECK(emb.restrict(emb.apply(c)) == c);
    }
  }
}

TEST_CASE("embedding is a field homomorphism sending b to a root of its modulus") {
  const Field F9 = field_create(3, 2), F81 = field_create(3, 4);
  const FieldEmbedding emb(F9, F81);
  CHECK(emb.root() == embedding_root(F9, F81));
  for (const auto& x : enumerate_units(F9)) {
    for (const auto& y : enumerate_units(F9)) {
      CHECK(emb.apply(x * y) == emb.apply(x) * emb.apply(y));
      CHECK(emb.apply(x + y) == emb.apply(x) + emb.apply(y));
    }
  }
  CHECK_THROWS_AS(FieldEmbedding(field_create(3, 2), field_create(3, 3)), Error);
}

TEST_CASE("teichmueller lifts reduce to their residue") {
  for (auto [p, s] : {std::pair{3, 2}, std::pair{5, 1}, std::pair{7, 2}}) {
    const Field F = field_create(static_cast<std::uint64_t>(p), s);
    const Ring R = ring_create(static_cast<std::uint64_t>(p), s, 6);
    CHECK(residue(teichmueller(FqElement(F), R), F).is_zero());
    for (const auto& x : enumerate_units(F)) CHECK(residue(teichmueller(x, R), F) == x);
  }
}

TEST_CASE("character orthogonality of Teichmueller powers") {
  for (auto [p, s] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 1}, std::pair{7, 1}}) {
    const Field F = field_create(static_cast<std::uint64_t>(p), s);
    const Ring R = ring_create(static_cast<std::uint64_t>(p), s, 6);
    const auto units = enumerate_units(F);
    const auto q1 = static_cast<std::int64_t>(F->order() - 1);
    for (std::int64_t k = 0; k <= 2 * q1 + 1; ++k) {
      RamifiedElement sum(R);
      for (const auto& x : units) sum += teichmueller(x, R).pow(static_cast<std::uint64_t>(k));
      CHECK(sum == RamifiedElement::from_integer(R, k % q1 == 0 ? q1 : 0));
    }
  }
}
