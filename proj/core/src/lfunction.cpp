#include "dwork/lfunction.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace dwork {

namespace {

std::uint64_t upow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::int64_t pos_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

int ord_p_int(std::int64_t k, std::uint64_t p) {
  int v = 0;
  const auto pp = static_cast<std::int64_t>(p);
  while (k != 0 && k % pp == 0) {
    k /= pp;
    ++v;
  }
  return v;
}

// x / k where x is known to `prec`; the result is known to prec - ord_p(k).
RamifiedElement divide_known(const RamifiedElement& x, const Rational& prec, std::int64_t k) {
  const RingParams& R = *x.ring();
  const int v = ord_p_int(k, R.p());
  RamifiedElement masked = truncate_to(x, prec);
  const auto S = static_cast<std::size_t>(R.degree());
  std::uint64_t pv = 1;
  for (int i = 0; i < v; ++i) pv *= R.p();
  for (std::size_t idx = 0; idx < R.stride(); ++idx) {
    const std::size_t i = idx / S;
    const std::int64_t digits = ceil(prec - Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(R.pi_slots())));
    std::uint64_t& c = masked.coords()[idx];
    if (digits < v) {
      c = 0;
    } else if (c % pv != 0) {
      throw Error(ErrorKind::InvalidArgument, "known digits are not divisible by " + std::to_string(k));
    }
  }
  return truncate_to(divide_by_integer(masked, k), prec - Rational(v));
}

Rational cap(const Rational& prec, const Ring& ring) { return std::min(prec, Rational(ring->precision())); }

}  // namespace

int comparison_precision(int M, std::uint64_t p, int m_max) {
  int e = 0;
  for (std::uint64_t pe = 1; pe < static_cast<std::uint64_t>(m_max); pe *= p) ++e;
  return M - e - 2;
}

RamifiedElement truncate_to(const RamifiedElement& x, const Rational& precision) {
  const RingParams& R = *x.ring();
  RamifiedElement out = x;
  const auto S = static_cast<std::size_t>(R.degree());
  for (std::size_t idx = 0; idx < R.stride(); ++idx) {
    const std::size_t i = idx / S;
    const std::int64_t digits =
        ceil(precision - Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(R.pi_slots())));
    if (digits >= R.precision()) continue;
    if (digits <= 0) {
      out.coords()[idx] = 0;
      continue;
    }
    std::uint64_t pd = 1;
    for (std::int64_t k = 0; k < digits; ++k) pd *= R.p();
    out.coords()[idx] %= pd;
  }
  return out;
}

RamifiedElement sums_oracle_characters(const DworkProblem& pr, int m, double point_budget, unsigned workers) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  const int n = pr.config.n(), N = pr.config.N();
  double points = 1;
  for (int i = 0; i < n; ++i) points *= std::pow(static_cast<double>(pr.q), m) - 1;
  if (points > point_budget) throw Error(ErrorKind::LevelTooLarge, "too many torus points for the character oracle");
  const std::uint64_t Qm = upow(pr.q, m);

  const Field ext = m == 1 ? pr.field : field_create(pr.p, pr.f * m);
  const FqElement g = primitive_element(ext);
  const FqElement zeta = m == 1 ? g : trace_norm(g, pr.field).norm;
  std::vector<FqElement> a_ext;
  if (m == 1) {
    a_ext = pr.a_bar;
  } else {
    const FieldEmbedding emb(pr.field, ext);
    for (const auto& x : pr.a_bar) a_ext.push_back(emb.apply(x));
  }
  // tr[j][e] = Tr_{F_{q^m}/F_p}(a_j g^e); the additive character only needs
  // the trace of the sum, which is the sum of traces.
  const auto units = static_cast<std::size_t>(Qm - 1);
  std::vector<std::vector<std::uint32_t>> tr(static_cast<std::size_t>(N), std::vector<std::uint32_t>(units));
  {
    FqElement ge = FqElement::from_integer(ext, 1);
    for (std::size_t e = 0; e < units; ++e) {
      for (int j = 0; j < N; ++j) tr[static_cast<std::size_t>(j)][e] = absolute_trace(a_ext[static_cast<std::size_t>(j)] * ge);
      ge *= g;
    }
  }
  const auto qm1 = static_cast<std::int64_t>(pr.q - 1);
  const auto p = static_cast<std::size_t>(pr.p);
  const auto& rows = pr.config.rows();

  // Histogram over (character exponent mod q-1, trace), one per block of e_1.
  // Counts are integers, so the block split does not affect the result.
  const std::size_t blocks = std::min<std::size_t>(units, 64);
  std::vector<std::vector<std::uint64_t>> hist(blocks, std::vector<std::uint64_t>(static_cast<std::size_t>(qm1) * p, 0));
  detail::parallel_for(blocks, workers, [&](std::size_t b) {
    auto& h = hist[b];
    for (std::size_t e0 = b * units / blocks; e0 < (b + 1) * units / blocks; ++e0) {
      std::vector<std::int64_t> e(static_cast<std::size_t>(n), 0);
      e[0] = static_cast<std::int64_t>(e0);
      for (;;) {
        std::int64_t chi = 0;
        for (int i = 0; i < n; ++i) chi += pr.twist.k[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
        std::uint64_t t = 0;
        for (int j = 0; j < N; ++j) {
          std::int64_t s = 0;
          for (int i = 0; i < n; ++i) s += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(i)];
          t += tr[static_cast<std::size_t>(j)][static_cast<std::size_t>(pos_mod(s, static_cast<std::int64_t>(units)))];
        }
        ++h[static_cast<std::size_t>(pos_mod(chi, qm1)) * p + t % p];
        int i = n - 1;
        while (i >= 1 && ++e[static_cast<std::size_t>(i)] == static_cast<std::int64_t>(units)) e[static_cast<std::size_t>(i--)] = 0;
        if (i < 1) break;
      }
    }
  });

  const Ring& ring = pr.ring;
  const RamifiedElement T = teichmueller(zeta, ring);
  const RamifiedElement theta = theta_one(ring);
  std::vector<RamifiedElement> Tpow{RamifiedElement::from_integer(ring, 1)};
  for (std::int64_t r = 1; r < qm1; ++r) Tpow.push_back(Tpow.back() * T);
  std::vector<RamifiedElement> thpow{RamifiedElement::from_integer(ring, 1)};
  for (std::size_t t = 1; t < p; ++t) thpow.push_back(thpow.back() * theta);

  RamifiedElement S(ring);
  for (std::size_t r = 0; r < static_cast<std::size_t>(qm1); ++r) {
    for (std::size_t t = 0; t < p; ++t) {
      std::uint64_t cnt = 0;
      for (const auto& h : hist) cnt += h[r * p + t];
      if (cnt) S += (Tpow[r] * thpow[t]).scaled(static_cast<std::int64_t>(cnt % ring->modulus()));
    }
  }
  return S;
}

RamifiedElement sums_oracle_series(const DworkProblem& pr, int m, double point_budget) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  const int n = pr.config.n(), N = pr.config.N();
  const double Qd = std::pow(static_cast<double>(pr.q), m);
  const double work = static_cast<double>(N) * (Qd - 1) * Qd;
  double points = 1;
  for (int i = 0; i < n; ++i) points *= Qd - 1;
  if (work + points * N > point_budget) throw Error(ErrorKind::LevelTooLarge, "level too large for the series oracle");
  const std::uint64_t Q = upow(pr.q, m);
  const auto units = static_cast<std::size_t>(Q - 1);

  const Ring ext_ring = m == 1 ? pr.ring : ring_create(pr.p, pr.f * m, pr.M);
  const Field ext = m == 1 ? pr.field : field_create(pr.p, pr.f * m);
  std::optional<RingEmbedding> emb;
  if (m > 1) emb.emplace(pr.ring, ext_ring);

  // E(z) = sum_r C_r z^r at z with z^{Q-1} = 1, C_r = sum_{i = r mod Q-1} c_i.
  const auto c = splitting_coefficients(ext_ring, Q, splitting_cutoff(*ext_ring, Q));
  std::vector<RamifiedElement> C(units, RamifiedElement(ext_ring));
  for (std::size_t i = 0; i < c.size(); ++i) C[i % units] += c[i].value;

  const RamifiedElement tau = teichmueller(primitive_element(ext), ext_ring);
  std::vector<RamifiedElement> tp{RamifiedElement::from_integer(ext_ring, 1)};
  for (std::size_t e = 1; e < units; ++e) tp.push_back(tp.back() * tau);

  // E_j(s) = E(a_j tau^s)
  std::vector<std::vector<RamifiedElement>> Etab(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    const RamifiedElement aj = emb ? emb->apply(pr.a[static_cast<std::size_t>(j)]) : pr.a[static_cast<std::size_t>(j)];
    for (std::size_t s = 0; s < units; ++s) {
      const RamifiedElement z = aj * tp[s];
      if (z.is_zero()) {
        Etab[static_cast<std::size_t>(j)].push_back(RamifiedElement::from_integer(ext_ring, 1));
        continue;
      }
      RamifiedElement acc = C[units - 1];
      for (std::size_t r = units - 1; r-- > 0;) acc = acc * z + C[r];
      Etab[static_cast<std::size_t>(j)].push_back(std::move(acc));
    }
  }

  const IntVec shift = level_shift(pr.twist, pr.q, m);
  const auto& rows = pr.config.rows();
  const auto U = static_cast<std::int64_t>(units);
  RamifiedElement S(ext_ring);
  std::vector<std::int64_t> e(static_cast<std::size_t>(n), 0);
  for (;;) {
    std::int64_t chi = 0;
    for (int i = 0; i < n; ++i) chi += shift[static_cast<std::size_t>(i)] % U * e[static_cast<std::size_t>(i)];
    RamifiedElement prod = tp[static_cast<std::size_t>(pos_mod(chi, U))];
    for (int j = 0; j < N; ++j) {
      std::int64_t s = 0;
      for (int i = 0; i < n; ++i) s += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(i)];
      prod *= Etab[static_cast<std::size_t>(j)][static_cast<std::size_t>(pos_mod(s, U))];
    }
    S += prod;
    int i = n - 1;
    while (i >= 0 && ++e[static_cast<std::size_t>(i)] == U) e[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
  return emb ? emb->descend(S) : S;
}

std::vector<std::pair<std::vector<FqElement>, RamifiedElement>> hyp_table(const DworkProblem& pr, double budget) {
  const int N = pr.config.N();
  double total = 1;
  for (int j = 0; j < N; ++j) total *= static_cast<double>(pr.q);
  double torus = 1;
  for (int i = 0; i < pr.config.n(); ++i) torus *= static_cast<double>(pr.q - 1);
  if (total * torus > budget) throw Error(ErrorKind::BudgetExceeded, "hypergeometric table too large");
  std::vector<std::pair<std::vector<FqElement>, RamifiedElement>> out;
  const auto count = static_cast<std::uint64_t>(total);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<FqElement> x;
    std::uint64_t rest = idx;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(N));
    for (int j = N - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = rest % pr.q;
      rest /= pr.q;
    }
    for (auto d : digits) x.push_back(FqElement::from_index(pr.field, d));
    DworkProblem sub = pr;
    sub.a_bar = x;
    sub.a.clear();
    for (const auto& v : x) sub.a.push_back(teichmueller(v, pr.ring));
    out.emplace_back(x, sums_oracle_characters(sub, 1));
  }
  return out;
}

PowerSeriesT l_series_from_sums(const std::vector<Certified>& S) {
  if (S.empty()) throw Error(ErrorKind::InvalidArgument, "need at least S_1");
  const Ring ring = S.front().value.ring();
  PowerSeriesT L{ring, {RamifiedElement::from_integer(ring, 1)}, {Rational(ring->precision())}};
  for (std::size_t k = 1; k <= S.size(); ++k) {
    RamifiedElement num(ring);
    Rational prec(ring->precision());
    for (std::size_t j = 1; j <= k; ++j) {
      num += S[j - 1].value * L.coeffs[k - j];
      prec = std::min({prec, cap(S[j - 1].precision, ring), L.precision[k - j]});
    }
    const int v = ord_p_int(static_cast<std::int64_t>(k), ring->p());
    L.coeffs.push_back(divide_known(num, prec, static_cast<std::int64_t>(k)));
    L.precision.push_back(prec - Rational(v));
  }
  return L;
}

PowerSeriesT series_multiply(const PowerSeriesT& a, const PowerSeriesT& b) {
  const std::size_t order = std::min(a.order(), b.order());
  PowerSeriesT out{a.ring, {}, {}};
  for (std::size_t k = 0; k <= order; ++k) {
    RamifiedElement c(a.ring);
    Rational prec(a.ring->precision());
    for (std::size_t i = 0; i <= k; ++i) {
      c += a.coeffs[i] * b.coeffs[k - i];
      prec = std::min({prec, a.precision[i], b.precision[k - i]});
    }
    out.coeffs.push_back(std::move(c));
    out.precision.push_back(prec);
  }
  return out;
}

PowerSeriesT series_inverse(const PowerSeriesT& a) {
  const PiOrd o = pi_ord(a.coeffs.front());
  if (o.at_least_precision() || *o.value != Rational(0)) {
    throw Error(ErrorKind::NonUnitConstantTerm, "constant term is not a unit");
  }
  const RamifiedElement b0 = inverse(a.coeffs.front());
  PowerSeriesT out{a.ring, {b0}, {a.precision.front()}};
  for (std::size_t k = 1; k <= a.order(); ++k) {
    RamifiedElement s(a.ring);
    Rational prec = a.precision.front();
    for (std::size_t i = 1; i <= k; ++i) {
      s += a.coeffs[i] * out.coeffs[k - i];
      prec = std::min({prec, a.precision[i], out.precision[k - i]});
    }
    out.coeffs.push_back(-(b0 * s));
    out.precision.push_back(prec);
  }
  return out;
}

PowerSeriesT l_from_charseries(const std::vector<Certified>& P, int n, std::uint64_t q, std::size_t m_max) {
  if (P.empty()) throw Error(ErrorKind::InvalidArgument, "empty characteristic series");
  const Ring ring = P.front().value.ring();
  const PiOrd o = pi_ord(P.front().value);
  if (o.at_least_precision() || *o.value != Rational(0)) {
    throw Error(ErrorKind::NonUnitConstantTerm, "det(I - TG) has a non-unit constant term");
  }
  PowerSeriesT total{ring, {RamifiedElement::from_integer(ring, 1)}, {Rational(ring->precision())}};
  for (std::size_t i = 1; i <= m_max; ++i) {
    total.coeffs.emplace_back(ring);
    total.precision.push_back(Rational(ring->precision()));
  }
  std::int64_t binom = 1;
  const RamifiedElement qe = RamifiedElement::from_integer(ring, static_cast<std::int64_t>(q));
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    // P(q^{n-k} T); beyond the computed degree the coefficients are zero to
    // the precision of the last one.
    PowerSeriesT Pk{ring, {}, {}};
    const RamifiedElement scale = qe.pow(static_cast<std::uint64_t>(n - k));
    RamifiedElement s = RamifiedElement::from_integer(ring, 1);
    for (std::size_t i = 0; i <= m_max; ++i) {
      if (i < P.size()) {
        Pk.coeffs.push_back(P[i].value * s);
        Pk.precision.push_back(cap(P[i].precision, ring));
      } else {
        Pk.coeffs.emplace_back(ring);
        Pk.precision.push_back(cap(P.back().precision, ring));
      }
      s *= scale;
    }
    const bool negative = (k + 1) % 2 == 1;
    if (negative) Pk = series_inverse(Pk);
    for (std::int64_t r = 0; r < binom; ++r) total = series_multiply(total, Pk);
  }
  return total;
}

Recognition rational_recognition(const PowerSeriesT& L, std::size_t expected_degree, int n,
                                 const Rational& compare_precision) {
  if (L.order() < expected_degree + 3) {
    throw Error(ErrorKind::InvalidArgument, "series must be known to order expected_degree + 3");
  }
  const int exponent = (n - 1) % 2 == 0 ? 1 : -1;
  const PowerSeriesT E = exponent == 1 ? L : series_inverse(L);
  for (std::size_t i = expected_degree + 1; i <= E.order(); ++i) {
    if (!vanishes_to(E.coeffs[i], std::min(E.precision[i], compare_precision))) return NotPolynomial{i};
  }
  LPolynomial poly{E.ring, {}, {}, exponent};
  for (std::size_t i = 0; i <= expected_degree; ++i) {
    poly.coeffs.push_back(E.coeffs[i]);
    poly.precision.push_back(std::min(E.precision[i], compare_precision));
  }
  return poly;
}

NewtonPolygon newton_polygon(const LPolynomial& poly) {
  NewtonPolygon out;
  std::vector<std::pair<std::int64_t, Rational>> pts;
  for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
    if (vanishes_to(poly.coeffs[i], poly.precision[i])) {
      out.below_precision.push_back(i);
      continue;
    }
    pts.emplace_back(static_cast<std::int64_t>(i), *pi_ord(poly.coeffs[i]).value);
  }
  // Lower hull, points already sorted by abscissa.
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return Rational(a.first - o.first) * (b.second - o.second) - (a.second - o.second) * Rational(b.first - o.first);
  };
  for (const auto& pt : pts) {
    while (out.vertices.size() >= 2 && cross(out.vertices[out.vertices.size() - 2], out.vertices.back(), pt) <= Rational(0))
      out.vertices.pop_back();
    out.vertices.push_back(pt);
  }
  for (std::size_t i = 1; i < out.vertices.size(); ++i) {
    const auto dx = out.vertices[i].first - out.vertices[i - 1].first;
    out.slopes.emplace_back((out.vertices[i].second - out.vertices[i - 1].second) / Rational(dx), dx);
  }
  return out;
}

}  // namespace dwork
