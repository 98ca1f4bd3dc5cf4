#include "dwork/dwork_operator.hpp"

#include <algorithm>

#include "parallel.hpp"

namespace dwork {

namespace {

std::uint64_t upow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > UINT64_MAX / b) throw Error(ErrorKind::PrecisionBudgetExceeded, "q^m overflows");
    r *= b;
  }
  return r;
}

Rational to_rational(std::uint64_t v) { return Rational(static_cast<std::int64_t>(v)); }

// Dense product C = X Y of square matrices, parallel over rows of C.
RingMatrix multiply(const RingMatrix& x, const RingMatrix& y, unsigned workers) {
  const std::size_t n = x.rows();
  const RingParams& R = *x.ring();
  RingMatrix out(x.ring(), n, n);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (x.is_zero_at(i, k)) continue;
      const auto xik = x.at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (y.is_zero_at(k, j)) continue;
        R.multiply_add(xik, y.at(k, j), out.at(i, j));
      }
    }
  });
  return out;
}

}  // namespace

RatVec twist_gamma(const TwistData& twist, std::uint64_t q) {
  RatVec g;
  const auto d = 1 - static_cast<std::int64_t>(q);
  for (auto k : twist.k) g.push_back(Rational(k, d));
  return g;
}

bool twist_validate(const TwistData& twist, const NewtonData& nd) {
  if (twist.k.size() != static_cast<std::size_t>(nd.config.n())) return false;
  IntVec neg = twist.k;
  for (auto& x : neg) x = -x;
  return nd.in_cone(neg);
}

IntVec level_shift(const TwistData& twist, std::uint64_t q, int m) {
  std::int64_t geo = 0;
  std::int64_t qi = 1;
  for (int i = 0; i < m; ++i) {
    geo += qi;
    qi *= static_cast<std::int64_t>(q);
  }
  IntVec s;
  for (auto k : twist.k) s.push_back(k * geo);
  return s;
}

DworkProblem make_problem(std::vector<IntVec> A, std::uint64_t p, int f, IntVec k, std::vector<FqElement> a_bar, int M) {
  ExponentConfig config(std::move(A));
  NewtonData nd = newton_data(config);
  if (f < 1) throw Error(ErrorKind::InvalidArgument, "f must be >= 1");
  Ring ring = ring_create(p, f, M);
  Field field = field_create(p, f);
  if (k.size() != static_cast<std::size_t>(config.n())) throw Error(ErrorKind::InvalidArgument, "gamma_k must have n entries");
  if (a_bar.size() != static_cast<std::size_t>(config.N())) throw Error(ErrorKind::InvalidArgument, "a must have N entries");
  TwistData twist{std::move(k)};
  if (!twist_validate(twist, nd)) throw Error(ErrorKind::TwistOutsideCone, "gamma = k/(1-q) is not in the cone");
  std::vector<RamifiedElement> lifts;
  for (const auto& x : a_bar) {
    if (!x.field()->same_as(*field)) throw Error(ErrorKind::ParamsMismatch, "coefficient is not in F_q");
    lifts.push_back(teichmueller(x, ring));
  }
  const std::uint64_t q = field->order();
  return DworkProblem{std::move(config), std::move(nd), p, f, q, M, std::move(twist), std::move(field), std::move(ring),
                      std::move(a_bar), std::move(lifts)};
}

Rational auto_basis_cap(const DworkProblem& pr) {
  const Rational base(static_cast<std::int64_t>(pr.M) * static_cast<std::int64_t>(pr.p) * static_cast<std::int64_t>(pr.q),
                      static_cast<std::int64_t>(pr.p - 1) * static_cast<std::int64_t>(pr.q - 1));
  IntVec neg = pr.twist.k;
  for (auto& x : neg) x = -x;
  const Rational dk = weight(pr.nd, neg).value_or(Rational(0));
  return Rational(ceil(base)) + dk + Rational(2);
}

const RamifiedElement* SeriesOnCone::find(const IntVec& v) const {
  const auto it = coeffs.find(v);
  return it == coeffs.end() ? nullptr : &it->second;
}

Rational SeriesOnCone::floor_slope() const {
  return Rational(static_cast<std::int64_t>(ring->p() - 1), static_cast<std::int64_t>(ring->p() * Q));
}

std::optional<Rational> coefficient_floor(const SeriesOnCone& h, const NewtonData& nd, const IntVec& v) {
  IntVec rel(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) rel[i] = v[i] - h.shift[i];
  const auto d = weight(nd, rel);
  if (!d) return std::nullopt;
  return h.floor_slope() * *d;
}

SeriesOnCone h_series(const std::vector<RamifiedElement>& a, const TwistData& twist, int level, const NewtonData& nd,
                      std::uint64_t q, std::optional<Rational> D_support, unsigned workers) {
  const ExponentConfig& cfg = nd.config;
  if (a.size() != static_cast<std::size_t>(cfg.N())) throw Error(ErrorKind::InvalidArgument, "a must have N entries");
  if (level < 1) throw Error(ErrorKind::InvalidArgument, "level must be >= 1");
  if (!twist_validate(twist, nd)) throw Error(ErrorKind::TwistOutsideCone, "gamma = k/(1-q) is not in the cone");
  const Ring& ring = a.front().ring();
  for (const auto& x : a) {
    if (x.pow(q) != x) throw Error(ErrorKind::NotTeichmueller, "coefficient is not fixed by x -> x^q");
  }
  SeriesOnCone h;
  h.ring = ring;
  h.q = q;
  h.Q = upow(q, level);
  h.level = level;
  h.shift = level_shift(twist, q, level);
  h.gamma = twist_gamma(twist, q);
  h.support_cap = D_support;

  // Terms with sum of exponents >= cutoff have ord_p >= M.
  const std::uint64_t cutoff = splitting_cutoff(*ring, h.Q);
  if (cutoff > 200000) throw Error(ErrorKind::PrecisionBudgetExceeded, "series level too large for the precision");
  const auto c = splitting_coefficients(ring, h.Q, cutoff);
  const std::size_t N = a.size();
  const auto n = static_cast<std::size_t>(cfg.n());
  // terms[j][i] = c_i a_j^i
  std::vector<std::vector<RamifiedElement>> terms(N);
  for (std::size_t j = 0; j < N; ++j) {
    RamifiedElement apow = RamifiedElement::from_integer(ring, 1);
    for (std::uint64_t i = 0; i < cutoff; ++i) {
      terms[j].push_back(c[i].value * apow);
      apow *= a[j];
    }
  }
  std::vector<IntVec> cols;
  for (int j = 0; j < cfg.N(); ++j) cols.push_back(cfg.column(j));

  auto keep = [&](const IntVec& v) {
    if (!D_support) return true;
    IntVec rel(n);
    for (std::size_t i = 0; i < n; ++i) rel[i] = v[i] - h.shift[i];
    const auto d = weight(nd, rel);
    return d && *d <= *D_support;
  };

  // Depth-first over exponent tuples (i_1..i_N) with sum below cutoff, split
  // over i_1 so each worker owns a map; maps are merged in order.
  std::vector<std::map<IntVec, RamifiedElement>> parts(cutoff);
  detail::parallel_for(cutoff, workers, [&](std::size_t i0) {
    if (terms[0][i0].is_zero()) return;
    auto& out = parts[i0];
    IntVec exp = h.shift;
    for (std::size_t r = 0; r < n; ++r) exp[r] += static_cast<std::int64_t>(i0) * cols[0][r];
    auto rec = [&](auto&& self, std::size_t j, std::uint64_t used, const RamifiedElement& acc, IntVec& e) -> void {
      if (j == N) {
        if (!keep(e)) return;
        auto it = out.find(e);
        if (it == out.end()) out.emplace(e, acc);
        else it->second += acc;
        return;
      }
      for (std::uint64_t i = 0; used + i < cutoff; ++i) {
        if (terms[j][i].is_zero()) continue;
        const RamifiedElement next = acc * terms[j][i];
        if (next.is_zero()) continue;
        for (std::size_t r = 0; r < n; ++r) e[r] += static_cast<std::int64_t>(i) * cols[j][r];
        self(self, j + 1, used + i, next, e);
        for (std::size_t r = 0; r < n; ++r) e[r] -= static_cast<std::int64_t>(i) * cols[j][r];
      }
    };
    rec(rec, 1, i0, terms[0][i0], exp);
  });
  for (auto& part : parts) {
    for (auto& [v, x] : part) {
      auto it = h.coeffs.find(v);
      if (it == h.coeffs.end()) h.coeffs.emplace(v, std::move(x));
      else it->second += x;
    }
  }
  for (auto it = h.coeffs.begin(); it != h.coeffs.end();) it = it->second.is_zero() ? h.coeffs.erase(it) : std::next(it);
  return h;
}

namespace {

// Coefficient of H at v, checking that a dropped exponent is really zero.
const RamifiedElement* lookup(const SeriesOnCone& h, const NewtonData& nd, const IntVec& v) {
  if (const auto* x = h.find(v)) return x;
  if (h.support_cap) {
    IntVec rel(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) rel[i] = v[i] - h.shift[i];
    const auto d = weight(nd, rel);
    if (d && *d > *h.support_cap && h.floor_slope() * *d < Rational(h.ring->precision())) {
      throw Error(ErrorKind::SupportTooSmall, "series support does not reach a needed coefficient");
    }
  }
  return nullptr;
}

Rational tail_for(const SeriesOnCone& h, const Rational& next_weight) {
  return h.floor_slope() * to_rational(h.Q - 1) * next_weight;
}

}  // namespace

DworkMatrix matrix_build(const SeriesOnCone& h, const NewtonData& nd, const Rational& D, unsigned workers) {
  auto basis = enumerate_shifted(nd, h.gamma, D);
  const std::size_t dim = basis.size();
  DworkMatrix dm{std::move(basis), RingMatrix(h.ring, dim, dim), h.Q, D, Rational(0), Rational(0), Rational(0)};
  const auto n = static_cast<std::size_t>(nd.config.n());
  const auto Q = static_cast<std::int64_t>(h.Q);
  detail::parallel_for(dim, workers, [&](std::size_t col) {
    const IntVec& u = dm.basis[col].w;
    IntVec v(n);
    for (std::size_t row = 0; row < dim; ++row) {
      const IntVec& w = dm.basis[row].w;
      for (std::size_t i = 0; i < n; ++i) v[i] = Q * w[i] - u[i];
      if (const auto* x = lookup(h, nd, v)) dm.entries.set(row, col, *x);
    }
  });
  dm.next_weight = next_weight(nd, h.gamma, D);
  dm.tail_bound = tail_for(h, dm.next_weight);
  dm.precision = std::min(Rational(h.ring->precision()), dm.tail_bound);
  return dm;
}

Certified trace_matrix_power(const DworkMatrix& dm, int m, unsigned workers) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  const RingMatrix& G = dm.entries;
  const std::size_t n = G.rows();
  const RingParams& R = *G.ring();
  RamifiedElement tr(G.ring());
  if (m == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = G.at(i, i);
      for (std::size_t k = 0; k < R.stride(); ++k) tr.coords()[k] = R.add(tr.coords()[k], d[k]);
    }
    return {tr, dm.precision};
  }
  RingMatrix P = G;
  for (int e = 2; e < m; ++e) P = multiply(P, G, workers);
  // Tr(P G) = sum_{i,j} P_ij G_ji
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (P.is_zero_at(i, j) || G.is_zero_at(j, i)) continue;
      R.multiply_add(P.at(i, j), G.at(j, i), tr.coords());
    }
  }
  return {tr, dm.precision};
}

Certified trace_level_series(const SeriesOnCone& h, const NewtonData& nd, std::optional<Rational> D) {
  const RingParams& R = *h.ring;
  const Rational M(R.precision());
  const Rational need = M * Rational(static_cast<std::int64_t>(R.p() * h.Q), static_cast<std::int64_t>((R.p() - 1) * (h.Q - 1)));
  const Rational cap = D.value_or(Rational(ceil(need)));
  const auto pts = enumerate_shifted(nd, h.gamma, cap);
  const auto n = static_cast<std::size_t>(nd.config.n());
  const auto Q = static_cast<std::int64_t>(h.Q);
  RamifiedElement tr(h.ring);
  IntVec v(n);
  for (const auto& pt : pts) {
    for (std::size_t i = 0; i < n; ++i) v[i] = (Q - 1) * pt.w[i];
    if (const auto* x = lookup(h, nd, v)) tr += *x;
  }
  const Rational tail = tail_for(h, next_weight(nd, h.gamma, cap));
  return {tr, std::min(M, tail)};
}

std::vector<Certified> char_series(const DworkMatrix& dm, std::optional<std::size_t> max_degree, unsigned workers) {
  std::vector<Certified> out;
  for (auto& c : char_series_division_free(dm.entries, max_degree, workers)) out.push_back({std::move(c), dm.precision});
  return out;
}

Certified problem_trace(const DworkProblem& pr, int m, TraceRoute route, std::optional<Rational> D, unsigned workers) {
  if (route == TraceRoute::MatrixPower) {
    const auto h = h_series(pr.a, pr.twist, 1, pr.nd, pr.q, std::nullopt, workers);
    const auto dm = matrix_build(h, pr.nd, D.value_or(auto_basis_cap(pr)), workers);
    return trace_matrix_power(dm, m, workers);
  }
  const auto h = h_series(pr.a, pr.twist, m, pr.nd, pr.q, std::nullopt, workers);
  return trace_level_series(h, pr.nd, D);
}

}  // namespace dwork
