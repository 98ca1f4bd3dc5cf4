#include "dwork/polytope.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "intmat.hpp"
#include "parallel.hpp"

namespace dwork {

namespace {

Rational dot(const RatVec& a, const IntVec& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  if (k > n) return out;
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

int sign_of(std::int64_t v) { return (v > 0) - (v < 0); }

std::int64_t det_of_columns(const ExponentConfig& cfg, const std::vector<int>& cols) {
  detail::IntMat m(static_cast<std::size_t>(cfg.n()), IntVec(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const IntVec c = cfg.column(cols[k]);
    for (std::size_t i = 0; i < c.size(); ++i) m[i][k] = c[i];
  }
  return detail::determinant(m);
}

std::int64_t max_abs_entry(const ExponentConfig& cfg) {
  std::int64_t b = 0;
  for (const auto& row : cfg.rows())
    for (auto v : row) b = std::max(b, std::abs(v));
  return b;
}

// Odometer over the integer box lo..hi (inclusive), calling f on each point.
template <class F>
void for_each_in_box(const IntVec& lo, const IntVec& hi, F&& f) {
  const std::size_t n = lo.size();
  for (std::size_t i = 0; i < n; ++i)
    if (lo[i] > hi[i]) return;
  IntVec cur = lo;
  for (;;) {
    f(cur);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (cur[i] < hi[i]) {
        ++cur[i];
        for (std::size_t j = i + 1; j < n; ++j) cur[j] = lo[j];
        break;
      }
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace

ExponentConfig::ExponentConfig(std::vector<IntVec> rows) : rows_(std::move(rows)) {
  if (rows_.empty() || rows_.front().empty()) throw Error(ErrorKind::InvalidArgument, "exponent matrix is empty");
  for (const auto& r : rows_) {
    if (r.size() != rows_.front().size()) throw Error(ErrorKind::InvalidArgument, "exponent matrix rows are ragged");
  }
  if (detail::rank(rows_) != n()) {
    throw Error(ErrorKind::RankDeficient, "exponent matrix has rank below " + std::to_string(n()));
  }
}

IntVec ExponentConfig::column(int j) const {
  IntVec c;
  c.reserve(rows_.size());
  for (const auto& r : rows_) c.push_back(r.at(static_cast<std::size_t>(j)));
  return c;
}

IntVec ExponentConfig::apply(const IntVec& v) const {
  IntVec out(rows_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += rows_[i][j] * v[j];
  return out;
}

bool NewtonData::in_cone(const RatVec& x) const {
  for (const auto& f : cone_facets) {
    Rational s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * f.normal[i];
    if (s < Rational(0)) return false;
  }
  return true;
}

bool NewtonData::in_cone(const IntVec& w) const {
  for (const auto& f : cone_facets) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.normal[i];
    if (s < 0) return false;
  }
  return true;
}

NewtonData newton_data(const ExponentConfig& config) {
  NewtonData nd{config, {}, {}, 1};
  const int n = config.n(), N = config.N();
  std::vector<IntVec> cols;
  for (int j = 0; j < N; ++j) cols.push_back(config.column(j));

  for (const auto& sub : subsets(N, n)) {
    std::vector<RatVec> m;
    for (int j : sub) m.emplace_back(cols[static_cast<std::size_t>(j)].begin(), cols[static_cast<std::size_t>(j)].end());
    auto ell = detail::rational_solve(m, RatVec(static_cast<std::size_t>(n), Rational(1)));
    if (!ell) continue;
    Facet f{*ell, {}};
    bool ok = true;
    for (int j = 0; j < N && ok; ++j) {
      const Rational v = dot(*ell, cols[static_cast<std::size_t>(j)]);
      if (v > Rational(1)) ok = false;
      if (v == Rational(1)) f.columns.push_back(j);
    }
    if (!ok) continue;
    if (std::any_of(nd.facets.begin(), nd.facets.end(), [&](const Facet& g) { return g.ell == f.ell; })) continue;
    nd.facets.push_back(std::move(f));
  }

  for (const auto& sub : subsets(N, n - 1)) {
    std::vector<IntVec> vs;
    for (int j : sub) vs.push_back(cols[static_cast<std::size_t>(j)]);
    IntVec nu = detail::hyperplane_normal(vs, n);
    if (std::all_of(nu.begin(), nu.end(), [](std::int64_t x) { return x == 0; })) continue;
    bool pos = false, neg = false;
    for (const auto& c : cols) {
      std::int64_t s = 0;
      for (int i = 0; i < n; ++i) s += nu[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
      pos |= s > 0;
      neg |= s < 0;
    }
    if (pos && neg) continue;
    if (neg)
      for (auto& x : nu) x = -x;
    if (std::any_of(nd.cone_facets.begin(), nd.cone_facets.end(), [&](const ConeFacet& g) { return g.normal == nu; }))
      continue;
    ConeFacet cf{nu, {}};
    for (int j = 0; j < N; ++j) {
      std::int64_t s = 0;
      for (int i = 0; i < n; ++i) s += nu[static_cast<std::size_t>(i)] * cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (s == 0) cf.columns.push_back(j);
    }
    nd.cone_facets.push_back(std::move(cf));
  }

  for (const auto& f : nd.facets)
    for (const auto& c : f.ell) nd.denom = std::lcm(nd.denom, c.denominator());
  return nd;
}

std::optional<Rational> weight(const NewtonData& nd, const RatVec& w) {
  if (!nd.in_cone(w)) return std::nullopt;
  Rational best(0);
  for (const auto& f : nd.facets) best = std::max(best, dot(f.ell, w));
  return best;
}

std::optional<Rational> weight(const NewtonData& nd, const IntVec& w) {
  return weight(nd, RatVec(w.begin(), w.end()));
}

std::vector<LatticePoint> enumerate_shifted(const NewtonData& nd, const RatVec& shift, const Rational& D) {
  if (D < Rational(0)) throw Error(ErrorKind::InvalidArgument, "weight cap must be nonnegative");
  const auto n = static_cast<std::size_t>(nd.config.n());
  const Rational radius = D * Rational(max_abs_entry(nd.config));
  IntVec lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = ceil(-shift[i] - radius);
    hi[i] = floor(-shift[i] + radius);
  }
  std::vector<LatticePoint> out;
  RatVec x(n);
  for_each_in_box(lo, hi, [&](const IntVec& u) {
    for (std::size_t i = 0; i < n; ++i) x[i] = Rational(u[i]) + shift[i];
    const auto d = weight(nd, x);
    if (d && *d <= D) out.push_back({u, *d});
  });
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.w < b.w;
  });
  return out;
}

std::vector<LatticePoint> enumerate(const NewtonData& nd, const Rational& D) {
  return enumerate_shifted(nd, RatVec(static_cast<std::size_t>(nd.config.n()), Rational(0)), D);
}

Rational next_weight(const NewtonData& nd, const RatVec& shift, const Rational& D) {
  for (std::int64_t step = 1; step < (std::int64_t{1} << 20); step *= 2) {
    std::optional<Rational> best;
    for (const auto& pt : enumerate_shifted(nd, shift, D + Rational(step))) {
      if (pt.weight > D && (!best || pt.weight < *best)) best = pt.weight;
    }
    if (best) return *best;
  }
  throw Error(ErrorKind::InvalidArgument, "no lattice point above the weight cap");
}

MonoidVerdict monoid_membership(const NewtonData& nd, const IntVec& w, int K_max) {
  const ExponentConfig& cfg = nd.config;
  const int N = cfg.N();
  if (!nd.in_cone(w)) return NotInCA{};
  if (!detail::lattice_solve(cfg.rows(), w)) return NotInCA{};

  std::vector<IntVec> cols;
  for (int j = 0; j < N; ++j) cols.push_back(cfg.column(j));
  std::map<IntVec, IntVec> seen;
  std::vector<IntVec> frontier{IntVec(w.size(), 0)};
  seen[frontier.front()] = IntVec(static_cast<std::size_t>(N), 0);
  constexpr std::size_t kVisitCap = 2'000'000;
  bool capped = false;
  for (int level = 0; level <= K_max; ++level) {
    for (const auto& pt : frontier) {
      if (pt == w) return InCA{seen[pt]};
    }
    if (level == K_max) break;
    std::vector<IntVec> next;
    for (const auto& pt : frontier) {
      const IntVec k = seen[pt];
      for (int j = 0; j < N; ++j) {
        IntVec nxt = pt;
        for (std::size_t i = 0; i < nxt.size(); ++i) nxt[i] += cols[static_cast<std::size_t>(j)][i];
        if (seen.count(nxt)) continue;
        IntVec kk = k;
        ++kk[static_cast<std::size_t>(j)];
        seen.emplace(nxt, std::move(kk));
        next.push_back(std::move(nxt));
      }
    }
    frontier = std::move(next);
    if (seen.size() > kVisitCap) {
      capped = true;
      break;
    }
  }
  if (capped) return Unknown{};

  // Pointed cone: h = sum of cone normals is positive on delta \ {0}, so any
  // representation uses at most h(w) / min_j h(w_j) columns.
  if (!nd.cone_facets.empty()) {
    detail::IntMat normals;
    for (const auto& f : nd.cone_facets) normals.push_back(f.normal);
    if (detail::rank(normals) == cfg.n()) {
      IntVec h(w.size(), 0);
      for (const auto& f : nd.cone_facets)
        for (std::size_t i = 0; i < h.size(); ++i) h[i] += f.normal[i];
      auto hv = [&](const IntVec& x) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += h[i] * x[i];
        return s;
      };
      std::int64_t hmin = 0;
      for (const auto& c : cols) {
        const std::int64_t v = hv(c);
        if (v > 0 && (hmin == 0 || v < hmin)) hmin = v;
      }
      if (hmin > 0 && static_cast<std::int64_t>(K_max) * hmin >= hv(w)) return NotInCA{};
    }
  }
  return Unknown{};
}

std::vector<Simplex> simplicial_decomposition(const NewtonData& nd) {
  const ExponentConfig& cfg = nd.config;
  const int n = cfg.n();
  std::vector<Simplex> out;
  for (const auto& facet : nd.facets) {
    std::vector<int> pts;
    for (int j : facet.columns) {
      const IntVec c = cfg.column(j);
      if (std::none_of(pts.begin(), pts.end(), [&](int k) { return cfg.column(k) == c; })) pts.push_back(j);
    }
    std::vector<int> initial;
    for (int j : pts) {
      std::vector<int> trial = initial;
      trial.push_back(j);
      detail::IntMat m;
      for (int k : trial) m.push_back(cfg.column(k));
      if (detail::rank(m) == static_cast<int>(trial.size())) initial = trial;
      if (static_cast<int>(initial.size()) == n) break;
    }
    std::vector<std::vector<int>> simplices{initial};
    for (int j : pts) {
      if (std::find(initial.begin(), initial.end(), j) != initial.end()) continue;
      // Ridges of the current triangulation with their multiplicity and the
      // opposite vertex of the (unique, when boundary) simplex holding them.
      std::map<std::vector<int>, std::pair<int, int>> ridges;
      for (const auto& s : simplices) {
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
          std::vector<int> r;
          for (std::size_t k = 0; k < s.size(); ++k)
            if (k != drop) r.push_back(s[k]);
          auto& e = ridges[r];
          ++e.first;
          e.second = s[drop];
        }
      }
      std::vector<std::vector<int>> added;
      for (const auto& [r, info] : ridges) {
        if (info.first != 1) continue;
        std::vector<int> with_opp = r, with_new = r;
        with_opp.push_back(info.second);
        with_new.push_back(j);
        const int so = sign_of(det_of_columns(cfg, with_opp));
        const int sn = sign_of(det_of_columns(cfg, with_new));
        if (sn != 0 && sn == -so) {
          std::vector<int> s = r;
          s.push_back(j);
          std::sort(s.begin(), s.end());
          added.push_back(std::move(s));
        }
      }
      simplices.insert(simplices.end(), added.begin(), added.end());
    }
    for (auto& s : simplices) {
      std::sort(s.begin(), s.end());
      Simplex simplex{s, det_of_columns(cfg, s), {}};
      std::vector<IntVec> gens;
      for (int k : s) gens.push_back(cfg.column(k));
      IntVec lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), 0);
      for (const auto& g : gens) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          lo[i] += std::min<std::int64_t>(0, g[i]);
          hi[i] += std::max<std::int64_t>(0, g[i]);
        }
      }
      std::vector<RatVec> m(static_cast<std::size_t>(n), RatVec(static_cast<std::size_t>(n)));
      for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
        for (std::size_t k = 0; k < gens.size(); ++k) m[i][k] = Rational(gens[k][i]);
      for_each_in_box(lo, hi, [&](const IntVec& x) {
        const auto c = detail::rational_solve(m, RatVec(x.begin(), x.end()));
        if (!c) return;
        for (const auto& ck : *c)
          if (ck < Rational(0) || ck >= Rational(1)) return;
        simplex.fundamental_points.push_back(x);
      });
      out.push_back(std::move(simplex));
    }
  }
  return out;
}

std::int64_t normalized_volume(const NewtonData& nd) {
  std::int64_t vol = 0;
  for (const auto& s : simplicial_decomposition(nd)) vol += std::abs(s.det);
  return vol;
}

std::vector<std::vector<int>> faces_without_origin(const NewtonData& nd) {
  // (contains origin, columns); closure under intersection of all facets.
  std::set<std::pair<bool, std::vector<int>>> faces;
  for (const auto& f : nd.facets) faces.insert({false, f.columns});
  for (const auto& f : nd.cone_facets) faces.insert({true, f.columns});
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::pair<bool, std::vector<int>>> cur(faces.begin(), faces.end());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t k = i + 1; k < cur.size(); ++k) {
        std::vector<int> inter;
        std::set_intersection(cur[i].second.begin(), cur[i].second.end(), cur[k].second.begin(), cur[k].second.end(),
                              std::back_inserter(inter));
        const bool origin = cur[i].first && cur[k].first;
        if (inter.empty() && !origin) continue;
        if (faces.insert({origin, inter}).second) grew = true;
      }
    }
  }
  std::vector<std::vector<int>> out;
  for (const auto& [origin, cols] : faces)
    if (!origin && !cols.empty()) out.push_back(cols);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

NondegeneracyVerdict nondegeneracy_check(const NewtonData& nd, const std::vector<FqElement>& a, int s_max,
                                         unsigned workers) {
  const ExponentConfig& cfg = nd.config;
  if (a.size() != static_cast<std::size_t>(cfg.N())) {
    throw Error(ErrorKind::InvalidArgument, "coefficient count does not match the number of columns");
  }
  const Field base = a.front().field();
  const auto faces = faces_without_origin(nd);
  const int n = cfg.n();
  for (int s = 1; s <= s_max; ++s) {
    const Field ext = s == 1 ? base : field_create(base->p(), base->degree() * s);
    std::vector<FqElement> a_ext;
    if (s == 1) {
      a_ext = a;
    } else {
      const FieldEmbedding emb(base, ext);
      for (const auto& x : a) a_ext.push_back(emb.apply(x));
    }
    const auto units = enumerate_units(ext);
    double total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<double>(units.size());
    if (total > 2e7) throw Error(ErrorKind::BudgetExceeded, "torus too large for the nondegeneracy search");

    std::vector<std::optional<std::vector<FqElement>>> found(faces.size());
    detail::parallel_for(faces.size(), workers, [&](std::size_t fi) {
      const auto& face = faces[fi];
      std::vector<std::vector<FqElement>> coef(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        for (int j : face)
          coef[static_cast<std::size_t>(i)].push_back(FqElement::from_integer(ext, cfg.rows()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * a_ext[static_cast<std::size_t>(j)]);
      IntVec lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), static_cast<std::int64_t>(units.size()) - 1);
      bool done = false;
      for_each_in_box(lo, hi, [&](const IntVec& idx) {
        if (done) return;
        std::vector<FqElement> t;
        for (auto k : idx) t.push_back(units[static_cast<std::size_t>(k)]);
        std::vector<FqElement> mono;
        for (int j : face) {
          FqElement m = FqElement::from_integer(ext, 1);
          for (int i = 0; i < n; ++i)
            m *= t[static_cast<std::size_t>(i)].pow_signed(cfg.rows()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
          mono.push_back(m);
        }
        for (int i = 0; i < n; ++i) {
          FqElement d(ext);
          for (std::size_t k = 0; k < face.size(); ++k) d += coef[static_cast<std::size_t>(i)][k] * mono[k];
          if (!d.is_zero()) return;
        }
        found[fi] = t;
        done = true;
      });
    });
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      if (found[fi]) return DegenerateWitness{faces[fi], s, *found[fi]};
    }
  }
  return NondegenerateUpTo{s_max};
}

}  // namespace dwork
