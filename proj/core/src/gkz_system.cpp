#include "dwork/gkz_system.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "intmat.hpp"

namespace dwork {

namespace {

std::string derivative_product(const IntVec& e) {
  std::ostringstream os;
  bool any = false;
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (e[j] == 0) continue;
    os << "(1/pi d_" << j + 1 << ")";
    if (e[j] > 1) os << "^" << e[j];
    any = true;
  }
  if (!any) os << "1";
  return os.str();
}

// Binomial x^lead - x^trail over N (+1 elimination) variables.
struct Binomial {
  IntVec lead;
  IntVec trail;
};

class BinomialIdeal {
 public:
  BinomialIdeal(std::size_t vars, bool eliminate_last, std::size_t& budget)
      : vars_(vars), eliminate_(eliminate_last), budget_(budget) {}

  // true when a is greater than b: elimination block on the last variable,
  // then graded reverse lexicographic on the rest.
  bool greater(const IntVec& a, const IntVec& b) const {
    std::size_t end = vars_;
    if (eliminate_) {
      if (a[vars_ - 1] != b[vars_ - 1]) return a[vars_ - 1] > b[vars_ - 1];
      end = vars_ - 1;
    }
    std::int64_t da = 0, db = 0;
    for (std::size_t i = 0; i < end; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db;
    for (std::size_t i = end; i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }

  static bool divides(const IntVec& a, const IntVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] > b[i]) return false;
    return true;
  }

  IntVec normal_form(IntVec m) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& g : gens_) {
        if (!divides(g.lead, m)) continue;
        spend();
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += g.trail[i] - g.lead[i];
        changed = true;
        break;
      }
    }
    return m;
  }

  bool add(IntVec a, IntVec b) {
    a = normal_form(std::move(a));
    b = normal_form(std::move(b));
    if (a == b) return false;
    if (greater(b, a)) std::swap(a, b);
    gens_.push_back({std::move(a), std::move(b)});
    return true;
  }

  void complete() {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 1; j < gens_.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
    std::size_t next = 0;
    while (next < pairs.size()) {
      const auto [i, j] = pairs[next++];
      const Binomial f = gens_[i], g = gens_[j];
      IntVec l(vars_);
      bool coprime = true;
      for (std::size_t k = 0; k < vars_; ++k) {
        l[k] = std::max(f.lead[k], g.lead[k]);
        if (f.lead[k] > 0 && g.lead[k] > 0) coprime = false;
      }
      if (coprime) continue;
      IntVec s1(vars_), s2(vars_);
      for (std::size_t k = 0; k < vars_; ++k) {
        s1[k] = l[k] - f.lead[k] + f.trail[k];
        s2[k] = l[k] - g.lead[k] + g.trail[k];
      }
      spend();
      if (add(std::move(s1), std::move(s2))) {
        const std::size_t fresh = gens_.size() - 1;
        for (std::size_t k = 0; k < fresh; ++k) pairs.emplace_back(k, fresh);
      }
    }
    reduce();
  }

  const std::vector<Binomial>& generators() const { return gens_; }

 private:
  void spend() const {
    if (budget_ == 0) throw Error(ErrorKind::Timeout, "toric saturation exceeded its step budget");
    --budget_;
  }

  void reduce() {
    std::vector<Binomial> kept;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < gens_.size() && !redundant; ++j) {
        if (i == j || !divides(gens_[j].lead, gens_[i].lead)) continue;
        redundant = gens_[j].lead != gens_[i].lead || j < i;
      }
      if (!redundant) kept.push_back(gens_[i]);
    }
    gens_ = std::move(kept);
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      Binomial self = gens_[i];
      gens_.erase(gens_.begin() + static_cast<std::ptrdiff_t>(i));
      self.trail = normal_form(self.trail);
      gens_.insert(gens_.begin() + static_cast<std::ptrdiff_t>(i), std::move(self));
    }
    std::sort(gens_.begin(), gens_.end(), [&](const Binomial& a, const Binomial& b) {
      if (a.lead != b.lead) return greater(b.lead, a.lead);
      return greater(b.trail, a.trail);
    });
  }

  std::size_t vars_;
  bool eliminate_;
  std::size_t& budget_;
  std::vector<Binomial> gens_;
};

IntVec normalize_sign(IntVec v) {
  for (auto x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

}  // namespace

LatticeBasis lattice_kernel(const ExponentConfig& config) { return {detail::integer_kernel(config.rows())}; }

bool BoxOperator::is_zero() const {
  return std::all_of(lambda.begin(), lambda.end(), [](std::int64_t x) { return x == 0; });
}

std::string BoxOperator::text() const {
  if (is_zero()) return "0";
  return derivative_product(plus) + " - " + derivative_product(minus);
}

BoxOperator box_operator(const ExponentConfig& config, const IntVec& lambda) {
  if (lambda.size() != static_cast<std::size_t>(config.N())) {
    throw Error(ErrorKind::InvalidArgument, "relation has the wrong length");
  }
  const IntVec image = config.apply(lambda);
  if (std::any_of(image.begin(), image.end(), [](std::int64_t x) { return x != 0; })) {
    throw Error(ErrorKind::NotARelation, "A lambda is not zero");
  }
  BoxOperator box{lambda, IntVec(lambda.size(), 0), IntVec(lambda.size(), 0)};
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] > 0) box.plus[j] = lambda[j];
    if (lambda[j] < 0) box.minus[j] = -lambda[j];
  }
  return box;
}

IntVec phi_image(const ExponentConfig& config, const IntVec& v) {
  if (v.size() != static_cast<std::size_t>(config.N())) throw Error(ErrorKind::InvalidArgument, "exponent has the wrong length");
  return config.apply(v);
}

LaurentPoly phi_box(const ExponentConfig& config, const BoxOperator& box) {
  LaurentPoly out;
  if (box.is_zero()) return out;
  out[phi_image(config, box.plus)] += 1;
  out[phi_image(config, box.minus)] -= 1;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::string EulerOperator::text() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const std::int64_t c = row[j];
    if (c == 0) continue;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (std::abs(c) != 1) os << std::abs(c) << " ";
    os << "x_" << j + 1 << " d_" << j + 1;
    first = false;
  }
  if (gamma != Rational(0)) {
    os << (gamma < Rational(0) ? " - " : " + ") << to_string(abs(gamma));
  }
  return os.str();
}

EulerImage euler_image(const ExponentConfig& config, const EulerOperator& euler) {
  EulerImage img{euler.gamma, {}};
  for (int j = 0; j < config.N(); ++j) {
    const std::int64_t c = euler.row.at(static_cast<std::size_t>(j));
    if (c != 0) img.pi_terms.push_back({j, c, config.column(j)});
  }
  return img;
}

SystemPresentation emit_system(const ExponentConfig& config, const IntVec& k, std::uint64_t q, bool saturate) {
  if (k.size() != static_cast<std::size_t>(config.n())) throw Error(ErrorKind::InvalidArgument, "twist has the wrong length");
  SystemPresentation sys;
  sys.basis = lattice_kernel(config);
  const auto one_minus_q = 1 - static_cast<std::int64_t>(q);
  for (int i = 0; i < config.n(); ++i) {
    sys.euler.push_back({config.rows()[static_cast<std::size_t>(i)], Rational(k[static_cast<std::size_t>(i)], one_minus_q)});
  }
  for (const auto& lam : sys.basis.vectors) sys.box.push_back(box_operator(config, lam));
  if (saturate) {
    const auto gens = toric_saturation(config, sys.basis);
    for (std::size_t i = sys.basis.vectors.size(); i < gens.size(); ++i) {
      sys.saturation_extras.push_back(gens[i]);
      sys.box.push_back(box_operator(config, gens[i]));
    }
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < sys.euler.size(); ++i) os << "(" << sys.euler[i].text() << ") f = 0\n";
  for (const auto& b : sys.box) os << "(" << b.text() << ") f = 0\n";
  sys.text = os.str();
  return sys;
}

std::vector<IntVec> toric_saturation(const ExponentConfig& config, const LatticeBasis& basis, std::size_t step_budget) {
  const auto N = static_cast<std::size_t>(config.N());
  std::vector<IntVec> out;
  for (const auto& v : basis.vectors) {
    (void)box_operator(config, v);
    out.push_back(v);
  }
  if (basis.vectors.empty()) return out;

  std::size_t budget = step_budget;
  std::vector<std::pair<IntVec, IntVec>> current;
  for (const auto& v : basis.vectors) {
    IntVec plus(N, 0), minus(N, 0);
    for (std::size_t j = 0; j < N; ++j) (v[j] > 0 ? plus[j] : minus[j]) = std::abs(v[j]);
    current.emplace_back(plus, minus);
  }
  // (I : x_i^inf) via elimination of y in I + (y x_i - 1), one variable at a time.
  for (std::size_t var = 0; var < N; ++var) {
    BinomialIdeal ideal(N + 1, true, budget);
    for (const auto& [a, b] : current) {
      IntVec ea = a, eb = b;
      ea.push_back(0);
      eb.push_back(0);
      ideal.add(std::move(ea), std::move(eb));
    }
    IntVec yx(N + 1, 0);
    yx[var] = 1;
    yx[N] = 1;
    ideal.add(yx, IntVec(N + 1, 0));
    ideal.complete();
    current.clear();
    for (const auto& g : ideal.generators()) {
      if (g.lead[N] != 0 || g.trail[N] != 0) continue;
      current.emplace_back(IntVec(g.lead.begin(), g.lead.end() - 1), IntVec(g.trail.begin(), g.trail.end() - 1));
    }
  }
  std::set<IntVec> known;
  for (const auto& v : out) known.insert(normalize_sign(v));
  std::vector<IntVec> extras;
  for (const auto& [a, b] : current) {
    IntVec lam(N);
    for (std::size_t j = 0; j < N; ++j) lam[j] = a[j] - b[j];
    lam = normalize_sign(lam);
    if (known.insert(lam).second) extras.push_back(lam);
  }
  std::sort(extras.begin(), extras.end());
  out.insert(out.end(), extras.begin(), extras.end());
  return out;
}

}  // namespace dwork
