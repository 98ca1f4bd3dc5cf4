#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "dwork/gkz_system.hpp"
#include "dwork/job.hpp"
#include "dwork/lfunction.hpp"

namespace dwork {

namespace {

using json = nlohmann::ordered_json;

json rat(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

json rat_vec(const RatVec& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rat(r));
  return out;
}

json fq(const FqElement& x) {
  json out = json::array();
  for (auto c : x.coeffs()) out.push_back(c);
  return out;
}

// Digits known to `precision` as (pi_power, b_power, residue) triples.
json element(const RamifiedElement& x, const Rational& precision) {
  const Rational prec = std::min(precision, Rational(x.ring()->precision()));
  const RamifiedElement t = truncate_to(x, prec);
  json terms = json::array();
  const auto S = static_cast<std::size_t>(x.ring()->degree());
  for (std::size_t i = 0; i < x.ring()->pi_slots(); ++i) {
    for (std::size_t j = 0; j < S; ++j) {
      const auto c = t.coeff(i, j);
      if (c != 0) terms.push_back(json{{"pi_power", i}, {"b_power", j}, {"residue", c}});
    }
  }
  return json{{"precision", rat(prec)}, {"terms", terms}};
}

std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::uint64_t upow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// (q^m - 1)^n as a ring element.
RamifiedElement torus_size(const DworkProblem& pr, int m) {
  const auto qm1 = static_cast<std::int64_t>(upow(pr.q, m) - 1);
  return RamifiedElement::from_integer(pr.ring, qm1).pow(static_cast<std::uint64_t>(pr.config.n()));
}

int default_m_max(const JobConfig& job, std::int64_t degree) {
  if (job.precision.m_max > 0) return job.precision.m_max;
  return static_cast<int>(std::max<std::int64_t>(2, degree + 3));
}

class Runner {
 public:
  Runner(const JobConfig& job, unsigned workers, std::ostream* log)
      : job_(job), pr_(job_problem(job)), workers_(workers), log_(log) {
    degree_ = normalized_volume(pr_.nd);
    m_max_ = default_m_max(job_, degree_);
  }

  json job_echo() const {
    json prec{{"M", job_.precision.M},
              {"D", job_.precision.D ? rat(*job_.precision.D) : json(nullptr)},
              {"m_max", m_max_},
              {"s_max", job_.precision.s_max},
              {"K_max", job_.precision.K_max}};
    json a = json::array();
    for (const auto& x : pr_.a_bar) a.push_back(fq(x));
    return json{{"p", pr_.p}, {"f", pr_.f}, {"q", pr_.q}, {"A", job_.A}, {"gamma_k", job_.gamma_k},
                {"gamma", rat_vec(twist_gamma(pr_.twist, pr_.q))}, {"a", a}, {"precision", prec}};
  }

  json polytope() const {
    json facets = json::array();
    for (const auto& f : pr_.nd.facets) facets.push_back(json{{"ell", rat_vec(f.ell)}, {"columns", f.columns}});
    json cone = json::array();
    for (const auto& f : pr_.nd.cone_facets) cone.push_back(json{{"normal", f.normal}, {"columns", f.columns}});
    json simplices = json::array();
    for (const auto& s : simplicial_decomposition(pr_.nd)) {
      simplices.push_back(json{{"columns", s.columns}, {"det", s.det}, {"fundamental_points", s.fundamental_points}});
    }
    const int n = pr_.config.n();
    return json{{"n", n},
                {"N", pr_.config.N()},
                {"denom", pr_.nd.denom},
                {"normalized_volume", degree_},
                {"volume", rat(Rational(degree_, factorial(n)))},
                {"facets", facets},
                {"cone_facets", cone},
                {"faces_without_origin", faces_without_origin(pr_.nd)},
                {"simplices", simplices}};
  }

  json gkz() const {
    const auto sys = emit_system(pr_.config, pr_.twist.k, pr_.q, true);
    json euler = json::array();
    for (const auto& e : sys.euler) euler.push_back(json{{"row", e.row}, {"gamma", rat(e.gamma)}, {"text", e.text()}});
    json box = json::array();
    for (const auto& b : sys.box) box.push_back(json{{"lambda", b.lambda}, {"text", b.text()}});
    return json{{"euler", euler},
                {"box", box},
                {"lattice_basis", sys.basis.vectors},
                {"saturation_extras", sys.saturation_extras},
                {"text", sys.text}};
  }

  RamifiedElement oracle(int m) {
    auto it = sums_.find(m);
    if (it != sums_.end()) return it->second;
    note("character sum S_" + std::to_string(m));
    return sums_.emplace(m, sums_oracle_characters(pr_, m, 5e7, workers_)).first->second;
  }

  json sums() {
    json out = json::array();
    for (int m = 1; m <= m_max_; ++m) {
      json entry{{"m", m}, {"S", element(oracle(m), Rational(pr_.M))}};
      if (m <= 2) {
        try {
          entry["series_oracle"] = element(sums_oracle_series(pr_, m), Rational(pr_.M));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::LevelTooLarge) throw;
          entry["series_oracle"] = nullptr;
        }
      }
      out.push_back(entry);
    }
    return json{{"sums", out}};
  }

  json hyp() const {
    json table = json::array();
    for (const auto& [x, v] : hyp_table(pr_)) {
      json xs = json::array();
      for (const auto& e : x) xs.push_back(fq(e));
      table.push_back(json{{"x", xs}, {"value", element(v, Rational(pr_.M))}});
    }
    return json{{"table", table}};
  }

  const DworkMatrix& matrix() {
    if (!dm_) {
      const Rational D = job_.precision.D.value_or(auto_basis_cap(pr_));
      note("Dwork matrix at cap " + to_string(D));
      const auto h = h_series(pr_.a, pr_.twist, 1, pr_.nd, pr_.q, std::nullopt, workers_);
      dm_ = matrix_build(h, pr_.nd, D, workers_);
    }
    return *dm_;
  }

  json matrix_info() {
    const auto& dm = matrix();
    return json{{"D", rat(dm.cap)},
                {"D_auto", !job_.precision.D.has_value()},
                {"D_formula", "ceil(M p q / ((p-1)(q-1))) + d(-k) + 2"},
                {"basis_size", dm.basis.size()},
                {"next_weight", rat(dm.next_weight)},
                {"tail_bound", rat(dm.tail_bound)},
                {"precision", rat(dm.precision)}};
  }

  Certified trace(int m) {
    auto it = traces_.find(m);
    if (it != traces_.end()) return it->second;
    note("trace of G^" + std::to_string(m));
    return traces_.emplace(m, trace_matrix_power(matrix(), m, workers_)).first->second;
  }

  json traces() {
    json out = json::array();
    for (int m = 1; m <= m_max_; ++m) {
      const Certified t = trace(m);
      out.push_back(json{{"m", m}, {"trace", element(t.value, t.precision)},
                         {"S", element(torus_size(pr_, m) * t.value, t.precision)}});
    }
    return json{{"matrix", matrix_info()}, {"traces", out}};
  }

  std::vector<Certified> charpoly_coeffs() {
    if (!charpoly_) {
      const std::size_t dim = matrix().basis.size();
      const auto want = static_cast<std::size_t>(std::max<std::int64_t>(m_max_, degree_ + 3));
      note("characteristic series");
      charpoly_ = char_series(matrix(), std::min(dim, want), workers_);
    }
    return *charpoly_;
  }

  json charpoly() {
    json coeffs = json::array();
    for (const auto& c : charpoly_coeffs()) coeffs.push_back(element(c.value, c.precision));
    return json{{"matrix", matrix_info()}, {"coefficients", coeffs}};
  }

  PowerSeriesT l_from_sums(int order) {
    std::vector<Certified> S;
    for (int m = 1; m <= order; ++m) S.push_back({oracle(m), Rational(pr_.M)});
    return l_series_from_sums(S);
  }

  static json series_json(const PowerSeriesT& L) {
    json out = json::array();
    for (std::size_t i = 0; i <= L.order(); ++i) out.push_back(element(L.coeffs[i], L.precision[i]));
    return out;
  }

  json recognition(const PowerSeriesT& L, int compare) const {
    if (L.order() < static_cast<std::size_t>(degree_) + 3) return json{{"status", "insufficient_terms"}};
    const auto r = rational_recognition(L, static_cast<std::size_t>(degree_), pr_.config.n(), Rational(compare));
    if (const auto* np = std::get_if<NotPolynomial>(&r)) {
      return json{{"status", "not_polynomial"}, {"first_nonzero_index", np->index}};
    }
    const auto& poly = std::get<LPolynomial>(r);
    json coeffs = json::array();
    for (std::size_t i = 0; i < poly.coeffs.size(); ++i) coeffs.push_back(element(poly.coeffs[i], poly.precision[i]));
    const auto np = newton_polygon(poly);
    json vertices = json::array();
    for (const auto& [i, v] : np.vertices) vertices.push_back(json{{"i", i}, {"ord", rat(v)}});
    json slopes = json::array();
    for (const auto& [s, mult] : np.slopes) slopes.push_back(json{{"slope", rat(s)}, {"multiplicity", mult}});
    return json{{"status", "polynomial"},
                {"degree", degree_},
                {"exponent", poly.exponent},
                {"coefficients", coeffs},
                {"newton_polygon", json{{"vertices", vertices}, {"slopes", slopes}, {"below_precision", np.below_precision}}}};
  }

  json lfunction() {
    const PowerSeriesT L = l_from_sums(m_max_);
    const int compare = comparison_precision(pr_.M, pr_.p, m_max_);
    return json{{"comparison_precision", compare},
                {"expected_degree", degree_},
                {"series", series_json(L)},
                {"recognition", recognition(L, compare)}};
  }

  json nondegeneracy() const {
    const auto v = nondegeneracy_check(pr_.nd, pr_.a_bar, job_.precision.s_max, workers_);
    if (const auto* ok = std::get_if<NondegenerateUpTo>(&v)) {
      return json{{"status", "nondegenerate"}, {"s_max", ok->s_max}};
    }
    const auto& w = std::get<DegenerateWitness>(v);
    json pt = json::array();
    for (const auto& x : w.point) pt.push_back(fq(x));
    return json{{"status", "degenerate"}, {"face", w.face}, {"level", w.level}, {"point", pt}};
  }

  json check(bool& all_pass) {
    all_pass = true;
    const int compare = comparison_precision(pr_.M, pr_.p, m_max_);
    json identities = json::array();
    auto record = [&](const std::string& name, int m, const Rational& bound, bool pass) {
      all_pass = all_pass && pass;
      identities.push_back(json{{"identity", name}, {"m", m}, {"precision", rat(bound)}, {"pass", pass}});
    };

    for (int m = 1; m <= std::min(2, m_max_); ++m) {
      const RamifiedElement s = sums_oracle_series(pr_, m);
      const Rational bound(compare);
      record("oracle_equivalence", m, bound, vanishes_to(oracle(m) - s, bound));
    }
    for (int m = 1; m <= m_max_; ++m) {
      const Certified t = trace(m);
      const Rational bound = std::min(Rational(compare), t.precision);
      record("trace_formula", m, bound, vanishes_to(torus_size(pr_, m) * t.value - oracle(m), bound));
    }
    {
      const PowerSeriesT from_sums = l_from_sums(m_max_);
      const PowerSeriesT from_char =
          l_from_charseries(charpoly_coeffs(), pr_.config.n(), pr_.q, static_cast<std::size_t>(m_max_));
      for (int i = 0; i <= m_max_; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const Rational bound = std::min({Rational(compare), from_sums.precision[k], from_char.precision[k]});
        record("l_identity", i, bound, vanishes_to(from_sums.coeffs[k] - from_char.coeffs[k], bound));
      }
    }

    json degree_law;
    const json nd = nondegeneracy();
    if (nd["status"] != "nondegenerate") {
      degree_law = json{{"status", "skipped"}, {"reason", "coefficients are degenerate"}};
    } else {
      const int order = std::max<int>(m_max_, static_cast<int>(degree_) + 3);
      const int cmp = comparison_precision(pr_.M, pr_.p, order);
      const json rec = recognition(l_from_sums(order), cmp);
      const bool pass = rec["status"] == "polynomial";
      all_pass = all_pass && pass;
      degree_law = json{{"status", pass ? "pass" : "fail"}, {"expected_degree", degree_}, {"precision", cmp},
                        {"recognition", rec}};
    }

    json sums = json::array();
    for (int m = 1; m <= m_max_; ++m) sums.push_back(json{{"m", m}, {"S", element(oracle(m), Rational(pr_.M))}});
    return json{{"comparison_precision", compare},
                {"matrix", matrix_info()},
                {"identities", identities},
                {"degree_law", degree_law},
                {"nondegeneracy", nd},
                {"sums", sums},
                {"all_pass", all_pass}};
  }

 private:
  void note(const std::string& what) const {
    if (log_) *log_ << "[dworkgkz] " << what << '\n';
  }

  const JobConfig& job_;
  DworkProblem pr_;
  unsigned workers_;
  std::ostream* log_;
  std::int64_t degree_ = 0;
  int m_max_ = 2;
  std::map<int, RamifiedElement> sums_;
  std::map<int, Certified> traces_;
  std::optional<DworkMatrix> dm_;
  std::optional<std::vector<Certified>> charpoly_;
};

}  // namespace

Report run(Command command, const JobConfig& job, unsigned workers, std::ostream* log) {
  Runner r(job, workers, log);
  json out{{"schema", 1}, {"command", to_string(command)}, {"job", r.job_echo()}};
  Report report;
  switch (command) {
    case Command::Polytope: out["result"] = r.polytope(); break;
    case Command::Gkz: out["result"] = r.gkz(); break;
    case Command::Sums: out["result"] = r.sums(); break;
    case Command::Hyp: out["result"] = r.hyp(); break;
    case Command::Trace: out["result"] = r.traces(); break;
    case Command::Charpoly: out["result"] = r.charpoly(); break;
    case Command::LFunction: out["result"] = r.lfunction(); break;
    case Command::Nondegeneracy: out["result"] = r.nondegeneracy(); break;
    case Command::Check: {
      bool pass = true;
      out["result"] = r.check(pass);
      report.exit_code = pass ? 0 : 3;
      break;
    }
  }
  report.json = out.dump(2) + "\n";
  return report;
}

}  // namespace dwork
