#include "dwork/job.hpp"

#include <json.hpp>

namespace dwork {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

std::int64_t get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where + " must be an integer");
  return v.get<std::int64_t>();
}

IntVec get_int_vec(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + " must be an array of integers");
  IntVec out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_int(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<IntVec> get_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) parse_fail(where + " must be a non-empty array of rows");
  std::vector<IntVec> rows;
  for (std::size_t i = 0; i < v.size(); ++i) rows.push_back(get_int_vec(v[i], where + "[" + std::to_string(i) + "]"));
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) parse_fail(where + " has ragged rows");
  }
  if (rows.front().empty()) parse_fail(where + " has empty rows");
  return rows;
}

Rational get_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_array() && v.size() == 2) {
    const auto num = get_int(v[0], where + "[0]");
    const auto den = get_int(v[1], where + "[1]");
    if (den <= 0) parse_fail(where + " needs a positive denominator");
    return Rational(num, den);
  }
  parse_fail(where + " must be an integer or a [num, den] pair");
}

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

JobConfig parse_job(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(e.what());
  }
  if (!j.is_object()) parse_fail("job must be a JSON object");
  JobConfig job;
  const auto p = get_int(require(j, "p"), "p");
  if (p < 2) parse_fail("p must be at least 2");
  job.p = static_cast<std::uint64_t>(p);
  if (j.contains("f")) job.f = static_cast<int>(get_int(j["f"], "f"));
  if (job.f < 1 || job.f > 16) parse_fail("f must be in [1, 16]");
  job.A = get_matrix(require(j, "A"), "A");
  job.gamma_k = j.contains("gamma_k") ? get_int_vec(j["gamma_k"], "gamma_k") : IntVec(job.A.size(), 0);
  const json& a = require(j, "a");
  if (!a.is_array()) parse_fail("a must be an array of coefficient vectors");
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string where = "a[" + std::to_string(i) + "]";
    // A bare integer is an element of the prime field.
    job.a.push_back(a[i].is_number_integer() ? IntVec{get_int(a[i], where)} : get_int_vec(a[i], where));
  }
  if (j.contains("precision")) {
    const json& pc = j["precision"];
    if (!pc.is_object()) parse_fail("precision must be an object");
    if (pc.contains("M")) job.precision.M = static_cast<int>(get_int(pc["M"], "precision.M"));
    if (pc.contains("D") && !pc["D"].is_null()) job.precision.D = get_rational(pc["D"], "precision.D");
    if (pc.contains("m_max")) job.precision.m_max = static_cast<int>(get_int(pc["m_max"], "precision.m_max"));
    if (pc.contains("s_max")) job.precision.s_max = static_cast<int>(get_int(pc["s_max"], "precision.s_max"));
    if (pc.contains("K_max")) job.precision.K_max = static_cast<int>(get_int(pc["K_max"], "precision.K_max"));
  }
  return job;
}

DworkProblem job_problem(const JobConfig& job) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ValidationError, what); };
  if (job.precision.M < 1) fail("precision.M must be positive");
  if (job.precision.m_max < 0) fail("precision.m_max must be non-negative");
  if (job.precision.s_max < 1) fail("precision.s_max must be positive");
  if (job.precision.K_max < 1) fail("precision.K_max must be positive");
  if (job.precision.D && *job.precision.D < Rational(0)) fail("precision.D must be non-negative");
  if (job.A.empty() || job.a.size() != job.A.front().size()) fail("a must have one entry per column of A");
  try {
    const Field field = field_create(job.p, job.f);
    std::vector<FqElement> a_bar;
    for (std::size_t j = 0; j < job.a.size(); ++j) {
      if (job.a[j].size() > static_cast<std::size_t>(job.f)) fail("a[" + std::to_string(j) + "] has more than f coordinates");
      std::vector<std::uint32_t> c(static_cast<std::size_t>(job.f), 0);
      for (std::size_t i = 0; i < job.a[j].size(); ++i) {
        const auto m = static_cast<std::int64_t>(job.p);
        c[i] = static_cast<std::uint32_t>(((job.a[j][i] % m) + m) % m);
      }
      a_bar.emplace_back(field, std::move(c));
    }
    return make_problem(job.A, job.p, job.f, job.gamma_k, std::move(a_bar), job.precision.M);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ValidationError) throw;
    throw Error(ErrorKind::ValidationError, e.what());
  }
}

std::optional<Command> command_from_string(const std::string& name) {
  for (auto c : {Command::Polytope, Command::Gkz, Command::Sums, Command::Hyp, Command::Trace, Command::Charpoly,
                 Command::LFunction, Command::Check, Command::Nondegeneracy}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(Command command) noexcept {
  switch (command) {
    case Command::Polytope: return "polytope";
    case Command::Gkz: return "gkz";
    case Command::Sums: return "sums";
    case Command::Hyp: return "hyp";
    case Command::Trace: return "trace";
    case Command::Charpoly: return "charpoly";
    case Command::LFunction: return "lfunction";
    case Command::Check: return "check";
    case Command::Nondegeneracy: return "nondegeneracy";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::NotPrime:
    case ErrorKind::UnsupportedPrime:
    case ErrorKind::RankDeficient:
    case ErrorKind::TwistOutsideCone:
    case ErrorKind::InvalidArgument:
    case ErrorKind::ParamsMismatch:
      return 2;
    case ErrorKind::BudgetExceeded:
    case ErrorKind::LevelTooLarge:
    case ErrorKind::PrecisionBudgetExceeded:
    case ErrorKind::Timeout:
      return 4;
    default:
      return 1;
  }
}

}  // namespace dwork
