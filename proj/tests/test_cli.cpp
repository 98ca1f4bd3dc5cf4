#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "dwork/job.hpp"

using namespace dwork;
using nlohmann::json;

namespace {

ErrorKind parse_kind(const std::string& text) {
  try {
    job_problem(parse_job(text));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error for " << text);
  return ErrorKind::InvalidArgument;
}

const char* kLine = R"({"p": 3, "A": [[1]], "gamma_k": [0], "a": [[1]], "precision": {"M": 6, "m_max": 2}})";
const char* kKloosterman = R"({"p": 5, "A": [[1, -1]], "a": [1, 1], "precision": {"M": 6}})";

// Every object carrying p-adic digits must also carry a precision.
void expect_precision_everywhere(const json& j) {
  if (j.is_object()) {
    if (j.contains("terms")) CHECK(j.contains("precision"));
    for (const auto& [k, v] : j.items()) expect_precision_everywhere(v);
  } else if (j.is_array()) {
    for (const auto& v : j) expect_precision_everywhere(v);
  }
}

}  // namespace

TEST_CASE("job parsing") {
  const auto job = parse_job(kKloosterman);
  CHECK(job.p == 5);
  CHECK(job.f == 1);
  CHECK(job.gamma_k == IntVec{0});
  CHECK(job.a == std::vector<IntVec>{{1}, {1}});
  CHECK(job.precision.M == 6);
  CHECK(!job.precision.D);
  const auto d = parse_job(R"({"p": 3, "A": [[1]], "a": [1], "precision": {"D": [7, 2]}})");
  CHECK(*d.precision.D == Rational(7, 2));
}

TEST_CASE("job errors") {
  CHECK(parse_kind(R"({"p": 3, "A": [[1, 2], [1]], "a": [1, 1]})") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1.5]], "a": [1]})") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"A": [[1]], "a": [1]})") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1]]})") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1]], "a": [1]")") == ErrorKind::ParseError);
  CHECK(parse_kind(R"([1, 2])") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1]], "a": [1], "precision": {"D": [1, 0]}})") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"p": 4, "A": [[1]], "a": [1]})") == ErrorKind::ValidationError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1, 2]], "a": [1]})") == ErrorKind::ValidationError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1, 2], [2, 4]], "a": [1, 1]})") == ErrorKind::ValidationError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1]], "a": [1], "precision": {"M": 0}})") == ErrorKind::ValidationError);
  CHECK(parse_kind(R"({"p": 3, "A": [[1]], "a": [[1, 1]]})") == ErrorKind::ValidationError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::ParseError) == 2);
  CHECK(exit_code_for(ErrorKind::ValidationError) == 2);
  CHECK(exit_code_for(ErrorKind::NotPrime) == 2);
  CHECK(exit_code_for(ErrorKind::LevelTooLarge) == 4);
  CHECK(exit_code_for(ErrorKind::BudgetExceeded) == 4);
  CHECK(exit_code_for(ErrorKind::NoRoot) == 1);
}

TEST_CASE("commands round-trip their names") {
  for (auto c : {Command::Polytope, Command::Gkz, Command::Sums, Command::Hyp, Command::Trace, Command::Charpoly,
                 Command::LFunction, Command::Check, Command::Nondegeneracy}) {
    CHECK(command_from_string(to_string(c)) == c);
  }
  CHECK(!command_from_string("frobenius"));
}

TEST_CASE("check on the line") {
  const auto rep = run(Command::Check, parse_job(kLine));
  CHECK(rep.exit_code == 0);
  CHECK(rep.json.back() == '\n');
  const auto j = json::parse(rep.json);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "check");
  const auto& r = j["result"];
  CHECK(r["all_pass"] == true);
  CHECK(r["degree_law"]["status"] == "pass");
  CHECK(r["degree_law"]["expected_degree"] == 1);
  // S_1 = -1, stored as 3^6 - 1
  CHECK(r["sums"][0]["S"]["terms"][0]["residue"] == 728);
  for (const auto& id : r["identities"]) CHECK(id["pass"] == true);
}

TEST_CASE("polytope report for Kloosterman") {
  const auto j = json::parse(run(Command::Polytope, parse_job(kKloosterman)).json);
  const auto& r = j["result"];
  CHECK(r["volume"] == json::array({2, 1}));
  CHECK(r["denom"] == 1);
  CHECK(r["facets"].size() == 2);
  CHECK(r["facets"][0]["ell"] == json::parse("[[1, 1]]"));
  CHECK(r["facets"][1]["ell"] == json::parse("[[-1, 1]]"));
}

TEST_CASE("reports are identical across worker counts and carry precisions") {
  const auto job = parse_job(kKloosterman);
  for (auto c : {Command::Polytope, Command::Gkz, Command::Sums, Command::Hyp, Command::Trace, Command::Charpoly,
                 Command::LFunction, Command::Check, Command::Nondegeneracy}) {
    CAPTURE(to_string(c));
    const auto one = run(c, job, 1);
    const auto many = run(c, job, 6);
    CHECK(one.json == many.json);
    CHECK(one.exit_code == many.exit_code);
    expect_precision_everywhere(json::parse(one.json));
  }
}

TEST_CASE("budget errors propagate") {
  const auto job = parse_job(R"({"p": 10007, "A": [[1, 0], [0, 1]], "a": [1, 1], "precision": {"M": 2, "m_max": 2}})");
  try {
    run(Command::Sums, job);
    FAIL("budget ignored");
  } catch (const Error& e) {
    CHECK(exit_code_for(e.kind()) == 4);
  }
}
