#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dwork/dwork_operator.hpp"
#include "dwork/error.hpp"
#include "dwork/rational.hpp"

namespace dwork {

struct PrecisionConfig {
  int M = 8;
  std::optional<Rational> D;  // basis cap; auto_basis_cap when absent
  int m_max = 0;              // 0: max(2, n! vol + 3)
  int s_max = 2;
  int K_max = 50;
};

// One computation request. Each entry of `a` is an element of F_q given by its
// f coordinates in the basis 1, b, ..., b^{f-1}.
struct JobConfig {
  std::uint64_t p = 0;
  int f = 1;
  std::vector<IntVec> A;
  IntVec gamma_k;
  std::vector<IntVec> a;
  PrecisionConfig precision;
};

// ParseError for malformed JSON, missing fields, non-integer entries or
// ragged rows.
JobConfig parse_job(const std::string& text);

// ValidationError naming the failing invariant (rank, primality, twist, sizes).
DworkProblem job_problem(const JobConfig& job);

enum class Command { Polytope, Gkz, Sums, Hyp, Trace, Charpoly, LFunction, Check, Nondegeneracy };

std::optional<Command> command_from_string(const std::string& name);
const char* to_string(Command command) noexcept;

struct Report {
  std::string json;  // schema 1, keys in a fixed order, trailing newline
  int exit_code = 0;
};

// Runs one command. Progress lines go to `log` when it is non-null. Library
// errors propagate; exit_code_for maps them.
Report run(Command command, const JobConfig& job, unsigned workers = 1, std::ostream* log = nullptr);

// 2 parse/validation, 4 budget, 1 anything else.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace dwork
