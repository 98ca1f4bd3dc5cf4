#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dwork/job.hpp"

namespace {

int fail(const std::string& message, int code) {
  std::cerr << "dworkgkz: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dwork cohomology of GKZ exponential sums"};
  std::string command;
  std::string job_path;
  std::string out_path;
  unsigned workers = 1;
  bool verbose = false;
  app.add_option("command", command, "polytope | gkz | sums | hyp | trace | charpoly | lfunction | check | nondegeneracy")
      ->required();
  app.add_option("--job", job_path, "job file (JSON)")->required();
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_flag("--verbose", verbose, "progress on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto cmd = dwork::command_from_string(command);
  if (!cmd) return fail("unknown command '" + command + "'", 2);

  std::ifstream in(job_path);
  if (!in) return fail("cannot read " + job_path, 2);
  std::stringstream text;
  text << in.rdbuf();

  try {
    const auto job = dwork::parse_job(text.str());
    const auto report = dwork::run(*cmd, job, workers, verbose ? &std::cerr : nullptr);
    if (out_path.empty()) {
      std::cout << report.json;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) return fail("cannot write " + out_path, 2);
      out << report.json;
    }
    return report.exit_code;
  } catch (const dwork::Error& e) {
    return fail(e.what(), dwork::exit_code_for(e.kind()));
  }
}
