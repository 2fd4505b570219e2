// End-to-end checks of the command line surface, run against the real
// binary. DRGSPIN_CLI is injected by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "drgspin/graph.hpp"

using nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(DRGSPIN_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    output.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("analyze --cycle 7").exit_code == 0);
  CHECK(run("analyze --hypercube 4").exit_code == 1);
  CHECK(run("analyze --cycle 7 --tolerance 1e-20").exit_code == 1);
  CHECK(run("analyze --cycle 7 --hypercube 3").exit_code == 2);
  CHECK(run("analyze").exit_code == 2);
  CHECK(run("scan --diameter 2").exit_code == 2);
  CHECK(run("identities --diameter 4 --samples 0").exit_code == 2);
  CHECK(run("identities --diameter 2 --samples 5").exit_code == 2);
  CHECK(run("bogus-subcommand").exit_code != 0);
}

TEST_CASE("json reports parse, round-trip and are deterministic") {
  RunResult r1 = run("analyze --cycle 7 --format json --seed 11");
  RunResult r2 = run("analyze --cycle 7 --format json --seed 11");
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r2.output);  // byte-identical

  ordered_json parsed = ordered_json::parse(r1.output);
  CHECK(parsed["overall"] == "pass");
  CHECK(parsed["graph"]["n"] == 7);
  CHECK(parsed["invocation"]["seed"] == 11);
  // parse(emit(report)) round-trips exactly
  CHECK(parsed.dump(2) + "\n" == r1.output);
}

TEST_CASE("hypercube report carries the diagnostic but keeps early stages") {
  RunResult r = run("analyze --hypercube 4 --format json");
  CHECK(r.exit_code == 1);
  ordered_json parsed = ordered_json::parse(r.output);
  CHECK(parsed["qracah"]["error"]["code"] == "NotQRacah");
  const std::string msg = parsed["qracah"]["error"]["message"];
  CHECK(msg.find("beta = 2") != std::string::npos);
  CHECK(msg.find("q^2 = 1") != std::string::npos);
  CHECK(parsed.contains("graph"));
  CHECK(parsed["spectral"]["orderings"].size() > 0);
  for (auto& [name, value] : parsed["residuals"].items())
    if (value.is_number()) CHECK(value.get<double>() < 1e-8);
}

TEST_CASE("analyze --file matches the generator and rejects bad input") {
  drgspin::save_graph(drgspin::cycle_graph(7), "cli_c7.tmp");
  RunResult r = run("analyze --file cli_c7.tmp --format json");
  CHECK(r.exit_code == 0);
  std::remove("cli_c7.tmp");

  {
    std::ofstream out("cli_p5.tmp");
    out << "5 4\n0 1\n1 2\n2 3\n3 4\n";
  }
  RunResult bad = run("analyze --file cli_p5.tmp --format json");
  CHECK(bad.exit_code == 1);
  ordered_json parsed = ordered_json::parse(bad.output);
  CHECK(parsed["error"]["code"] == "NotDistanceRegular");
  CHECK(parsed["error"]["witness"].size() == 7);
  std::remove("cli_p5.tmp");

  {
    std::ofstream out("cli_dup.tmp");
    out << "3 3\n0 1\n0 1\n1 2\n";
  }
  CHECK(run("analyze --file cli_dup.tmp").exit_code == 2);
  std::remove("cli_dup.tmp");
}

TEST_CASE("identities command is deterministic") {
  RunResult r1 = run("identities --diameter 4 --samples 60 --seed 5");
  RunResult r2 = run("identities --diameter 4 --samples 60 --seed 5");
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == r2.output);
}

TEST_CASE("scan writes both table files") {
  RunResult r = run(
      "scan --diameter 3 --unit-circle-max 8 --no-real-grid --out cli_scan");
  CHECK(r.exit_code == 0);
  ordered_json parsed;
  {
    std::ifstream in("cli_scan.json");
    REQUIRE(in.good());
    in >> parsed;
  }
  CHECK(parsed["D"] == 3);
  CHECK(parsed["candidates"].is_array());
  std::ifstream csv("cli_scan.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("D,q_re,q_im", 0) == 0);
  std::remove("cli_scan.json");
  std::remove("cli_scan.csv");
}
