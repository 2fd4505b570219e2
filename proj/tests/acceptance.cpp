// Acceptance suite: one pass/fail line per criterion.
#include <array>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drgspin/feasibility.hpp"
#include "drgspin/graph.hpp"
#include "drgspin/qracah.hpp"
#include "drgspin/spinmodel.hpp"

using namespace drgspin;
using nlohmann::ordered_json;
using clk = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::vector<std::string> g_details;

void report(int index, const std::string& name, bool ok) {
  std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", index,
              name.c_str());
  if (!ok) {
    ++g_failures;
    for (const auto& d : g_details) std::printf("      %s\n", d.c_str());
  }
  g_details.clear();
}

void detail(const std::string& msg) { g_details.push_back(msg); }

struct RunResult {
  int exit_code = -1;
  std::string output;
  double wall_ms = 0.0;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DRGSPIN_CLI) + " " + args + " 2>&1";
  const auto t0 = clk::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  RunResult r;
  std::array<char, 8192> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.output.append(buf.data(), got);
  r.exit_code = WEXITSTATUS(pclose(pipe));
  r.wall_ms = std::chrono::duration<double, std::milli>(clk::now() - t0).count();
  return r;
}

// Residual names asserted per cycle; each must be a number < 1e-8 in the
// vertex record of the report.
const char* const kCycleResiduals[] = {
    "z.gate",           "z.centrality",         "aw.z3_A",
    "aw.z3_B",          "aw.z3_C",              "aw.degree3_A",
    "aw.degree3_B",     "spin.intertwine_W",    "spin.intertwine_Wstar",
    "spin.braid",       "spin.type2",           "spin.hadamard_inverse",
    "spin.valency_product", "spin.type3_max",   "spin.type3_scaled",
    "spin.nomura_max",  "spin.symmetry",        "spin.wminus.type2",
    "spin.wminus.type3_max", "spin.wminus.symmetry"};

bool check_cycle_report(const ordered_json& rep, int N) {
  bool ok = true;
  if (rep["overall"] != "pass") {
    detail("overall != pass");
    ok = false;
  }
  // a formally self-dual Q-polynomial ordering was found
  bool fsd = false;
  for (const auto& o : rep["spectral"]["orderings"])
    fsd = fsd || (o["q_polynomial"].get<bool>() &&
                  o["formally_self_dual"].get<bool>());
  if (!fsd) {
    detail("no formally self-dual ordering");
    ok = false;
  }
  // the fitted parameters reproduce theta_i = q^{2i} + q^{-2i}
  {
    const auto& sel = rep["selected"];
    const auto& fit = rep["qracah"]["fits"][sel["fit"].get<int>()];
    const cx q(fit["q"]["re"].get<double>(), fit["q"]["im"].get<double>());
    const auto& theta = rep["spectral"]["theta"];
    const int perm_ordering = sel["ordering"].get<int>();
    const auto& perm = rep["spectral"]["orderings"][perm_ordering]["perm"];
    double worst = 0.0;
    for (size_t i = 0; i < theta.size(); ++i) {
      const double th = theta[perm[i].get<int>()].get<double>();
      worst = std::max(worst,
                       std::abs(th - (qpow(q, 2 * i) + qpow(q, -2 * i))));
    }
    if (worst > 1e-8) {
      detail("fitted q does not give theta_i = q^{2i}+q^{-2i}, err " +
             std::to_string(worst));
      ok = false;
    }
    if (std::abs(cx(fit["epsilon"]["re"].get<double>(),
                    fit["epsilon"]["im"].get<double>())) > 1e-8) {
      detail("epsilon not zero");
      ok = false;
    }
  }
  // the central element is zero
  const auto& vrec = rep["vertices"][0];
  const auto& rm = vrec["residuals"];
  for (const char* name : kCycleResiduals) {
    if (!rm.contains(name)) {
      detail(std::string("missing residual ") + name);
      ok = false;
      continue;
    }
    if (!rm[name].is_number()) {
      detail(std::string(name) + " skipped unexpectedly");
      ok = false;
    } else if (rm[name].get<double>() >= 1e-8) {
      detail(std::string(name) + " too large: " + rm[name].dump());
      ok = false;
    }
  }
  if (!(vrec["is_spin_model"].get<bool>() && vrec["is_afforded"].get<bool>())) {
    detail("spin verdict flags not set");
    ok = false;
  }
  if (rep["max_residual"].get<double>() >= 1e-8) {
    detail("max residual " + rep["max_residual"].dump());
    ok = false;
  }
  (void)N;
  return ok;
}

}  // namespace

int main() {
  const std::vector<int> cycles = {7, 8, 9, 10, 12, 13};

  // 1. cycle pipeline end to end
  {
    bool ok = true;
    for (int N : cycles) {
      RunResult r = run_cli("analyze --cycle " + std::to_string(N) +
                            " --format json");
      if (r.exit_code != 0) {
        detail("cycle " + std::to_string(N) + " exit " +
               std::to_string(r.exit_code));
        ok = false;
        continue;
      }
      if (r.wall_ms > 10000.0) {
        detail("cycle " + std::to_string(N) + " took " +
               std::to_string(r.wall_ms) + " ms");
        ok = false;
      }
      ordered_json rep = ordered_json::parse(r.output, nullptr, false);
      if (rep.is_discarded()) {
        detail("unparseable report");
        ok = false;
        continue;
      }
      if (!check_cycle_report(rep, N)) {
        detail("...in cycle " + std::to_string(N));
        ok = false;
      }
    }
    report(1, "cycle pipeline, N in {7,8,9,10,12,13}, residuals < 1e-8", ok);
  }

  // 2. hypercube negative control
  {
    bool ok = true;
    RunResult r = run_cli("analyze --hypercube 4 --format json");
    if (r.exit_code == 0) {
      detail("expected nonzero exit");
      ok = false;
    }
    ordered_json rep = ordered_json::parse(r.output, nullptr, false);
    if (rep.is_discarded()) {
      detail("unparseable report");
      ok = false;
    } else {
      if (rep["qracah"]["error"]["code"] != "NotQRacah") {
        detail("missing NotQRacah");
        ok = false;
      }
      const std::string msg = rep["qracah"]["error"]["message"];
      if (msg.find("beta = 2") == std::string::npos ||
          msg.find("q^2 = 1") == std::string::npos) {
        detail("diagnostic lacks beta = 2 / q^2 = 1: " + msg);
        ok = false;
      }
      if (!rep.contains("graph") || rep["graph"]["D"] != 4) {
        detail("graph stage missing");
        ok = false;
      }
      bool spectral_ok = rep.contains("spectral");
      for (auto& [name, value] : rep["residuals"].items())
        if (value.is_number() && value.get<double>() >= 1e-8) {
          detail(name + " = " + value.dump());
          spectral_ok = false;
        }
      if (!spectral_ok) {
        detail("spectral stage residuals failed");
        ok = false;
      }
    }
    report(2, "hypercube 4 rejected as NotQRacah with beta = 2 diagnostic", ok);
  }

  // 3. oracle equivalence: braid verdict vs brute force; wrong f
  {
    bool ok = true;
    for (int N : cycles) {
      RunResult r = run_cli("analyze --cycle " + std::to_string(N) +
                            " --format json");
      ordered_json rep = ordered_json::parse(r.output, nullptr, false);
      if (rep.is_discarded()) {
        detail("unparseable report");
        ok = false;
        continue;
      }
      const auto& rm = rep["vertices"][0]["residuals"];
      if (!rm.contains("spin.verdict_agreement") ||
          !rm["spin.verdict_agreement"].is_number() ||
          rm["spin.verdict_agreement"].get<double>() != 0.0) {
        detail("braid and brute-force verdicts disagree on cycle " +
               std::to_string(N));
        ok = false;
      }
    }
    // with f = 1 the star-triangle condition fails but its scaled form holds
    for (int N : {7, 8}) {
      Graph g = cycle_graph(N);
      SpectralData s0 = eigendecompose(g);
      krein_and_eigenmatrices(g, s0);
      SpectralData s = reorder(s0, find_qpoly_orderings(s0).front().perm);
      std::vector<double> theta(s.theta.data(), s.theta.data() + g.D + 1);
      QRacahParams p = fit_qracah(theta).front();
      DualStructure d = dual_structure(g, s, 0);
      BoltzmannPair one = boltzmann_pair(g, s, d, p, FMode::Explicit, 1.0);
      if (type3_max_residual(one.W) < 1e-3) {
        detail("type III unexpectedly passes with f = 1");
        ok = false;
      }
      if (type3_scaled_max_residual(one.W, 1.0 / one.sum_tauinv_k) > 1e-8) {
        detail("scaled star-triangle identity fails with f = 1");
        ok = false;
      }
    }
    report(3, "braid verdict matches brute-force type III; f = 1 control", ok);
  }

  // 4. identity harness at D in {3,4,5,6}
  {
    bool ok = true;
    const auto t0 = clk::now();
    for (int D : {3, 4, 5, 6}) {
      HarnessReport rep = identity_harness(D, 1000, 20250809);
      for (const auto& [name, e] : rep.identities)
        if (e.max_residual >= 1e-9) {
          detail("D=" + std::to_string(D) + " " + name + " max " +
                 std::to_string(e.max_residual));
          ok = false;
        }
    }
    const double ms =
        std::chrono::duration<double, std::milli>(clk::now() - t0).count();
    if (ms > 30000.0) {
      detail("harness took " + std::to_string(ms) + " ms");
      ok = false;
    }
    report(4, "identity harness: 1000 samples, D in {3,4,5,6}, < 1e-9", ok);
  }

  // 5. counting suite: every count matches or is skipped with a known flag
  {
    bool ok = true;
    const std::vector<std::string> allowed = {
        "a_1=0",
        "bipartite: a_1=0",
        "almost-bipartite: a_1=0",
        "a_i=0",
        "a_1=0 (local graph edgeless)",
        "p^i_{2,i-1}=0",
        "p^D_{2,D}=0",
        "p^D_{2,D}=0 (a^2=-1)",
        "p^i_{2,i}=0",
        "degenerate denominator",
        "no such configuration"};
    for (int N : cycles) {
      RunResult r = run_cli("analyze --cycle " + std::to_string(N) +
                            " --format json");
      ordered_json rep = ordered_json::parse(r.output, nullptr, false);
      if (rep.is_discarded()) {
        detail("unparseable report");
        ok = false;
        continue;
      }
      const auto& vrec = rep["vertices"][0];
      if (vrec["constancy_violation"].get<bool>()) {
        detail("constancy violation on cycle " + std::to_string(N));
        ok = false;
      }
      for (auto& [name, value] : vrec["residuals"].items()) {
        if (name.rfind("combin.", 0) != 0) continue;
        if (value.is_number()) {
          if (value.get<double>() >= 1e-8) {
            detail(name + " = " + value.dump() + " on cycle " +
                   std::to_string(N));
            ok = false;
          }
        } else {
          const std::string reason = value["skipped"];
          bool known = false;
          for (const auto& a : allowed) known = known || reason == a;
          if (!known) {
            detail("unknown skip reason: " + reason);
            ok = false;
          }
        }
      }
    }
    report(5, "counting suite: counts match closed forms or carry known flags",
           ok);
  }

  // 6. feasibility scan contains the cycle points
  {
    bool ok = true;
    RunResult r3 = run_cli("scan --diameter 3 --out acceptance_scan3");
    RunResult r4 = run_cli("scan --diameter 4 --out acceptance_scan4");
    if (r3.exit_code != 0 || r4.exit_code != 0) {
      detail("scan exit codes");
      ok = false;
    }
    if (r3.wall_ms > 60000.0 || r4.wall_ms > 60000.0) {
      detail("scan too slow");
      ok = false;
    }
    auto contains_point = [&](const std::string& file, double n, double resid,
                              const std::string& tag) {
      std::ifstream in(file);
      if (!in.good()) return false;
      ordered_json parsed;
      in >> parsed;
      for (const auto& c : parsed["candidates"]) {
        if (std::abs(c["n_implied"].get<double>() - n) > 1e-6) continue;
        if (c["residual"].get<double>() > resid) continue;
        for (const auto& t : c["tags"])
          if (t == tag) return true;
      }
      return false;
    };
    if (!contains_point("acceptance_scan3.json", 7.0, 1e-10, "a=-q^{-D-1}")) {
      detail("missing heptagon point in the D=3 table");
      ok = false;
    }
    if (!contains_point("acceptance_scan4.json", 8.0, 1e-10, "a^2=-1")) {
      detail("missing octagon point in the D=4 table");
      ok = false;
    }
    for (const char* f : {"acceptance_scan3.json", "acceptance_scan3.csv",
                          "acceptance_scan4.json", "acceptance_scan4.csv"})
      std::remove(f);
    report(6, "feasibility scan finds the cycle parameter points", ok);
  }

  // 7. round-trip and determinism
  {
    bool ok = true;
    Graph g = cycle_graph(7);
    save_graph(g, "acceptance_c7.tmp");
    Graph h = load_graph("acceptance_c7.tmp");
    if (h.adjacency != g.adjacency || h.p != g.p || h.D != g.D) {
      detail("file round-trip mismatch");
      ok = false;
    }
    std::remove("acceptance_c7.tmp");

    RunResult a = run_cli("analyze --cycle 9 --format json --seed 77");
    RunResult b = run_cli("analyze --cycle 9 --format json --seed 77");
    if (a.output != b.output) {
      detail("reports are not byte-identical");
      ok = false;
    }
    ordered_json parsed = ordered_json::parse(a.output, nullptr, false);
    if (parsed.is_discarded() || parsed.dump(2) + "\n" != a.output) {
      detail("JSON parse/emit round-trip failed");
      ok = false;
    }
    report(7, "graph file round-trip; byte-identical JSON reports", ok);
  }

  if (g_failures == 0) std::printf("all acceptance criteria pass\n");
  return g_failures == 0 ? 0 : 1;
}
