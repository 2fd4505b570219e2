#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "drgspin/feasibility.hpp"
#include "drgspin/pipeline.hpp"

using namespace drgspin;

namespace {

int cmd_analyze(const AnalyzeOptions& opt, const std::string& format) {
  AnalyzeResult res = run_analysis(opt);
  if (format == "json") {
    std::cout << res.report.dump(2) << "\n";
  } else {
    const json& r = res.report;
    std::cout << kToolName << " " << kToolVersion << "\n";
    if (r.contains("graph"))
      std::cout << "graph: n=" << r["graph"]["n"] << " D=" << r["graph"]["D"]
                << "\n";
    if (r.contains("error"))
      std::cout << "error: " << r["error"]["code"].get<std::string>() << ": "
                << r["error"]["message"].get<std::string>() << "\n";
    if (r.contains("selected"))
      std::cout << "selected ordering " << r["selected"]["ordering"]
                << ", fit " << r["selected"]["fit"] << "\n";
    auto print_map = [&](const json& m, const std::string& indent) {
      for (auto& [k, v] : m.items()) {
        std::cout << indent << k << " = ";
        if (v.is_object() && v.contains("skipped"))
          std::cout << "SKIP (" << v["skipped"].get<std::string>() << ")";
        else
          std::cout << v.dump();
        std::cout << "\n";
      }
    };
    if (r.contains("residuals")) {
      std::cout << "residuals:\n";
      print_map(r["residuals"], "  ");
    }
    if (r.contains("vertices"))
      for (auto& v : r["vertices"]) {
        std::cout << "vertex " << v["x"] << ":\n";
        if (v.contains("error"))
          std::cout << "  error: " << v["error"].dump() << "\n";
        if (v.contains("residuals")) print_map(v["residuals"], "  ");
      }
    if (r.contains("max_residual"))
      std::cout << "max residual: " << r["max_residual"] << "\n";
    if (r.contains("wall_time_ms"))
      std::cout << "wall time: " << r["wall_time_ms"] << " ms\n";
    std::cout << "overall: " << r["overall"].get<std::string>() << "\n";
  }
  return res.exit_code;
}

int cmd_scan(int D, const GridSpec& spec, const std::string& out_prefix) {
  std::vector<FeasibilityCandidate> list;
  try {
    list = scan(D, spec);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  json jlist = json::array();
  for (const auto& c : list) {
    jlist.push_back(json{{"D", c.D},
                         {"q", complex_to_json(c.q)},
                         {"a", complex_to_json(c.a)},
                         {"family_tag", c.family_tag},
                         {"residual", c.integrality_residual},
                         {"n_implied", c.n_implied},
                         {"b", c.b},
                         {"c", c.c},
                         {"a_seq", c.a_seq},
                         {"k", c.k},
                         {"tags", c.tags}});
  }
  {
    std::ofstream jf(out_prefix + ".json");
    jf << json{{"D", D}, {"candidates", jlist}}.dump(2) << "\n";
    std::ofstream cf(out_prefix + ".csv");
    cf << candidates_to_csv(list);
  }
  long special = 0;
  for (const auto& c : list)
    if (!c.tags.empty()) ++special;
  std::cout << "diameter " << D << ": " << list.size()
            << " candidate parameter points (" << special
            << " with special tags) -> " << out_prefix << ".json, "
            << out_prefix << ".csv\n";
  return 0;
}

int cmd_identities(int D, int samples, std::uint64_t seed) {
  HarnessReport rep;
  try {
    rep = identity_harness(D, samples, seed);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  std::printf("identity harness: D=%d samples=%d seed=%llu\n", rep.D,
              rep.samples, static_cast<unsigned long long>(rep.seed));
  for (const auto& [name, e] : rep.identities)
    std::printf("  %-28s max %.3e   (%lld evaluated, %lld skipped)\n",
                name.c_str(), e.max_residual, e.evaluated, e.skipped);
  const double worst = rep.max_residual();
  std::printf("max residual: %.3e\n", worst);
  return worst < 1e-9 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-model machinery of distance-regular graphs: construct, "
               "fit and numerically verify"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "run the full verification pipeline on one graph");
  int cycle_n = 0, hypercube_d = 0;
  std::string file_path;
  AnalyzeOptions opt;
  std::string format = "text";
  auto* src_cycle = analyze->add_option("--cycle", cycle_n, "N-cycle (N >= 7)");
  auto* src_hyper =
      analyze->add_option("--hypercube", hypercube_d, "d-cube (d >= 3)");
  auto* src_file =
      analyze->add_option("--file", file_path, "edge list file (n m header)");
  analyze->add_option("--base-vertex", opt.base_vertex, "base vertex for the dual structure");
  analyze->add_flag("--all-vertices", opt.all_vertices, "verify every base vertex");
  analyze->add_option("--tolerance", opt.tolerance, "residual tolerance")
      ->default_val(kDefaultTol);
  bool no_type3 = false;
  analyze->add_flag("--no-type3-bruteforce", no_type3,
                    "skip the O(n^4) star-triangle enumeration");
  analyze->add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  analyze->add_option("--seed", opt.seed, "seed recorded in the report");
  analyze->add_flag("--timing", opt.timing, "include wall time in the report");

  // scan
  auto* scan_cmd = app.add_subcommand(
      "scan", "search (q, a) parameter space for integral intersection arrays");
  int scan_D = 0;
  GridSpec spec;
  std::string out_prefix;
  scan_cmd->add_option("--diameter", scan_D, "diameter D >= 3")->required();
  scan_cmd->add_option("--unit-circle-max", spec.unit_circle_max,
                       "max denominator N for q = exp(i pi m/N)");
  scan_cmd->add_flag("!--no-unit-circle", spec.unit_circle, "skip root-of-unity q");
  scan_cmd->add_flag("!--no-real-grid", spec.real_grid, "skip the real (q, a) grid");
  scan_cmd->add_option("--real-q-max", spec.real_q_max, "real grid q upper bound");
  scan_cmd->add_option("--real-step", spec.real_q_step, "real grid step");
  scan_cmd->add_option("--threshold", spec.threshold, "integrality residual cut");
  scan_cmd->add_option("--out", out_prefix, "output file prefix");

  // identities
  auto* id_cmd = app.add_subcommand(
      "identities", "randomized scalar identity harness at a given diameter");
  int id_D = 0, id_samples = 0;
  std::uint64_t id_seed = 0;
  id_cmd->add_option("--diameter", id_D, "diameter D >= 3")->required();
  id_cmd->add_option("--samples", id_samples, "number of samples")->required();
  id_cmd->add_option("--seed", id_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) {
    const int sources = (src_cycle->count() ? 1 : 0) +
                        (src_hyper->count() ? 1 : 0) + (src_file->count() ? 1 : 0);
    if (sources != 1) {
      std::cerr << "analyze needs exactly one of --cycle, --hypercube, --file\n";
      return 2;
    }
    if (src_cycle->count()) {
      opt.source = AnalyzeOptions::Source::Cycle;
      opt.size = cycle_n;
    } else if (src_hyper->count()) {
      opt.source = AnalyzeOptions::Source::Hypercube;
      opt.size = hypercube_d;
    } else {
      opt.source = AnalyzeOptions::Source::File;
      opt.path = file_path;
    }
    opt.type3_bruteforce = !no_type3;
    return cmd_analyze(opt, format);
  }
  if (scan_cmd->parsed()) {
    if (scan_D < 3) {
      std::cerr << "scan needs --diameter >= 3\n";
      return 2;
    }
    spec.real_a_step = spec.real_q_step;
    if (out_prefix.empty()) out_prefix = "scan-D" + std::to_string(scan_D);
    return cmd_scan(scan_D, spec, out_prefix);
  }
  if (id_cmd->parsed()) {
    if (id_D < 3 || id_samples < 1) {
      std::cerr << "identities needs --diameter >= 3 and --samples >= 1\n";
      return 2;
    }
    return cmd_identities(id_D, id_samples, id_seed);
  }
  return 2;
}
