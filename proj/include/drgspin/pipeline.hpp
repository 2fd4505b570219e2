#pragma once

#include <cstdint>

#include "drgspin/report.hpp"

namespace drgspin {

struct AnalyzeOptions {
  enum class Source { Cycle, Hypercube, File };
  Source source = Source::Cycle;
  int size = 7;           // cycle length or hypercube dimension
  std::string path;       // for Source::File
  int base_vertex = 0;
  bool all_vertices = false;
  double tolerance = kDefaultTol;
  bool type3_bruteforce = true;  // still capped at n <= 64
  std::uint64_t seed = 0;
  bool timing = false;
};

struct AnalyzeResult {
  json report;
  int exit_code = 0;  // 0 pass, 1 verification failure, 2 usage/parse error
};

// The full pipeline: graph certification -> spectral decomposition ->
// Q-polynomial orderings -> q-Racah fits -> per-vertex dual structure,
// central element, Askey-Wilson relations, Boltzmann pair and spin model
// checks, and the combinatorial counting suite. Hard errors produce a
// partial report instead of throwing.
AnalyzeResult run_analysis(const AnalyzeOptions& opt);

}  // namespace drgspin
