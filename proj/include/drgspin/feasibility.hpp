#pragma once

#include <string>
#include <vector>

#include "drgspin/qracah.hpp"

namespace drgspin {

struct GridSpec {
  int unit_circle_max = 60;       // max denominator N for q = exp(i pi m / N)
  bool unit_circle = true;
  bool real_grid = true;
  double real_q_min = 1.0;        // exclusive
  double real_q_max = 3.0;
  double real_q_step = 1e-3;
  double real_a_max = 3.0;
  double real_a_step = 1e-3;
  double threshold = 1e-4;        // integrality residual cut
};

struct FeasibilityCandidate {
  int D = 0;
  cx q, a;                        // canonical branch
  std::string family_tag;         // unit-circle-q | real-q | special-a
  std::vector<double> b, c, a_seq, k;
  double integrality_residual = 0.0;
  double n_implied = 0.0;
  std::vector<std::string> tags;  // special parameter conditions that hold
};

// Enumerate the structured unit-circle families and the real grids, keep
// the parameter points whose intersection arrays are nonnegative integers
// within the threshold, dedupe under branch canonicalization, sort by
// residual.
std::vector<FeasibilityCandidate> scan(int D, const GridSpec& spec);

struct CandidateReport {
  FeasibilityCandidate candidate;
  bool feasible = true;
  std::vector<std::string> reasons;  // named integrality failures
  std::vector<std::pair<std::string, double>> quantities;
};

// Recompute at full precision, tag the special parameter conditions, and
// run the counting-formula suite (z_i, splits, local graph scalars) as
// additional nonnegative-integrality filters.
CandidateReport evaluate_candidate(const FeasibilityCandidate& c);

std::string candidates_to_csv(const std::vector<FeasibilityCandidate>& list);

}  // namespace drgspin
