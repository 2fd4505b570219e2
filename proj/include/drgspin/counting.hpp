#pragma once

#include "drgspin/dual.hpp"
#include "drgspin/qracah.hpp"

namespace drgspin {

// |G_j(x) n G(y) n G(z)| by direct enumeration.
long long triple_count(const Graph& g, int x, int y, int z, int j);

// Counted statistics gathered while verifying; counted values are the
// ground truth, closed forms are what gets compared against them.
struct CountStats {
  std::vector<long long> z;  // z.at(i) = counted z_i, 1..D; -1 if no config
  std::vector<std::string> notes;
  bool constancy_violation = false;
};

// z_i = |G_{i-1}(x) n G(y) n G(z)| over all edges yz across consecutive
// shells: constancy, the closed forms, the shell recurrence and the
// product identity (a_1 - z_i) z_{i+1} = a_i z_2.
ResidualMap verify_z_counts(const Graph& g, const QRacahParams& p, int x,
                            CountStats* stats = nullptr);

// Distance-2 pairs across consecutive shells (and across the last shell):
// counted splits against the closed forms, each summing to c_2.
ResidualMap verify_c2_splits(const Graph& g, const QRacahParams& p, int x,
                             CountStats* stats = nullptr);

// Adjacent same-shell pairs: counted splits against the three-part (two at
// the last shell) closed forms. Needs a_1 != 0.
ResidualMap verify_same_layer(const Graph& g, const QRacahParams& p, int x,
                              CountStats* stats = nullptr);

// Distance-2 same-shell statistics D(z), U(z): the per-z linear relation,
// their sums, the inequality with its xi/zeta prefactor, the equality
// characterization, and the closed product form of the right-hand side.
ResidualMap verify_inequality(const Graph& g, const QRacahParams& p, int x,
                              CountStats* stats = nullptr);

// The five-term matrix relations (shifted and unshifted adjacency forms)
// and their diagonal scalar specialization from the graph's own integers.
ResidualMap verify_matrix_eq(const Graph& g, const QRacahParams& p,
                             const DualStructure& d, int x);

// The induced subgraph on G(x): strong regularity by counting, spectrum
// against the closed-form eigenvalues and multiplicities (advisory; the
// counted values are authoritative). Needs a_1 != 0.
ResidualMap local_graph_srg(const Graph& g, const QRacahParams* p, int x,
                            CountStats* stats = nullptr);

}  // namespace drgspin
