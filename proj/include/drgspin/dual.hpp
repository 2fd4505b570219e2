#pragma once

#include "drgspin/graph.hpp"
#include "drgspin/spectral.hpp"

namespace drgspin {

// Dual idempotents and dual distance matrices with respect to a base
// vertex. Expects SpectralData already reordered to a formally self-dual
// ordering. Both constructions (distance shells, and the eigenmatrix
// expansion) are built and compared.
struct DualStructure {
  int x = 0;
  std::vector<RMat> Estar;  // diagonal 0/1 shell indicators
  std::vector<RMat> Astar;  // diagonal, (A*_i)_yy = n (E_i)_{x,y}
  RMat AstarMat;            // dual adjacency matrix A* = Astar[1]
  double construction_residual = 0.0;
};

DualStructure dual_structure(const Graph& g, const SpectralData& s, int x,
                             double tol = kDefaultTol);

// Residuals for the structural identities relating the Bose-Mesner algebra
// and its dual: the vanishing pattern and linear independence of the triple
// products, the reduction identities through E_0 and E*_0, and the
// tridiagonal relations with scalars extracted from the eigenvalue
// sequences.
ResidualMap verify_dual_identities(const Graph& g, const SpectralData& s,
                                   const DualStructure& d);

}  // namespace drgspin
