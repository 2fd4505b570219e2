#pragma once

#include <vector>

#include "drgspin/graph.hpp"

namespace drgspin {

// Spectral side of the Bose-Mesner algebra: eigenvalues, primitive
// idempotents, eigenmatrices P and Q, Krein parameters. The adjacency
// matrix is real symmetric, so everything here is real.
struct SpectralData {
  int n = 0;
  int D = 0;
  RVec theta;                  // D+1 eigenvalues; index 0 is the valency
  std::vector<RMat> E;         // primitive idempotents
  RMat P, Q;                   // A_j = sum_i P_ij E_i,  E_j = n^-1 sum_i Q_ij A_i
  std::vector<double> krein;   // q^h_{i,j}, (D+1)^3
  std::vector<long long> kstar;

  double qnum(int h, int i, int j) const {
    return krein[(static_cast<size_t>(h) * (D + 1) + i) * (D + 1) + j];
  }
};

// Eigenvalue clustering + idempotents as Lagrange polynomials in A, so each
// E_i lies in the Bose-Mesner algebra by construction. Exactly D+1 distinct
// eigenvalues are required; anything else throws EigCountMismatch.
SpectralData eigendecompose(const Graph& g);

// Fill P, Q (= n P^{-1}), the Krein tensor and multiplicities.
// Throws SingularP if P cannot be inverted.
void krein_and_eigenmatrices(const Graph& g, SpectralData& s);

struct QPolyOrdering {
  std::vector<int> perm;       // perm[0] == 0
  bool is_q_poly = false;
  bool formally_self_dual = false;
  double pq_residual = 0.0;    // max |P - Q| under this ordering
  double theta_star_residual = 0.0;
};

// All orderings of the idempotents (fixing index 0) whose reordered Krein
// tensor has the Q-polynomial vanishing pattern, each flagged for formal
// self-duality. Deterministic lexicographic output order.
std::vector<QPolyOrdering> find_qpoly_orderings(const SpectralData& s,
                                                double tol = kDefaultTol);

// max |P - Q| under the given ordering, plus the theta_i = theta*_i check.
QPolyOrdering check_self_dual(const SpectralData& s, std::vector<int> perm,
                              double tol = kDefaultTol);

// SpectralData with idempotents renumbered as E'_i = E_{perm[i]}.
SpectralData reorder(const SpectralData& s, const std::vector<int>& perm);

}  // namespace drgspin
