#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drgspin/common.hpp"

namespace drgspin {

// Parameters (q, a, alpha, epsilon) of an eigenvalue sequence
//   theta_i = alpha (a q^{2i-D} + a^{-1} q^{D-2i}) + epsilon,
// together with the derived scalars used throughout the verification suite.
struct QRacahParams {
  int D = 0;
  cx q, a, alpha, epsilon;
  std::vector<cx> vartheta;  // a q^{2i-D} + a^{-1} q^{D-2i}, 0..D
  std::vector<cx> tau;       // (-1)^i a^{-i} q^{i(D-i)}, 0..D
  cx beta, gamma, varrho;
  bool admissible = false;
  bool bipartite = false;         // a^2 = -1
  bool almost_bipartite = false;  // a = -q^{-D-1}
  double fit_residual = 0.0;
};

QRacahParams make_params(int D, cx q, cx a, cx alpha, cx epsilon);

// Smallest |expr - 1| over the admissibility constraint families
//   q^{2i} != 1,  a^2 q^{2i} != 1,  a^3 q^{2i-D-1} != 1.
double admissibility_margin(int D, cx q, cx a);

// Margin over the denominators of the product-form identities, which reach
// one step beyond the admissibility ranges (a^2 q^{+-2D} and friends).
double formula_margin(int D, cx q, cx a);

// Representative of (a, q) under the maps that fix every vartheta_i:
// (a,q) -> (a^{-1}, q^{-1}) and (a,q) -> ((-1)^D a, -q). Prefers
// Im(q) >= 0, then |a| >= 1, then smaller principal arguments.
std::pair<cx, cx> canonical_branch(int D, cx q, cx a);

// Fit (q, a, alpha, epsilon) to an eigenvalue sequence theta_0..theta_D.
// Returns every admissible parameter record after branch canonicalization;
// throws NotQRacah or Degenerate when no record exists.
std::vector<QRacahParams> fit_qracah(const std::vector<double>& theta);

// Closed forms for the intersection arrays in terms of (a, q, D).
struct AppendixTables {
  int D = 0;
  cx alpha_cf, epsilon_cf, a1_cf;
  std::vector<cx> b, c, a;  // b[D] = 0, c[0] = 0, a[0] = 0
  std::vector<cx> k;        // valencies via the product formula
  cx n_implied;             // sum of the k_i
  bool bipartite = false;
  bool almost_bipartite = false;
};

AppendixTables scalar_tables(const QRacahParams& p);  // throws Inadmissible

// Scalars of the strongly-regular local graph: nontrivial eigenvalues and
// multiplicities. Only meaningful when a_1 != 0.
struct LocalGraphScalars {
  cx r, s, mult_r, mult_s;
};
LocalGraphScalars local_graph_scalars(const QRacahParams& p);

// The closed-form value of z_i = |G_{i-1}(x) n G(y) n G(z)| and companions.
cx z_value(const QRacahParams& p, int i);          // factored form
cx z_value_raw(const QRacahParams& p, int i);      // quotient of thetas form
cx a1_minus_z(const QRacahParams& p, int i);       // factored form
cx p2_im1(const QRacahParams& p, const AppendixTables& t, int i);  // p^i_{2,i-1}
cx p2_ii(const QRacahParams& p, const AppendixTables& t, int i);   // p^i_{2,i}
cx p2_DD(const QRacahParams& p, const AppendixTables& t);          // p^D_{2,D}
cx xi_value(const QRacahParams& p, int i);   // coefficient below the 5-term relation
cx zeta_value(const QRacahParams& p, int i);

// Evaluate every scalar identity of the verification harness at one
// parameter point. Entries are residuals, or skips when a_1 = 0 makes an
// identity inapplicable.
ResidualMap identity_residuals(const QRacahParams& p);

struct HarnessEntry {
  double max_residual = 0.0;
  long long evaluated = 0;
  long long skipped = 0;
};

struct HarnessReport {
  int D = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, HarnessEntry>> identities;
  double max_residual() const {
    double m = 0.0;
    for (const auto& [n, e] : identities) m = std::max(m, e.max_residual);
    return m;
  }
};

// Random admissible (a, q) samples, rejection-sampled with margin against
// the constraint families; reports the max relative residual per identity.
// The seed fixes the sample stream regardless of execution order.
HarnessReport identity_harness(int D, int samples, std::uint64_t seed);

// One draw of the harness sample stream (exposed for tests).
QRacahParams harness_sample(int D, std::uint64_t seed, std::uint64_t index);

}  // namespace drgspin
