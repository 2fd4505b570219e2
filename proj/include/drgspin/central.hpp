#pragma once

#include "drgspin/dual.hpp"
#include "drgspin/qracah.hpp"

namespace drgspin {

// The central element Z: the common value of the two projected sums
//   sum_i E*_i sA E*_i (1 + vth_i/(q+q^-1)) = sum_i E_i sB E_i (...)
// where sA = (A - eps I)/alpha and sB = (A* - eps I)/alpha.
struct CentralElement {
  Mat Z;
  double gate_residual = 0.0;   // distance between the two sides
  std::string dominant_side;    // which side has the larger norm
  std::vector<double> z_on_E;      // residuals of Z E_i = E_i sB E_i w_i
  std::vector<double> z_on_Estar;  // residuals of Z E*_i = E*_i sA E*_i w_i
};

// Throws AssumptionFails (carrying the residual in the message) when the
// two sides differ by more than tol; otherwise Z is their average.
CentralElement build_Z(const Graph& g, const SpectralData& s,
                       const DualStructure& d, const QRacahParams& p,
                       double tol = kDefaultTol);

struct AbcTriple {
  Mat A, B, C;
};

// sA, sB from the eigenvalue shift, sC from the Askey-Wilson closure.
// Consistency residuals between the shift form and the idempotent
// expansions go into `extra` when given.
AbcTriple build_abc(const Graph& g, const SpectralData& s,
                    const DualStructure& d, const QRacahParams& p,
                    const Mat& Z, ResidualMap* extra = nullptr);

// The three Z3-symmetric relations plus the two degree-3 relations they
// come from.
ResidualMap verify_askey_wilson(const AbcTriple& t, const Mat& Z,
                                const QRacahParams& p);

// Centrality of Z against a spanning set of the subconstituent algebra.
double centrality_residual(const Mat& Z, const Graph& g, const SpectralData& s,
                           const DualStructure& d);

struct ZSpectrumEntry {
  cx eigenvalue;
  int multiplicity = 0;
  bool matched = false;
  int r = -1, d = -1;   // module endpoint and diameter of the match
  double mismatch = 0.0;
};

// For each distinct eigenvalue of Z, search module parameters (r, d) with
// r >= 0, d >= 0, r + d <= D, 2r + d >= D whose predicted eigenvalue
//   [phi (q^{d+1}+q^{-d-1}) + phi^2] / (q + q^{-1}),
//   phi = a q^{2r+d-D} + a^{-1} q^{D-d-2r},
// matches it. Unmatched eigenvalues are reported, not failed.
std::vector<ZSpectrumEntry> z_spectrum_check(const Mat& Z,
                                             const QRacahParams& p);

}  // namespace drgspin
