#pragma once

#include "drgspin/central.hpp"

namespace drgspin {

// Boltzmann pair W = f sum tau_i E_i (symmetric, in M) and
// W* = f sum tau_i E*_i (diagonal, in M*).
struct BoltzmannPair {
  Mat W, Winv, Wstar, Wstarinv;
  cx f;
  std::vector<cx> tau;
  cx sum_tau_k;      // sum tau_i k_i
  cx sum_tauinv_k;   // sum tau_i^{-1} k_i
};

enum class FMode { Theorem, Explicit };

// Theorem mode picks f as the principal square root of
// |X|^{1/2} sum tau_i^{-1} k_i; explicit mode uses the given f.
BoltzmannPair boltzmann_pair(const Graph& g, const SpectralData& s,
                             const DualStructure& d, const QRacahParams& p,
                             FMode mode, cx f_explicit = 1.0);

// W^{-1} sB W = sC and W* sA (W*)^{-1} = sC, plus the coefficient ratio
// condition tau_i/tau_{i-1} = -a^{-1} q^{D-2i+1}.
ResidualMap verify_intertwiners(const BoltzmannPair& bp, const AbcTriple& t,
                                const QRacahParams& p);

// Braid relation W W* W = W* W W*, the conjugation action
// rho(S) = (W*W)^{-1} S (W*W) on sA, sB, sC, the idempotents and W, and
// the conjugation identities W E*_i W^{-1} = (W*)^{-1} E_i W*.
ResidualMap verify_braid_and_rho(const BoltzmannPair& bp, const AbcTriple& t,
                                 const SpectralData& s, const DualStructure& d);

// Type II criterion, the Hadamard-inverse identity W W^(-) = n I, the
// product identity n = (sum tau_i k_i)(sum tau_i^-1 k_i), the distance
// matrix expansions of W^{+-1} and (W*)^{+-1}, and the entry formulas.
ResidualMap verify_type2_and_expansions(const BoltzmannPair& bp, const Graph& g,
                                        const DualStructure& d);

// Entrywise transpose-inverse.
Mat wminus(const Mat& W);

// Star-triangle condition checked on every vertex triple: O(n^4).
double type3_max_residual(const Mat& W);
double type3_max_residual_serial(const Mat& W);

// Scaled variant: sum_e W_eb W_ec / W_ea = scale * W_bc / (W_ab W_ca),
// which holds for any f with scale = f^2 / sum tau_i^-1 k_i.
double type3_scaled_max_residual(const Mat& W, cx scale);

// For every ordered pair (b,c), the ratio vector u_y = W_yb / W_yc must be
// an eigenvector of every distance matrix.
double nomura_max_residual(const Mat& W, const Graph& g);
double nomura_max_residual_serial(const Mat& W, const Graph& g);

struct SpinVerdict {
  ResidualMap residuals;
  bool is_spin_model = false;
  bool is_afforded = false;
};

// Full verdict on a candidate W: symmetry, type II, type III (brute force
// when enabled), Nomura membership. `scale` is the star-triangle constant
// implied by f.
SpinVerdict spin_verdict(const Mat& W, const Graph& g, cx scale,
                         bool brute_force_type3, double tol = kDefaultTol);

}  // namespace drgspin
