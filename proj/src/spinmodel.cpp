#include "drgspin/spinmodel.hpp"

namespace drgspin {

namespace {

double triple_residual(const Mat& W, cx scale, int a, int b, int c) {
  const int n = static_cast<int>(W.rows());
  cx lhs = 0.0;
  for (int e = 0; e < n; ++e) lhs += W(e, b) * W(e, c) / W(e, a);
  const cx rhs = scale * W(b, c) / (W(a, b) * W(c, a));
  return rel_residual(lhs, rhs);
}

double type3_with_scale(const Mat& W, cx scale) {
  const int n = static_cast<int>(W.rows());
  double worst = 0.0;
#pragma omp parallel for collapse(2) reduction(max : worst) schedule(static)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        worst = std::max(worst, triple_residual(W, scale, a, b, c));
  return worst;
}

}  // namespace

BoltzmannPair boltzmann_pair(const Graph& g, const SpectralData& s,
                             const DualStructure& d, const QRacahParams& p,
                             FMode mode, cx f_explicit) {
  const int m = g.D + 1;
  BoltzmannPair bp;
  bp.tau = p.tau;
  bp.sum_tau_k = 0.0;
  bp.sum_tauinv_k = 0.0;
  for (int i = 0; i < m; ++i) {
    bp.sum_tau_k += p.tau[i] * static_cast<double>(g.k[i]);
    bp.sum_tauinv_k += static_cast<double>(g.k[i]) / p.tau[i];
  }
  if (std::abs(bp.sum_tauinv_k) < 1e-10 * g.n ||
      std::abs(bp.sum_tau_k) < 1e-10 * g.n)
    throw Error(ErrorCode::ZeroSum,
                "sum of tau_i^{+-1} k_i vanishes; inconsistent upstream data");

  bp.f = mode == FMode::Theorem
             ? std::sqrt(std::sqrt(static_cast<double>(g.n)) * bp.sum_tauinv_k)
             : f_explicit;

  bp.W = Mat::Zero(g.n, g.n);
  bp.Winv = Mat::Zero(g.n, g.n);
  bp.Wstar = Mat::Zero(g.n, g.n);
  bp.Wstarinv = Mat::Zero(g.n, g.n);
  for (int i = 0; i < m; ++i) {
    bp.W += bp.f * p.tau[i] * s.E[i].cast<cx>();
    bp.Winv += (1.0 / (bp.f * p.tau[i])) * s.E[i].cast<cx>();
    bp.Wstar += bp.f * p.tau[i] * d.Estar[i].cast<cx>();
    bp.Wstarinv += (1.0 / (bp.f * p.tau[i])) * d.Estar[i].cast<cx>();
  }
  return bp;
}

ResidualMap verify_intertwiners(const BoltzmannPair& bp, const AbcTriple& t,
                                const QRacahParams& p) {
  ResidualMap out;
  out.set("intertwine_W", mat_residual(bp.Winv * t.B * bp.W, t.C));
  out.set("intertwine_Wstar", mat_residual(bp.Wstar * t.A * bp.Wstarinv, t.C));
  double ratio = 0.0;
  for (int i = 1; i <= p.D; ++i)
    ratio = std::max(ratio,
                     rel_residual(p.tau[i] / p.tau[i - 1],
                                  -qpow(p.q, p.D - 2 * i + 1) / p.a));
  out.set("coefficient_ratio", ratio);
  return out;
}

ResidualMap verify_braid_and_rho(const BoltzmannPair& bp, const AbcTriple& t,
                                 const SpectralData& s,
                                 const DualStructure& d) {
  ResidualMap out;
  out.set("braid", mat_residual(bp.W * bp.Wstar * bp.W, bp.Wstar * bp.W * bp.Wstar));

  const Mat WsW = bp.Wstar * bp.W;
  const Mat WsWinv = bp.Winv * bp.Wstarinv;
  auto rho = [&](const Mat& S) { return WsWinv * S * WsW; };
  out.set("rho_A", mat_residual(rho(t.A), t.B));
  out.set("rho_B", mat_residual(rho(t.B), t.C));
  out.set("rho_C", mat_residual(rho(t.C), t.A));
  out.set("rho_W", mat_residual(rho(bp.W), bp.Wstar));

  double re = 0.0, conj1 = 0.0, conj2 = 0.0;
  for (int i = 0; i <= s.D; ++i) {
    const Mat Ei = s.E[i].cast<cx>();
    const Mat Fi = d.Estar[i].cast<cx>();
    re = std::max(re, mat_residual(rho(Ei), Fi));
    conj1 = std::max(conj1, mat_residual(bp.W * Fi * bp.Winv,
                                         bp.Wstarinv * Ei * bp.Wstar));
    conj2 = std::max(conj2, mat_residual(bp.Winv * Fi * bp.W,
                                         bp.Wstar * Ei * bp.Wstarinv));
  }
  out.set("rho_E", re);
  out.set("conjugation", std::max(conj1, conj2));
  return out;
}

ResidualMap verify_type2_and_expansions(const BoltzmannPair& bp, const Graph& g,
                                        const DualStructure& d) {
  const int n = g.n;
  ResidualMap out;

  const Mat J = Mat::Constant(n, n, 1.0);
  out.set("type2", mat_residual(bp.W.transpose().cwiseProduct(bp.Winv),
                                J / static_cast<double>(n)));
  out.set("hadamard_inverse",
          mat_residual(bp.W * wminus(bp.W),
                       static_cast<double>(n) * Mat::Identity(n, n)));
  out.set("valency_product",
          rel_residual(bp.sum_tau_k * bp.sum_tauinv_k, cx(n)));

  // Distance-matrix expansions of W, W^-1, W*, (W*)^-1.
  std::vector<Mat> A(g.D + 1, Mat::Zero(n, n));
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) A[g.dist(y, z)](y, z) = 1.0;

  Mat expW = Mat::Zero(n, n), expWinv = Mat::Zero(n, n);
  Mat expWs = Mat::Zero(n, n), expWsinv = Mat::Zero(n, n);
  const std::vector<cx>& tau = bp.tau;
  for (int i = 0; i <= g.D; ++i) {
    expW += (bp.f / tau[i] / bp.sum_tauinv_k) * A[i];
    expWinv += (tau[i] / bp.f / bp.sum_tau_k) * A[i];
    expWs += (bp.f / tau[i] / bp.sum_tauinv_k) * d.Astar[i].cast<cx>();
    expWsinv += (tau[i] / bp.f / bp.sum_tau_k) * d.Astar[i].cast<cx>();
  }
  out.set("expansion_W", mat_residual(bp.W, expW));
  out.set("expansion_Winv", mat_residual(bp.Winv, expWinv));
  out.set("expansion_Wstar", mat_residual(bp.Wstar, expWs));
  out.set("expansion_Wstarinv", mat_residual(bp.Wstarinv, expWsinv));

  // Entry formulas at the base vertex.
  double entry = 0.0;
  for (int y = 0; y < n; ++y) {
    const int ell = g.dist(d.x, y);
    entry = std::max(
        entry, rel_residual(bp.W(d.x, y), bp.f / tau[ell] / bp.sum_tauinv_k));
    entry = std::max(entry, rel_residual(bp.Wstar(y, y), bp.f * tau[ell]));
    entry = std::max(entry,
                     rel_residual(bp.W(d.x, y) * bp.Wstar(y, y),
                                  bp.f * bp.f / bp.sum_tauinv_k));
  }
  out.set("entry_formulas", entry);

  const double min_entry = bp.W.cwiseAbs().minCoeff();
  out.set("nonzero_entries",
          min_entry > 1e-10 * (1.0 + bp.W.norm() / n) ? 0.0 : 1.0);
  return out;
}

Mat wminus(const Mat& W) {
  const int n = static_cast<int>(W.rows());
  Mat out(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = 1.0 / W(b, a);
  return out;
}

double type3_max_residual(const Mat& W) {
  const int n = static_cast<int>(W.rows());
  return type3_with_scale(W, std::sqrt(static_cast<double>(n)));
}

double type3_max_residual_serial(const Mat& W) {
  const int n = static_cast<int>(W.rows());
  const cx scale = std::sqrt(static_cast<double>(n));
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        worst = std::max(worst, triple_residual(W, scale, a, b, c));
  return worst;
}

double type3_scaled_max_residual(const Mat& W, cx scale) {
  return type3_with_scale(W, scale);
}

namespace {

double nomura_pair_residual(const Mat& W, const std::vector<Mat>& A, int b,
                            int c) {
  const int n = static_cast<int>(W.rows());
  Vec u(n);
  for (int y = 0; y < n; ++y) u(y) = W(y, b) / W(y, c);
  const double unorm = u.norm();
  double worst = 0.0;
  for (const Mat& Ai : A) {
    Vec v = Ai * u;
    const cx lambda = u.dot(v) / u.dot(u);  // Rayleigh quotient
    worst = std::max(worst, (v - lambda * u).norm() / unorm);
  }
  return worst;
}

}  // namespace

double nomura_max_residual(const Mat& W, const Graph& g) {
  const int n = g.n;
  std::vector<Mat> A(g.D + 1, Mat::Zero(n, n));
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) A[g.dist(y, z)](y, z) = 1.0;
  double worst = 0.0;
#pragma omp parallel for collapse(2) reduction(max : worst) schedule(static)
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      worst = std::max(worst, nomura_pair_residual(W, A, b, c));
  return worst;
}

double nomura_max_residual_serial(const Mat& W, const Graph& g) {
  const int n = g.n;
  std::vector<Mat> A(g.D + 1, Mat::Zero(n, n));
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) A[g.dist(y, z)](y, z) = 1.0;
  double worst = 0.0;
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      worst = std::max(worst, nomura_pair_residual(W, A, b, c));
  return worst;
}

SpinVerdict spin_verdict(const Mat& W, const Graph& g, cx scale,
                         bool brute_force_type3, double tol) {
  SpinVerdict v;
  const int n = g.n;
  v.residuals.set("symmetry", mat_residual(W, W.transpose()));

  const Mat Wm = wminus(W);
  v.residuals.set("type2",
                  mat_residual(W * Wm, static_cast<double>(n) * Mat::Identity(n, n)));

  if (brute_force_type3) {
    v.residuals.set("type3_max", type3_max_residual(W));
    v.residuals.set("type3_scaled", type3_scaled_max_residual(W, scale));
  } else {
    v.residuals.skip("type3_max", "brute force disabled (n > cap or flag)");
    v.residuals.skip("type3_scaled", "brute force disabled (n > cap or flag)");
  }

  v.residuals.set("nomura_max", nomura_max_residual(W, g));

  const Check* sym = v.residuals.find("symmetry");
  const Check* t2 = v.residuals.find("type2");
  const Check* t3 = v.residuals.find("type3_max");
  v.is_spin_model = sym->value < tol && t2->value < tol &&
                    (t3->skipped || t3->value < tol);
  v.is_afforded = v.residuals.find("nomura_max")->value < tol;
  return v;
}

}  // namespace drgspin
