#include "drgspin/dual.hpp"

#include <Eigen/SVD>

namespace drgspin {

namespace {

RMat distance_matrix(const Graph& g, int i) {
  RMat A = RMat::Zero(g.n, g.n);
  for (int y = 0; y < g.n; ++y)
    for (int z = 0; z < g.n; ++z)
      if (g.dist(y, z) == i) A(y, z) = 1.0;
  return A;
}

// Numerical rank of the span of the given matrices, vectorized as rows.
// Rows are normalized so the decision is scale-free.
int span_rank(const std::vector<RMat>& mats) {
  if (mats.empty()) return 0;
  const int cols = static_cast<int>(mats[0].size());
  RMat stack(static_cast<int>(mats.size()), cols);
  for (size_t r = 0; r < mats.size(); ++r) {
    RVec row = Eigen::Map<const RVec>(mats[r].data(), cols);
    const double norm = row.norm();
    stack.row(static_cast<int>(r)) = (norm > 0 ? row / norm : row).transpose();
  }
  Eigen::JacobiSVD<RMat> svd(stack);
  const auto& sv = svd.singularValues();
  const double thr = 1e-9 * std::max(1.0, sv(0));
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++rank;
  return rank;
}

}  // namespace

DualStructure dual_structure(const Graph& g, const SpectralData& s, int x,
                             double tol) {
  const int m = g.D + 1;
  DualStructure d;
  d.x = x;
  d.Estar.assign(m, RMat::Zero(g.n, g.n));
  d.Astar.assign(m, RMat::Zero(g.n, g.n));
  for (int y = 0; y < g.n; ++y) d.Estar[g.dist(x, y)](y, y) = 1.0;
  for (int i = 0; i < m; ++i)
    for (int y = 0; y < g.n; ++y) d.Astar[i](y, y) = g.n * s.E[i](x, y);
  d.AstarMat = d.Astar[1];

  // Same matrices by the eigenmatrix route: A*_j = sum_i Q_ij E*_i and
  // E*_j = n^-1 sum_i P_ij A*_i.
  double resid = 0.0;
  for (int j = 0; j < m; ++j) {
    RMat astar = RMat::Zero(g.n, g.n);
    RMat estar = RMat::Zero(g.n, g.n);
    for (int i = 0; i < m; ++i) {
      astar += s.Q(i, j) * d.Estar[i];
      estar += s.P(i, j) * d.Astar[i];
    }
    estar /= g.n;
    resid = std::max(resid, mat_residual(astar, d.Astar[j]));
    resid = std::max(resid, mat_residual(estar, d.Estar[j]));
  }
  d.construction_residual = resid;
  if (resid > tol)
    throw Error(ErrorCode::ToleranceExceeded,
                "dual matrices disagree between constructions, residual " +
                    std::to_string(resid));
  return d;
}

ResidualMap verify_dual_identities(const Graph& g, const SpectralData& s,
                                   const DualStructure& d) {
  const int m = g.D + 1;
  const int n = g.n;
  ResidualMap out;

  std::vector<RMat> A(m);
  for (int i = 0; i < m; ++i) A[i] = distance_matrix(g, i);

  out.set("construction", d.construction_residual);

  {  // A*_0 = I and sum_i A*_i = n E*_0
    out.set("astar0", mat_residual(d.Astar[0], RMat::Identity(n, n)));
    RMat sum = RMat::Zero(n, n);
    for (int i = 0; i < m; ++i) sum += d.Astar[i];
    out.set("astar_sum", mat_residual(sum, double(n) * d.Estar[0]));
  }

  {  // A*_i A*_j = sum_h q^h_{ij} A*_h
    double r = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        RMat rhs = RMat::Zero(n, n);
        for (int h = 0; h < m; ++h) rhs += s.qnum(h, i, j) * d.Astar[h];
        r = std::max(r, mat_residual(d.Astar[i] * d.Astar[j], rhs));
      }
    out.set("astar_algebra", r);
  }

  // E*_h A_i E*_j = 0 iff p^h_{ij} = 0, and the dual statement.
  {
    double zero_max = 0.0;
    double nz_min = std::numeric_limits<double>::infinity();
    std::vector<RMat> nonzero;
    for (int h = 0; h < m; ++h)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          RMat prod = d.Estar[h] * A[i] * d.Estar[j];
          const double norm = prod.norm() / n;
          if (g.pnum(h, i, j) == 0) {
            zero_max = std::max(zero_max, norm);
          } else {
            nz_min = std::min(nz_min, norm);
            nonzero.push_back(std::move(prod));
          }
        }
    out.set("triple_vanishing", zero_max);
    out.set("triple_nonvanishing_pattern", nz_min > 1e-6 ? 0.0 : 1.0);
    out.set("triple_independent",
            span_rank(nonzero) == static_cast<int>(nonzero.size()) ? 0.0 : 1.0);
  }
  {
    double max_abs = 0.0;
    for (double v : s.krein) max_abs = std::max(max_abs, std::abs(v));
    const double thr = 1e-6 * (1.0 + max_abs);
    double zero_max = 0.0;
    double nz_min = std::numeric_limits<double>::infinity();
    std::vector<RMat> nonzero;
    for (int h = 0; h < m; ++h)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          RMat prod = s.E[h] * d.Astar[i] * s.E[j];
          const double norm = prod.norm() / n;
          if (std::abs(s.qnum(h, i, j)) <= thr) {
            zero_max = std::max(zero_max, norm);
          } else {
            nz_min = std::min(nz_min, norm);
            nonzero.push_back(std::move(prod));
          }
        }
    out.set("dual_triple_vanishing", zero_max);
    out.set("dual_triple_nonvanishing_pattern", nz_min > 1e-6 ? 0.0 : 1.0);
    out.set("dual_triple_independent",
            span_rank(nonzero) == static_cast<int>(nonzero.size()) ? 0.0 : 1.0);
  }

  // Reduction identities through E_0 and E*_0.
  {
    double r = 0.0;
    const RMat& E0 = s.E[0];
    const RMat& F0 = d.Estar[0];
    for (int i = 0; i < m; ++i) {
      r = std::max(r, mat_residual(E0 * F0 * A[i], E0 * d.Estar[i]));
      r = std::max(r, mat_residual(F0 * E0 * d.Estar[i], (F0 * A[i]) / n));
      r = std::max(r, mat_residual(A[i] * F0 * E0, d.Estar[i] * E0));
      r = std::max(r, mat_residual(d.Estar[i] * E0 * F0, (A[i] * F0) / n));
      r = std::max(r, mat_residual(F0 * E0 * d.Astar[i], F0 * s.E[i]));
      r = std::max(r, mat_residual(E0 * F0 * s.E[i], (E0 * d.Astar[i]) / n));
      r = std::max(r, mat_residual(d.Astar[i] * E0 * F0, s.E[i] * F0));
      r = std::max(r, mat_residual(s.E[i] * F0 * E0, (d.Astar[i] * E0) / n));
    }
    out.set("reduction", r);

    double r5 = 0.0;
    for (int i = 0; i < m; ++i) {
      r5 = std::max(r5, mat_residual(E0 * d.Estar[i] * E0,
                                     (double(g.k[i]) / n) * E0));
      r5 = std::max(r5, mat_residual(F0 * s.E[i] * F0,
                                     (double(s.kstar[i]) / n) * F0));
    }
    out.set("shell_weight", r5);
    out.set("e0_sandwich",
            std::max(mat_residual(E0 * F0 * E0, E0 / n),
                     mat_residual(F0 * E0 * F0, F0 / n)));
  }

  // S = 0 iff S E*_0 = 0 iff E*_0 S = 0 for S in M (and dually): the
  // multiplication maps have trivial kernel exactly when these spans have
  // full rank D+1.
  {
    std::vector<RMat> f1, f2, f3, f4;
    for (int i = 0; i < m; ++i) {
      f1.push_back(A[i] * d.Estar[0]);
      f2.push_back(d.Estar[0] * A[i]);
      f3.push_back(d.Astar[i] * s.E[0]);
      f4.push_back(s.E[0] * d.Astar[i]);
    }
    const bool ok = span_rank(f1) == m && span_rank(f2) == m &&
                    span_rank(f3) == m && span_rank(f4) == m;
    out.set("kill_implication_rank", ok ? 0.0 : 1.0);
  }

  // Tridiagonal relations; the scalars come from the eigenvalue sequences.
  {
    const RVec& th = s.theta;
    RVec ths(m);
    for (int i = 0; i < m; ++i) ths(i) = s.Q(i, 1);
    const double beta =
        (th(0) - th(3)) / (th(1) - th(2)) - 1.0;
    const double gamma = th(0) - beta * th(1) + th(2);
    const double gammas = ths(0) - beta * ths(1) + ths(2);
    const double rho =
        th(0) * th(0) - beta * th(0) * th(1) + th(1) * th(1) - gamma * (th(0) + th(1));
    const double rhos = ths(0) * ths(0) - beta * ths(0) * ths(1) + ths(1) * ths(1) -
                        gammas * (ths(0) + ths(1));

    const RMat Am = A[1];
    const RMat As = d.AstarMat;
    auto bracket = [](const RMat& X, const RMat& Y) { return X * Y - Y * X; };
    RMat t1 = bracket(Am, Am * Am * As - beta * Am * As * Am + As * Am * Am -
                              gamma * (Am * As + As * Am) - rho * As);
    RMat t2 = bracket(As, As * As * Am - beta * As * Am * As + Am * As * As -
                              gammas * (As * Am + Am * As) - rhos * Am);
    const double scale1 = std::pow(Am.norm() + As.norm(), 3) + 1.0;
    out.set("tridiagonal", t1.norm() / scale1);
    out.set("tridiagonal_dual", t2.norm() / scale1);
  }

  // theta*_i as the eigenvalue of A* on E*_i, and A* generating M*.
  {
    double r = 0.0;
    for (int i = 0; i < m; ++i)
      r = std::max(r, mat_residual(d.AstarMat * d.Estar[i],
                                   s.Q(i, 1) * d.Estar[i]));
    out.set("astar_eigenvalues", r);

    std::vector<RMat> powers;
    RMat power = RMat::Identity(n, n);
    for (int j = 0; j < m; ++j) {
      powers.push_back(power);
      power = power * d.AstarMat;
    }
    out.set("astar_generates", span_rank(powers) == m ? 0.0 : 1.0);
  }

  return out;
}

}  // namespace drgspin
