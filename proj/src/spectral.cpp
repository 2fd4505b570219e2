#include "drgspin/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace drgspin {

namespace {

std::vector<RMat> distance_matrices(const Graph& g) {
  std::vector<RMat> A(g.D + 1, RMat::Zero(g.n, g.n));
  for (int y = 0; y < g.n; ++y)
    for (int z = 0; z < g.n; ++z) A[g.dist(y, z)](y, z) = 1.0;
  return A;
}

}  // namespace

SpectralData eigendecompose(const Graph& g) {
  SpectralData s;
  s.n = g.n;
  s.D = g.D;

  RMat A = g.adjacency.cast<double>();
  Eigen::SelfAdjointEigenSolver<RMat> solver(A);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::EigCountMismatch, "eigensolver failed to converge");
  RVec raw = solver.eigenvalues();  // ascending

  const double radius = std::max(1.0, std::abs(raw(0)));
  const double gap = 1e-7 * radius;
  std::vector<double> clusters;
  std::vector<int> mult;
  for (int i = g.n - 1; i >= 0; --i) {  // descending
    if (clusters.empty() || std::abs(raw(i) - clusters.back()) > gap) {
      clusters.push_back(raw(i));
      mult.push_back(1);
    } else {
      // Running mean keeps the cluster representative centered.
      clusters.back() += (raw(i) - clusters.back()) / (++mult.back());
    }
  }
  if (static_cast<int>(clusters.size()) != g.D + 1)
    throw Error(ErrorCode::EigCountMismatch,
                "found " + std::to_string(clusters.size()) +
                    " eigenvalue clusters, expected " + std::to_string(g.D + 1));

  s.theta = RVec(g.D + 1);
  for (int i = 0; i <= g.D; ++i) s.theta(i) = clusters[i];

  // E_i = prod_{j != i} (A - theta_j I) / (theta_i - theta_j); this keeps
  // each idempotent inside the Bose-Mesner algebra by construction.
  s.E.assign(g.D + 1, RMat());
  const RMat I = RMat::Identity(g.n, g.n);
  for (int i = 0; i <= g.D; ++i) {
    RMat Ei = I;
    for (int j = 0; j <= g.D; ++j) {
      if (j == i) continue;
      Ei = Ei * (A - s.theta(j) * I) / (s.theta(i) - s.theta(j));
    }
    s.E[i] = Ei;
  }
  return s;
}

void krein_and_eigenmatrices(const Graph& g, SpectralData& s) {
  const int m = g.D + 1;
  const auto A = distance_matrices(g);

  s.kstar.resize(m);
  for (int i = 0; i < m; ++i) s.kstar[i] = std::llround(s.E[i].trace());

  s.P = RMat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      s.P(i, j) = (s.E[i] * A[j]).trace() / static_cast<double>(s.kstar[i]);

  Eigen::FullPivLU<RMat> lu(s.P);
  if (!lu.isInvertible())
    throw Error(ErrorCode::SingularP, "first eigenmatrix is singular");
  s.Q = static_cast<double>(g.n) * lu.inverse();

  // q^h_{i,j} = n tr(E_h (E_i o E_j)) / tr(E_h).
  s.krein.assign(static_cast<size_t>(m) * m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      RMat had = s.E[i].cwiseProduct(s.E[j]);
      for (int h = 0; h < m; ++h) {
        double v = g.n * (s.E[h].cwiseProduct(had)).sum() /
                   static_cast<double>(s.kstar[h]);
        s.krein[(static_cast<size_t>(h) * m + i) * m + j] = v;
        s.krein[(static_cast<size_t>(h) * m + j) * m + i] = v;
      }
    }
}

namespace {

bool has_qpoly_pattern(const SpectralData& s, const std::vector<int>& perm,
                       double thr) {
  const int m = s.D + 1;
  for (int h = 0; h < m; ++h)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double v = std::abs(s.qnum(perm[h], perm[i], perm[j]));
        const bool above = h > i + j || i > h + j || j > h + i;
        const bool equal = h == i + j || i == h + j || j == h + i;
        if (above && v > thr) return false;
        if (equal && v <= thr) return false;
      }
  return true;
}

}  // namespace

QPolyOrdering check_self_dual(const SpectralData& s, std::vector<int> perm,
                              double tol) {
  const int m = s.D + 1;
  QPolyOrdering o;
  o.perm = std::move(perm);

  double max_abs = 0.0;
  for (double v : s.krein) max_abs = std::max(max_abs, std::abs(v));
  o.is_q_poly = has_qpoly_pattern(s, o.perm, 1e-6 * (1.0 + max_abs));

  double pmax = 0.0, diff = 0.0, tdiff = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      pmax = std::max(pmax, std::abs(s.P(i, j)));
      diff = std::max(diff, std::abs(s.P(o.perm[i], j) - s.Q(i, o.perm[j])));
    }
  for (int i = 0; i < m; ++i)
    tdiff = std::max(tdiff, std::abs(s.P(o.perm[i], 1) - s.Q(i, o.perm[1])));
  o.pq_residual = diff / (1.0 + pmax);
  o.theta_star_residual = tdiff / (1.0 + pmax);
  o.formally_self_dual = o.is_q_poly && o.pq_residual < tol;
  return o;
}

std::vector<QPolyOrdering> find_qpoly_orderings(const SpectralData& s,
                                                double tol) {
  const int m = s.D + 1;
  double max_abs = 0.0;
  for (double v : s.krein) max_abs = std::max(max_abs, std::abs(v));
  const double thr = 1e-6 * (1.0 + max_abs);

  // perm[0] = 0 is fixed. Once perm[1] = cand is chosen, the tridiagonal
  // support of q^h_{cand, .} forces the rest of the chain; any ambiguity
  // kills the candidate before the full pattern check.
  std::vector<QPolyOrdering> out;
  for (int cand = 1; cand < m; ++cand) {
    std::vector<int> perm{0, cand};
    std::vector<bool> used(m, false);
    used[0] = used[cand] = true;
    bool ok = true;
    while (static_cast<int>(perm.size()) < m && ok) {
      const int prev = perm.back();
      int next = -1;
      for (int h = 0; h < m; ++h) {
        if (used[h] || std::abs(s.qnum(h, cand, prev)) <= thr) continue;
        if (next >= 0) {
          ok = false;
          break;
        }
        next = h;
      }
      if (next < 0) ok = false;
      if (ok) {
        perm.push_back(next);
        used[next] = true;
      }
    }
    if (!ok || !has_qpoly_pattern(s, perm, thr)) continue;
    out.push_back(check_self_dual(s, perm, tol));
  }
  std::sort(out.begin(), out.end(),
            [](const QPolyOrdering& x, const QPolyOrdering& y) {
              return x.perm < y.perm;
            });
  return out;
}

SpectralData reorder(const SpectralData& s, const std::vector<int>& perm) {
  const int m = s.D + 1;
  SpectralData r;
  r.n = s.n;
  r.D = s.D;
  r.theta = RVec(m);
  r.E.resize(m);
  r.kstar.resize(m);
  r.P = RMat(m, m);
  r.Q = RMat(m, m);
  for (int i = 0; i < m; ++i) {
    r.theta(i) = s.theta(perm[i]);
    r.E[i] = s.E[perm[i]];
    r.kstar[i] = s.kstar[perm[i]];
    for (int j = 0; j < m; ++j) {
      r.P(i, j) = s.P(perm[i], j);
      r.Q(i, j) = s.Q(i, perm[j]);
    }
  }
  r.krein.assign(static_cast<size_t>(m) * m * m, 0.0);
  for (int h = 0; h < m; ++h)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.krein[(static_cast<size_t>(h) * m + i) * m + j] =
            s.qnum(perm[h], perm[i], perm[j]);
  return r;
}

}  // namespace drgspin
