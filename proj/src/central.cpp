#include "drgspin/central.hpp"

#include <Eigen/Eigenvalues>

namespace drgspin {

namespace {

Mat shifted_adjacency(const RMat& A, const QRacahParams& p) {
  const int n = static_cast<int>(A.rows());
  return (A.cast<cx>() - p.epsilon * Mat::Identity(n, n)) / p.alpha;
}

}  // namespace

CentralElement build_Z(const Graph& g, const SpectralData& s,
                       const DualStructure& d, const QRacahParams& p,
                       double tol) {
  const int m = g.D + 1;
  const cx qq = p.q + 1.0 / p.q;
  const Mat sA = shifted_adjacency(g.adjacency.cast<double>(), p);
  const Mat sB = shifted_adjacency(d.AstarMat, p);

  Mat lhs = Mat::Zero(g.n, g.n), rhs = Mat::Zero(g.n, g.n);
  for (int i = 0; i < m; ++i) {
    const cx w = 1.0 + p.vartheta[i] / qq;
    lhs += d.Estar[i].cast<cx>() * sA * d.Estar[i].cast<cx>() * w;
    rhs += s.E[i].cast<cx>() * sB * s.E[i].cast<cx>() * w;
  }

  CentralElement z;
  z.gate_residual = mat_residual(lhs, rhs);
  z.dominant_side = lhs.norm() >= rhs.norm() ? "dual-shell side" : "idempotent side";
  if (z.gate_residual > tol)
    throw Error(ErrorCode::AssumptionFails,
                "the two projected sums differ, residual " +
                    std::to_string(z.gate_residual) + " (larger: " +
                    z.dominant_side + ")");
  z.Z = (lhs + rhs) / 2.0;

  z.z_on_E.resize(m);
  z.z_on_Estar.resize(m);
  for (int i = 0; i < m; ++i) {
    const cx w = 1.0 + p.vartheta[i] / qq;
    const Mat Ei = s.E[i].cast<cx>();
    const Mat Fi = d.Estar[i].cast<cx>();
    z.z_on_E[i] = std::max(mat_residual(z.Z * Ei, Ei * sB * Ei * w),
                           mat_residual(Ei * z.Z, Ei * sB * Ei * w));
    z.z_on_Estar[i] = std::max(mat_residual(z.Z * Fi, Fi * sA * Fi * w),
                               mat_residual(Fi * z.Z, Fi * sA * Fi * w));
  }
  return z;
}

AbcTriple build_abc(const Graph& g, const SpectralData& s,
                    const DualStructure& d, const QRacahParams& p,
                    const Mat& Z, ResidualMap* extra) {
  AbcTriple t;
  t.A = shifted_adjacency(g.adjacency.cast<double>(), p);
  t.B = shifted_adjacency(d.AstarMat, p);
  const cx q = p.q;
  const cx denom = q * q - 1.0 / (q * q);
  t.C = Z - (q * t.A * t.B - t.B * t.A / q) / denom;

  if (extra) {
    Mat sumA = Mat::Zero(g.n, g.n), sumB = Mat::Zero(g.n, g.n);
    for (int i = 0; i <= g.D; ++i) {
      sumA += p.vartheta[i] * s.E[i].cast<cx>();
      sumB += p.vartheta[i] * d.Estar[i].cast<cx>();
    }
    extra->set("abc_expansion_A", mat_residual(t.A, sumA));
    extra->set("abc_expansion_B", mat_residual(t.B, sumB));
  }
  return t;
}

ResidualMap verify_askey_wilson(const AbcTriple& t, const Mat& Z,
                                const QRacahParams& p) {
  const cx q = p.q;
  const cx denom = q * q - 1.0 / (q * q);
  const cx beta = p.beta;
  ResidualMap out;

  out.set("z3_A", mat_residual(t.A + (q * t.B * t.C - t.C * t.B / q) / denom, Z));
  out.set("z3_B", mat_residual(t.B + (q * t.C * t.A - t.A * t.C / q) / denom, Z));
  out.set("z3_C", mat_residual(t.C + (q * t.A * t.B - t.B * t.A / q) / denom, Z));

  const cx d2 = denom * denom;
  const cx lin = (q - 1.0 / q) * denom;
  out.set("degree3_A",
          mat_residual(t.A * t.A * t.B - beta * t.A * t.B * t.A + t.B * t.A * t.A +
                           d2 * t.B,
                       d2 * Z - lin * Z * t.A));
  out.set("degree3_B",
          mat_residual(t.B * t.B * t.A - beta * t.B * t.A * t.B + t.A * t.B * t.B +
                           d2 * t.A,
                       d2 * Z - lin * Z * t.B));
  return out;
}

double centrality_residual(const Mat& Z, const Graph& g, const SpectralData& s,
                           const DualStructure& d) {
  double r = 0.0;
  auto comm = [&](const Mat& S) {
    const double norm = S.norm();
    r = std::max(r, (Z * S - S * Z).norm() / ((1.0 + Z.norm()) * (1.0 + norm)));
  };
  comm(g.adjacency.cast<double>().cast<cx>());
  comm(d.AstarMat.cast<cx>());
  for (int i = 0; i <= g.D; ++i) {
    comm(s.E[i].cast<cx>());
    comm(d.Estar[i].cast<cx>());
  }
  return r;
}

std::vector<ZSpectrumEntry> z_spectrum_check(const Mat& Z,
                                             const QRacahParams& p) {
  const int n = static_cast<int>(Z.rows());
  Eigen::ComplexEigenSolver<Mat> solver(Z);
  std::vector<cx> eig(solver.eigenvalues().data(),
                      solver.eigenvalues().data() + n);
  std::sort(eig.begin(), eig.end(), [](cx x, cx y) {
    if (std::abs(x.real() - y.real()) > 1e-12) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  std::vector<ZSpectrumEntry> out;
  const double cluster_gap = 1e-7 * (1.0 + Z.norm());
  for (const cx& ev : eig) {
    if (!out.empty() && std::abs(ev - out.back().eigenvalue) < cluster_gap) {
      ++out.back().multiplicity;
      continue;
    }
    ZSpectrumEntry e;
    e.eigenvalue = ev;
    e.multiplicity = 1;
    out.push_back(e);
  }

  const cx q = p.q, a = p.a;
  const cx qq = q + 1.0 / q;
  for (auto& e : out) {
    e.mismatch = std::numeric_limits<double>::infinity();
    for (int r = 0; r <= p.D; ++r)
      for (int dd = 0; r + dd <= p.D; ++dd) {
        if (2 * r + dd < p.D) continue;
        const cx phi = a * qpow(q, 2 * r + dd - p.D) +
                       qpow(q, p.D - dd - 2 * r) / a;
        const cx predicted =
            (phi * (qpow(q, dd + 1) + qpow(q, -dd - 1)) + phi * phi) / qq;
        const double dist = std::abs(predicted - e.eigenvalue) /
                            std::max(1.0, std::abs(e.eigenvalue));
        if (dist < e.mismatch) {
          e.mismatch = dist;
          e.r = r;
          e.d = dd;
        }
      }
    e.matched = e.mismatch < 1e-6;
    if (!e.matched) {
      e.r = -1;
      e.d = -1;
    }
  }
  return out;
}

}  // namespace drgspin
