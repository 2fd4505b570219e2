#include "drgspin/qracah.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace drgspin {

namespace {

constexpr double kNearZero = 1e-9;

cx ainv(cx a) { return 1.0 / a; }

cx a1_closed_form(int D, cx q, cx a) {
  const cx ai = 1.0 / a;
  return (a + ai) * (1.0 - a * qpow(q, 1 - D)) * (1.0 + a * qpow(q, D + 1)) *
         (a * qpow(q, 2 - D) - ai * qpow(q, D - 2)) /
         ((1.0 + a * qpow(q, 3 - D)) * (1.0 - a * qpow(q, D - 1)) *
          (a * q - ai / q));
}

}  // namespace

QRacahParams make_params(int D, cx q, cx a, cx alpha, cx epsilon) {
  QRacahParams p;
  p.D = D;
  p.q = q;
  p.a = a;
  p.alpha = alpha;
  p.epsilon = epsilon;
  p.vartheta.resize(D + 1);
  p.tau.resize(D + 1);
  for (int i = 0; i <= D; ++i) {
    p.vartheta[i] = a * qpow(q, 2 * i - D) + ainv(a) * qpow(q, D - 2 * i);
    p.tau[i] = ((i % 2) ? -1.0 : 1.0) * qpow(ainv(a), i) *
               qpow(q, static_cast<long>(i) * (D - i));
  }
  const cx qi = 1.0 / q;
  p.beta = q * q + qi * qi;
  p.gamma = -epsilon * (q - qi) * (q - qi);
  p.varrho = (q - qi) * (q - qi) * epsilon * epsilon -
             (q * q - qi * qi) * (q * q - qi * qi) * alpha * alpha;
  p.admissible = admissibility_margin(D, q, a) > kNearZero &&
                 std::abs(a) > kNearZero && std::abs(alpha) > kNearZero;
  p.bipartite = std::abs(a * a + 1.0) < 1e-7 * (1.0 + std::norm(a));
  p.almost_bipartite =
      std::abs(a + qpow(q, -D - 1)) < 1e-7 * (1.0 + std::abs(a));
  return p;
}

double admissibility_margin(int D, cx q, cx a) {
  double m = std::numeric_limits<double>::infinity();
  auto visit = [&](cx expr) { m = std::min(m, std::abs(expr - 1.0)); };
  for (int i = 1; i <= std::max(D, 2); ++i) visit(qpow(q, 2 * i));
  for (int i = 1 - D; i <= D - 1; ++i) visit(a * a * qpow(q, 2 * i));
  for (int i = 1; i <= D; ++i) visit(a * a * a * qpow(q, 2 * i - D - 1));
  return m;
}

double formula_margin(int D, cx q, cx a) {
  double m = std::numeric_limits<double>::infinity();
  auto visit = [&](cx expr) { m = std::min(m, std::abs(expr - 1.0)); };
  visit(a * a * qpow(q, 2 * D));
  visit(a * a * a * qpow(q, D + 1));
  return m;
}

// Note that (a,q) -> ((-1)^D a, -q) also fixes every vartheta_i, but it
// does not preserve the a^3 constraint family or the closed-form tables,
// so only the inversion map may be used to pick a representative.
std::pair<cx, cx> canonical_branch(int D, cx q, cx a) {
  (void)D;
  const std::pair<cx, cx> reps[2] = {{a, q}, {1.0 / a, 1.0 / q}};
  auto key = [](const std::pair<cx, cx>& r) {
    // Im(q) >= 0 first, then |a| >= 1, then smaller arguments.
    const double im_ok = (r.second.imag() >= -1e-12) ? 0.0 : 1.0;
    double mod = std::abs(r.first);
    if (std::abs(mod - 1.0) < 1e-12) mod = 1.0;
    double arg_a = std::arg(r.first);
    if (std::abs(arg_a - std::numbers::pi) < 1e-12) arg_a = std::numbers::pi;
    return std::make_tuple(im_ok, -mod, std::abs(arg_a), arg_a,
                           std::abs(std::arg(r.second)));
  };
  return key(reps[0]) <= key(reps[1]) ? reps[0] : reps[1];
}

std::vector<QRacahParams> fit_qracah(const std::vector<double>& theta) {
  const int D = static_cast<int>(theta.size()) - 1;
  if (D < 3)
    throw Error(ErrorCode::NotQRacah, "need at least 4 eigenvalues");
  double scale = 0.0;
  for (double t : theta) scale = std::max(scale, std::abs(t));
  for (int i = 0; i <= D; ++i)
    for (int j = i + 1; j <= D; ++j)
      if (std::abs(theta[i] - theta[j]) < 1e-9 * (1.0 + scale))
        throw Error(ErrorCode::NotQRacah, "eigenvalues are not distinct");

  // (theta_{i-2} - theta_{i+1}) / (theta_{i-1} - theta_i) = beta + 1.
  std::vector<double> ratios;
  for (int i = 2; i <= D - 1; ++i)
    ratios.push_back((theta[i - 2] - theta[i + 1]) / (theta[i - 1] - theta[i]));
  double beta1 = 0.0;
  for (double r : ratios) beta1 += r;
  beta1 /= ratios.size();
  for (double r : ratios)
    if (std::abs(r - beta1) > 1e-6 * (1.0 + std::abs(beta1)))
      throw Error(ErrorCode::NotQRacah,
                  "eigenvalue ratio test inconsistent: not a q-Racah sequence");
  const double beta = beta1 - 1.0;

  // q^2 + q^{-2} = beta.
  const cx disc = std::sqrt(cx(beta * beta - 4.0, 0.0));
  const cx roots[2] = {(beta + disc) / 2.0, (beta - disc) / 2.0};

  std::string diag;
  std::vector<QRacahParams> found;
  for (const cx& q2 : roots) {
    if (std::abs(q2 - 1.0) < 1e-8 || std::abs(q2 + 1.0) < 1e-8) {
      std::ostringstream os;
      os << "beta = " << beta << " gives q^2 = " << ((q2.real() > 0) ? 1 : -1)
         << ", which a q-Racah sequence forbids";
      diag = os.str();
      continue;
    }
    const cx q = std::sqrt(q2);

    // Solve theta_i = u q^{2i-D} + v q^{D-2i} + eps from i = 0, 1, 2.
    Mat M(3, 3);
    Vec rhs(3);
    for (int i = 0; i < 3; ++i) {
      M(i, 0) = qpow(q, 2 * i - D);
      M(i, 1) = qpow(q, D - 2 * i);
      M(i, 2) = 1.0;
      rhs(i) = theta[i];
    }
    Eigen::FullPivLU<Mat> lu(M);
    if (!lu.isInvertible()) continue;
    Vec sol = lu.solve(rhs);
    const cx u = sol(0), v = sol(1), eps = sol(2);

    double resid = 0.0;
    for (int i = 0; i <= D; ++i)
      resid = std::max(resid, std::abs(theta[i] - (u * qpow(q, 2 * i - D) +
                                                   v * qpow(q, D - 2 * i) + eps)));
    resid /= 1.0 + scale;
    if (resid > 1e-7) {
      diag = "remaining eigenvalues do not follow the fitted form";
      continue;
    }
    if (std::abs(u * v) < 1e-12 * (1.0 + scale) * (1.0 + scale))
      throw Error(ErrorCode::Degenerate, "u*v = 0 in the eigenvalue fit");

    for (const cx a0 : {std::sqrt(u / v), -std::sqrt(u / v)}) {
      const cx alpha = a0 * v;
      auto [ac, qc] = canonical_branch(D, q, a0);
      QRacahParams p = make_params(D, qc, ac, alpha, eps);
      p.fit_residual = resid;
      if (!p.admissible) continue;
      bool dup = false;
      for (const auto& other : found)
        dup = dup || (std::abs(other.q - p.q) < 1e-9 &&
                      std::abs(other.a - p.a) < 1e-9 &&
                      std::abs(other.alpha - p.alpha) < 1e-9);
      if (!dup) found.push_back(std::move(p));
    }
  }
  if (found.empty())
    throw Error(ErrorCode::NotQRacah,
                diag.empty() ? "no admissible q-Racah parameters" : diag);
  std::sort(found.begin(), found.end(),
            [](const QRacahParams& x, const QRacahParams& y) {
              if (std::abs(x.a.real() - y.a.real()) > 1e-12)
                return x.a.real() > y.a.real();
              return x.a.imag() > y.a.imag();
            });
  return found;
}

AppendixTables scalar_tables(const QRacahParams& p) {
  if (!p.admissible)
    throw Error(ErrorCode::Inadmissible,
                "a closed-form denominator vanishes at these parameters");
  const int D = p.D;
  const cx q = p.q, a = p.a, ai = 1.0 / p.a;
  auto qp = [&](long n) { return qpow(q, n); };

  AppendixTables t;
  t.D = D;
  t.bipartite = p.bipartite;
  t.almost_bipartite = p.almost_bipartite;

  t.alpha_cf = (a * qp(2 - D) - ai * qp(D - 2)) * (a + qp(D - 1)) /
               (qp(D - 1) * (qp(-1) - q) * (a * q - ai * qp(-1)) * (a - qp(1 - D)));
  t.epsilon_cf = q * (a + ai) * (a + qp(-D - 1)) * (a * qp(2 - D) - ai * qp(D - 2)) /
                 ((q - qp(-1)) * (a - qp(1 - D)) * (a * q - ai * qp(-1)));
  t.a1_cf = a1_closed_form(D, q, a);

  const cx alpha = t.alpha_cf;
  t.b.assign(D + 1, 0.0);
  t.c.assign(D + 1, 0.0);
  t.a.assign(D + 1, 0.0);

  t.b[0] = alpha * (qp(-D) - qp(D)) * (a * a * a - qp(D - 1)) / (a * (a + qp(D - 1)));
  for (int i = 1; i <= D - 1; ++i) {
    t.b[i] = alpha * (qp(i - D) - qp(D - i)) * (a * qp(i - D) - ai * qp(D - i)) *
             (a * a * a - qp(D - 2 * i - 1)) /
             (a * (a * qp(2 * i - D) - ai * qp(D - 2 * i)) * (a + qp(D - 2 * i - 1)));
    t.c[i] = alpha * a * (qp(i) - qp(-i)) * (a * qp(i) - ai * qp(-i)) *
             (ai - qp(D - 2 * i + 1)) /
             ((a * qp(2 * i - D) - ai * qp(D - 2 * i)) * (a + qp(D - 2 * i + 1)));
    t.a[i] = alpha * a * (a + ai) * (1.0 + a * qp(D + 1)) * (qp(i) - qp(-i)) *
             (ai * qp(D - i) - a * qp(i - D)) /
             (qp(2 * i - D + 1) * (a + qp(D - 1)) * (a + qp(D - 2 * i - 1)) *
              (a + qp(D - 2 * i + 1)));
  }
  t.c[D] = alpha * (qp(-D) - qp(D)) * (a - qp(D - 1)) / (qp(D - 1) * (a + qp(1 - D)));
  t.a[D] = alpha * a * (ai * ai - a * a) * (qp(D) - qp(-D)) /
           ((a + qp(D - 1)) * (a + qp(1 - D)));

  t.k.assign(D + 1, 1.0);
  t.n_implied = 1.0;
  for (int i = 1; i <= D; ++i) {
    t.k[i] = t.k[i - 1] * t.b[i - 1] / t.c[i];
    t.n_implied += t.k[i];
  }
  return t;
}

LocalGraphScalars local_graph_scalars(const QRacahParams& p) {
  const int D = p.D;
  const cx q = p.q, a = p.a, ai = 1.0 / p.a;
  auto qp = [&](long n) { return qpow(q, n); };
  LocalGraphScalars L;
  L.r = a * (a + ai) * (a * qp(2 - D) - ai * qp(D - 2)) /
        (q * (a - qp(1 - D)) * (a + qp(D - 3)));
  L.s = (1.0 + a * qp(D + 1)) * (ai * qp(D - 2) - a * qp(2 - D)) /
        (qp(2) * (a * q - ai * qp(-1)) * (a + qp(D - 3)));
  L.mult_r = (qp(D - 1) - qp(1 - D)) * (1.0 - a * qp(1 - D)) *
             (1.0 + a * qp(D + 1)) * (a * a * a - qp(D - 1)) /
             (a * (1.0 - a * a * a * qp(D + 1)) * (q - qp(-1)) * (a * q - ai * qp(-1)));
  L.mult_s = qp(D + 1) * (a + ai) * (qp(-D) - qp(D)) * (1.0 - a * qp(1 - D)) *
             (a * a * a - qp(D - 3)) /
             ((q - qp(-1)) * (1.0 - a * qp(D - 1)) * (1.0 - a * a * a * qp(D + 1)));
  return L;
}

cx z_value_raw(const QRacahParams& p, int i) {
  const cx qq = p.q + 1.0 / p.q;
  const cx a1 = a1_closed_form(p.D, p.q, p.a);
  return (a1 * (qq + p.vartheta[i]) +
          p.epsilon * (p.vartheta[i - 1] - p.vartheta[i])) /
         (2.0 * qq + p.vartheta[i - 1] + p.vartheta[i]);
}

cx z_value(const QRacahParams& p, int i) {
  const cx q = p.q, a = p.a;
  const cx a1 = a1_closed_form(p.D, q, a);
  return a1 / (1.0 - a * qpow(q, 1 - p.D)) * (1.0 - qpow(q, 2 - 2 * i)) /
         (1.0 + qpow(q, p.D - 2 * i + 1) / a);
}

cx a1_minus_z(const QRacahParams& p, int i) {
  const cx q = p.q, a = p.a;
  const cx a1 = a1_closed_form(p.D, q, a);
  return a1 * qpow(q, 1 - i) / (1.0 - a * qpow(q, 1 - p.D)) *
         (qpow(q, p.D - i) / a - a * qpow(q, i - p.D)) /
         (1.0 + qpow(q, p.D - 2 * i + 1) / a);
}

cx p2_im1(const QRacahParams& p, const AppendixTables& t, int i) {
  return t.c[i] * (t.a[i] + t.a[i - 1] - t.a[1]) / t.c[2];
}

cx p2_ii(const QRacahParams& p, const AppendixTables& t, int i) {
  (void)p;
  return (t.c[i] * (t.b[i - 1] - 1.0) + t.b[i] * (t.c[i + 1] - 1.0) +
          t.a[i] * (t.a[i] - t.a[1] - 1.0)) /
         t.c[2];
}

cx p2_DD(const QRacahParams& p, const AppendixTables& t) {
  const int D = p.D;
  return (t.c[D] * (t.b[D - 1] - 1.0) + t.a[D] * (t.a[D] - t.a[1] - 1.0)) / t.c[2];
}

cx xi_value(const QRacahParams& p, int i) {
  const cx q = p.q, a = p.a;
  return qpow(q, 2 * i - p.D - 2) * (a + qpow(q, p.D - 2 * i + 1)) *
         (a - qpow(q, p.D - 2 * i + 3)) / (a * (q - 1.0 / q));
}

cx zeta_value(const QRacahParams& p, int i) {
  const cx q = p.q, a = p.a;
  return qpow(q, 2 * i - p.D + 2) * (a + qpow(q, p.D - 2 * i - 1)) *
         (a - qpow(q, p.D - 2 * i - 3)) / (a * (q - 1.0 / q));
}

ResidualMap identity_residuals(const QRacahParams& p) {
  const int D = p.D;
  const cx q = p.q, a = p.a, ai = 1.0 / p.a;
  const cx alpha = p.alpha, eps = p.epsilon, beta = p.beta;
  const cx qq = q + 1.0 / q;
  const cx qm = q - 1.0 / q;
  const cx q2m = q * q - 1.0 / (q * q);
  auto qp = [&](long n) { return qpow(q, n); };
  auto vth = [&](int i) { return a * qp(2 * i - D) + ai * qp(D - 2 * i); };
  auto w = [&](int i) { return 1.0 + vth(i) / qq; };

  const AppendixTables t = scalar_tables(p);
  ResidualMap out;

  // tau_i / tau_{i-1} = -a^{-1} q^{D-2i+1}
  for (int i = 1; i <= D; ++i)
    out.set_max("tau_ratio",
                rel_residual(p.tau[i] / p.tau[i - 1], -ai * qp(D - 2 * i + 1)));

  // vartheta three-term recurrence and quadratic relation
  for (int i = 1; i <= D - 1; ++i)
    out.set_max("theta_recurrence",
                rel_residual(vth(i - 1) - beta * vth(i) + vth(i + 1), cx(0)));
  for (int i = 1; i <= D; ++i)
    out.set_max("theta_quadratic",
                rel_residual(vth(i - 1) * vth(i - 1) - beta * vth(i - 1) * vth(i) +
                                 vth(i) * vth(i),
                             -q2m * q2m));

  // (q vth_i - q^-1 vth_{i-1}) / (q^2 - q^-2) = a q^{2i-D-1}, and partner
  for (int i = 1; i <= D; ++i) {
    out.set_max("eig_ratio_form",
                rel_residual((q * vth(i) - vth(i - 1) / q) / q2m,
                             a * qp(2 * i - D - 1)));
    out.set_max("eig_ratio_form",
                rel_residual((q * vth(i - 1) - vth(i) / q) / q2m,
                             ai * qp(D - 2 * i + 1)));
    out.set_max("eig_ratio_product",
                rel_residual((q * vth(i) - vth(i - 1) / q) / q2m *
                                 ((q * vth(i - 1) - vth(i) / q) / q2m),
                             cx(1)));
  }

  // k = c_i + a_i + b_i for all i
  for (int i = 0; i <= D; ++i)
    out.set_max("valency_closure", rel_residual(t.c[i] + t.a[i] + t.b[i], t.b[0]));

  // epsilon via a_1, and the alpha/epsilon closed forms against the fit
  out.set_max("epsilon_from_a1",
              rel_residual(t.epsilon_cf, t.a1_cf * q * (a + qp(D - 3)) /
                                             (qm * (a - qp(D - 1)))));
  out.set_max("a1_table_match", rel_residual(t.a[1], t.a1_cf));

  // a_{i-1} w_{i-1} = a_i w_i + eps (vth_{i-1} - vth_i)/(q+q^-1)
  for (int i = 1; i <= D; ++i)
    out.set_max("a_recurrence",
                rel_residual(t.a[i - 1] * w(i - 1),
                             t.a[i] * w(i) +
                                 t.epsilon_cf * (vth(i - 1) - vth(i)) / qq));
  // a_i w_i = eps (vth_i - vth_0)/(q+q^-1)
  for (int i = 0; i <= D; ++i)
    out.set_max("a_epsilon_form",
                rel_residual(t.a[i] * w(i),
                             t.epsilon_cf * (vth(i) - vth(0)) / qq));

  // 2(q+q^-1) + vth_{i-1} + vth_i = a^-1 q^{2i-D-1} (q+q^-1)(a+q^{D-2i+1})^2
  for (int i = 1; i <= D; ++i) {
    const cx f = a + qp(D - 2 * i + 1);
    out.set_max("denominator_factorization",
                rel_residual(2.0 * qq + vth(i - 1) + vth(i),
                             ai * qp(2 * i - D - 1) * qq * f * f));
  }

  // five-term diagonal relation: c_i r_- + a_i + b_i r_+ + eps^2
  //   + alpha eps (q+q^-1+vth_i) + (q+q^-1) alpha^2 vth_i = 0
  for (int i = 0; i <= D; ++i) {
    const cx rm = (2.0 * vth(i) - beta * vth(i - 1)) / (qm * q2m);
    const cx rp = (2.0 * vth(i) - beta * vth(i + 1)) / (qm * q2m);
    const cx terms[6] = {i > 0 ? t.c[i] * rm : cx(0),
                         t.a[i],
                         i < D ? t.b[i] * rp : cx(0),
                         eps * eps,
                         alpha * eps * (qq + vth(i)),
                         qq * alpha * alpha * vth(i)};
    cx lhs = 0.0;
    double scale = 0.0;
    for (const cx& term : terms) {
      lhs += term;
      scale += std::abs(term);
    }
    out.set_max("five_term_diagonal", rel_residual_scaled(lhs, cx(0), scale));
  }

  // xi_i and zeta_i against their defining quotients
  for (int i = 2; i <= D - 1; ++i) {
    const cx rm = (2.0 * vth(i) - beta * vth(i - 1)) / (qm * q2m);
    const cx rp = (2.0 * vth(i) - beta * vth(i + 1)) / (qm * q2m);
    out.set_max("xi_zeta_form", rel_residual(rm - 1.0, xi_value(p, i)));
    out.set_max("xi_zeta_form", rel_residual(rp - 1.0, -zeta_value(p, i)));
  }

  // p^i_{2,i-1} table value against the factored expansion
  for (int i = 2; i <= D; ++i) {
    cx big;
    if (i <= D - 1) {
      big = a * (a + ai) * qp(D - 2 * i + 1) * (qp(i - 1) - qp(1 - i)) *
            (a * qp(i - D) - ai * qp(D - i)) /
            (qm * (a + qp(D - 2 * i + 3)) * (a + qp(D - 2 * i - 1))) * qq *
            (a + qp(D - 1)) * (a + qp(-D - 1)) * (a * qp(2 - D) - ai * qp(D - 2)) /
            ((a * q - ai / q) * (a - qp(1 - D)) * (a + qp(D - 3)));
    } else {
      big = a * (a * a - ai * ai) * qp(1 - D) * (qp(D - 1) - qp(1 - D)) * qq *
            (a + qp(D - 1)) * (a * qp(2 - D) - ai * qp(D - 2)) /
            (qm * (a + qp(3 - D)) * (a * q - ai / q) * (a - qp(1 - D)) *
             (a + qp(D - 3)));
    }
    out.set_max("p2im1_expansion",
                rel_residual(p2_im1(p, t, i), t.c[i] * big / t.c[2]));
  }

  const bool a1_zero = std::abs(t.a1_cf) < 1e-8 * (1.0 + std::abs(t.b[0]));
  const bool mult_degenerate =
      std::abs(a * a * a * qpow(q, D + 1) - 1.0) < 1e-6;
  const char* a1_reason =
      p.bipartite ? "bipartite: a_1=0"
                  : (p.almost_bipartite ? "almost-bipartite: a_1=0" : "a_1=0");

  if (a1_zero) {
    for (const char* name :
         {"z_closed_form", "z_product", "same_layer_consistency", "ratio_one",
          "local_multiplicity_sum", "local_trace"})
      out.skip(name, a1_reason);
  } else {
    // z_i closed forms against the quotient form
    for (int i = 1; i <= D; ++i) {
      out.set_max("z_closed_form", rel_residual(z_value(p, i), z_value_raw(p, i)));
      out.set_max("z_closed_form",
                  rel_residual(a1_minus_z(p, i), t.a1_cf - z_value_raw(p, i)));
    }
    // (a_1 - z_i) z_{i+1} = a_i z_2
    for (int i = 1; i <= D - 1; ++i)
      out.set_max("z_product", rel_residual(a1_minus_z(p, i) * z_value(p, i + 1),
                                            t.a[i] * z_value(p, 2)));
    // same-layer splits substituted into the five-term relation
    for (int i = 1; i <= D; ++i) {
      const cx rm = (2.0 * vth(i) - beta * vth(i - 1)) / (qm * q2m);
      const cx down = t.c[i] * (t.a1_cf - z_value(p, i)) / t.a[i];
      cx rhs;
      if (i < D) {
        const cx rp = (2.0 * vth(i) - beta * vth(i + 1)) / (qm * q2m);
        const cx up = t.b[i] * z_value(p, i + 1) / t.a[i];
        rhs = down * rm + (t.a1_cf - down - up) + up * rp;
      } else {
        rhs = down * rm + t.a1_cf - down;
      }
      out.set_max("same_layer_consistency",
                  rel_residual(2.0 * eps + alpha * (qq + vth(i)), rhs));
    }
    // (q+q^-1)^2 (a_{i-1}-z_i)/(a_i+a_{i-1}-a_1)
    //           * (a_{i+1}-a_1+z_{i+1})/(a_{i+1}+a_i-a_1) = 1
    for (int i = 2; i <= D - 1; ++i)
      out.set_max(
          "ratio_one",
          rel_residual(qq * qq * (t.a[i - 1] - z_value(p, i)) /
                           (t.a[i] + t.a[i - 1] - t.a1_cf) *
                           (t.a[i + 1] - t.a1_cf + z_value(p, i + 1)) /
                           (t.a[i + 1] + t.a[i] - t.a1_cf),
                       cx(1)));
    // local graph eigenvalue bookkeeping
    if (mult_degenerate) {
      out.skip("local_multiplicity_sum", "degenerate denominator");
      out.skip("local_trace", "degenerate denominator");
    } else {
      const LocalGraphScalars L = local_graph_scalars(p);
      out.set_max("local_multiplicity_sum",
                  rel_residual(L.mult_r + L.mult_s + 1.0, t.b[0]));
      out.set_max("local_trace",
                  rel_residual(L.r * L.mult_r + L.s * L.mult_s + t.a1_cf, cx(0)));
    }
  }

  // inequality right-hand side in closed form (holds for a_1 = 0 as well)
  for (int i = 2; i <= D - 1; ++i) {
    if (std::abs(a * a * qpow(q, 2 * (2 * i + 2 - D)) - 1.0) < 1e-6 ||
        std::abs(a * a * qpow(q, 2 * (2 * i - D - 2)) - 1.0) < 1e-6) {
      out.skip("inequality_product_form", "degenerate denominator");
      continue;
    }
    const cx term1 = p2_ii(p, t, i) * (t.c[2] - z_value(p, 2) - 1.0);
    const cx term2 = (t.b[i - 1] - t.a1_cf - 1.0 + z_value(p, i)) *
                     (t.c[i + 1] - z_value(p, i + 1) - 1.0);
    const cx lhs = term1 - term2;
    const double scale = std::abs(term1) + std::abs(term2);
    const cx f1 = (qp(i) - qp(-i)) * (qp(i - 1) - qp(1 - i)) *
                  (a * qp(i - D) - ai * qp(D - i)) * (a - qp(D - 2 * i - 3)) *
                  (a - qp(D - 2 * i + 3)) * (a * qp(i - D + 1) - ai * qp(D - i - 1)) /
                  ((a * qp(2 * i - D - 2) - ai * qp(D + 2 - 2 * i)) *
                   (a * qp(2 * i + 2 - D) - ai * qp(D - 2 * i - 2)) *
                   (a + qp(D - 2 * i + 1)) * (a + qp(D - 2 * i - 1)));
    const cx f2 = qp(2 - 2 * D) * (a + ai) * (a * a * q - ai * ai / q) *
                  (a * qp(D) - ai * qp(-D)) * (a * qp(2 - D) - ai * qp(D - 2)) /
                  ((a * q - ai / q) * (a * q - ai / q) * qm * qm * qq *
                   (a * q * q - ai / (q * q)));
    const cx f3 = (a + qp(-D - 1)) * (a - qp(D + 1)) * (a + qp(D - 1)) *
                  (a + qp(D - 1)) /
                  ((a + qp(D - 3)) * (a - qp(3 - D)) * (a - qp(1 - D)) *
                   (a - qp(1 - D)));
    out.set_max("inequality_product_form",
                rel_residual_scaled(lhs, f1 * f2 * f3, scale));
  }

  // p^D_{2,D} closed form
  {
    const cx rhs = (qp(D) - qp(-D)) * (qp(D - 1) - qp(1 - D)) * (a * a - ai * ai) *
                   (a * a * q - ai * ai / q) /
                   (q2m * qm * (a * q - ai / q) * (a * q * q - ai / (q * q))) *
                   (a * qp(1 - D) - ai * qp(D - 1)) * (a * qp(4 - D) - ai * qp(D - 4)) /
                   ((a * qp(D - 1) - ai * qp(1 - D)) * (a * qp(D - 2) - ai * qp(2 - D)));
    out.set_max("pD2D_closed_form", rel_residual(p2_DD(p, t), rhs));
  }

  return out;
}

QRacahParams harness_sample(int D, std::uint64_t seed, std::uint64_t index) {
  SplitMix64 rng = rng_stream(seed, index);
  constexpr double kMargin = 1e-4;
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const double qmod = std::exp(std::log(0.75) +
                                 rng.next_double() * (std::log(1.35) - std::log(0.75)));
    const double qarg = rng.next_double() * std::numbers::pi;
    const double amod =
        std::exp(std::log(0.5) + rng.next_double() * (std::log(2.0) - std::log(0.5)));
    const double aarg = (2.0 * rng.next_double() - 1.0) * std::numbers::pi;
    const cx q = std::polar(qmod, qarg);
    const cx a = std::polar(amod, aarg);
    if (admissibility_margin(D, q, a) < kMargin ||
        formula_margin(D, q, a) < kMargin)
      continue;
    QRacahParams p = make_params(D, q, a, 1.0, 0.0);
    const AppendixTables t = scalar_tables(p);
    return make_params(D, q, a, t.alpha_cf, t.epsilon_cf);
  }
  throw Error(ErrorCode::Degenerate, "rejection sampling failed to converge");
}

HarnessReport identity_harness(int D, int samples, std::uint64_t seed) {
  if (D < 3) throw Error(ErrorCode::UsageError, "harness needs D >= 3");
  if (samples < 1) throw Error(ErrorCode::UsageError, "harness needs samples >= 1");

  HarnessReport report;
  report.D = D;
  report.samples = samples;
  report.seed = seed;

  std::vector<ResidualMap> per_sample(samples);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < samples; ++i)
    per_sample[i] = identity_residuals(harness_sample(D, seed, i));

  for (const auto& sample : per_sample)
    for (const auto& [name, check] : sample.entries()) {
      HarnessEntry* slot = nullptr;
      for (auto& [n, e] : report.identities)
        if (n == name) slot = &e;
      if (!slot) {
        report.identities.emplace_back(name, HarnessEntry{});
        slot = &report.identities.back().second;
      }
      if (check.skipped) {
        ++slot->skipped;
      } else {
        ++slot->evaluated;
        slot->max_residual = std::max(slot->max_residual, check.value);
      }
    }
  return report;
}

}  // namespace drgspin
