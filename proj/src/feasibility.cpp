#include "drgspin/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace drgspin {

namespace {

constexpr double kAdmissMargin = 1e-6;

// Integrality residual of one array entry: distance to the nearest
// nonnegative integer plus any imaginary part.
double entry_residual(cx v) {
  const double re = v.real();
  const double target = std::max(0.0, std::round(re));
  return std::abs(re - target) + std::abs(v.imag());
}

struct RawPoint {
  cx q, a;
  std::string family;
};

// Each condition is invariant under (a,q) -> (a^{-1}, q^{-1}), so the
// candidate's own frame decides.
std::vector<std::string> special_tags(int D, cx q, cx a) {
  std::vector<std::string> tags;
  auto near = [](cx v, cx w) { return std::abs(v - w) < 1e-8 * (1.0 + std::abs(w)); };
  if (near(a * a, cx(-1))) tags.push_back("a^2=-1");
  if (near(a, -qpow(q, -D - 1))) tags.push_back("a=-q^{-D-1}");
  if (near(a, qpow(q, D + 1))) tags.push_back("a=q^{D+1}");
  if (near(a, qpow(q, -D - 1))) tags.push_back("a=q^{-D-1}");
  if (near(a * a, qpow(q, -2 * D))) tags.push_back("a^2=q^{-2D}");
  if (near(a * a * a * a, qpow(q, -2))) tags.push_back("a^4=q^{-2}");
  return tags;
}

bool try_point(int D, cx q, cx a, const std::string& family, double threshold,
               FeasibilityCandidate& out) {
  // Cheap reject on b_0 integrality before building the whole table.
  {
    const cx ai = 1.0 / a;
    const cx denom = qpow(q, D - 1) * (1.0 / q - q) * (a * q - ai / q) *
                     (a - qpow(q, 1 - D));
    if (std::abs(denom) < 1e-12) return false;
    const cx alpha =
        (a * qpow(q, 2 - D) - ai * qpow(q, D - 2)) * (a + qpow(q, D - 1)) / denom;
    const cx b0 = alpha * (qpow(q, -D) - qpow(q, D)) * (a * a * a - qpow(q, D - 1)) /
                  (a * (a + qpow(q, D - 1)));
    if (entry_residual(b0) > threshold || b0.real() < 0.5) return false;
  }
  if (admissibility_margin(D, q, a) < kAdmissMargin) return false;
  QRacahParams p = make_params(D, q, a, 1.0, 0.0);
  if (!p.admissible) return false;
  const AppendixTables t = scalar_tables(p);

  double resid = 0.0;
  for (int i = 0; i <= D; ++i) {
    if (i < D) resid = std::max(resid, entry_residual(t.b[i]));
    if (i >= 1) resid = std::max(resid, entry_residual(t.c[i]));
    resid = std::max(resid, entry_residual(t.a[i]));
    resid = std::max(resid, entry_residual(t.k[i]));
    if (resid > threshold) return false;
  }
  // b_i (i < D) and c_i (i >= 1) must round to at least 1, k_i to at least 1.
  for (int i = 0; i < D; ++i)
    if (t.b[i].real() < 0.5) return false;
  for (int i = 1; i <= D; ++i)
    if (t.c[i].real() < 0.5 || t.k[i].real() < 0.5) return false;

  out.D = D;
  auto [ac, qc] = canonical_branch(D, q, a);
  out.q = qc;
  out.a = ac;
  out.family_tag = family;
  out.integrality_residual = resid;
  out.b.resize(D + 1);
  out.c.resize(D + 1);
  out.a_seq.resize(D + 1);
  out.k.resize(D + 1);
  for (int i = 0; i <= D; ++i) {
    out.b[i] = t.b[i].real();
    out.c[i] = t.c[i].real();
    out.a_seq[i] = t.a[i].real();
    out.k[i] = t.k[i].real();
  }
  out.n_implied = t.n_implied.real();
  out.tags = special_tags(D, qc, ac);
  return true;
}

}  // namespace

std::vector<FeasibilityCandidate> scan(int D, const GridSpec& spec) {
  if (D < 3) throw Error(ErrorCode::UsageError, "scan needs D >= 3");

  std::vector<FeasibilityCandidate> all;

  if (spec.unit_circle) {
    std::vector<RawPoint> points;
    for (int N = 1; N <= spec.unit_circle_max; ++N) {
      for (int m = 1; m < 2 * N; ++m) {
        if (std::gcd(m, N) != 1) continue;  // reduced denominator is exactly N
        const cx q = std::polar(1.0, std::numbers::pi * m / N);
        // structured a families: powers of q with either sign
        for (int j = -N; j <= N; ++j) {
          points.push_back({q, qpow(q, j), "unit-circle-q"});
          points.push_back({q, -qpow(q, j), "unit-circle-q"});
        }
        points.push_back({q, cx(0, 1), "special-a"});
        points.push_back({q, cx(0, -1), "special-a"});
        for (int sgn : {1, -1})
          for (int e : {D + 1, -D - 1})
            points.push_back({q, double(sgn) * qpow(q, e), "special-a"});
      }
    }
    std::vector<std::vector<FeasibilityCandidate>> rows(points.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (size_t idx = 0; idx < points.size(); ++idx) {
      FeasibilityCandidate c;
      if (try_point(D, points[idx].q, points[idx].a, points[idx].family,
                    spec.threshold, c))
        rows[idx].push_back(std::move(c));
    }
    for (auto& row : rows)
      for (auto& c : row) all.push_back(std::move(c));
  }

  if (spec.real_grid) {
    const long qn =
        std::lround((spec.real_q_max - spec.real_q_min) / spec.real_q_step);
    const long an = std::lround(spec.real_a_max / spec.real_a_step);
    std::vector<std::vector<FeasibilityCandidate>> rows(qn + 1);
#pragma omp parallel for schedule(dynamic)
    for (long iq = 1; iq <= qn; ++iq) {
      const double qv = spec.real_q_min + iq * spec.real_q_step;
      for (long ia = 1; ia <= an; ++ia) {
        const double av = ia * spec.real_a_step;
        for (double sgn : {1.0, -1.0}) {
          FeasibilityCandidate c;
          if (try_point(D, cx(qv), cx(sgn * av), "real-q", spec.threshold, c))
            rows[iq].push_back(std::move(c));
        }
      }
    }
    for (auto& row : rows)
      for (auto& c : row) all.push_back(std::move(c));
  }

  // The special-a families overlap the generic power family; prefer the
  // special tag for duplicates at the same canonical point.
  std::stable_sort(all.begin(), all.end(),
                   [](const FeasibilityCandidate& x, const FeasibilityCandidate& y) {
                     return x.family_tag == "special-a" && y.family_tag != "special-a";
                   });
  std::vector<FeasibilityCandidate> unique;
  for (auto& c : all) {
    bool dup = false;
    for (const auto& u : unique)
      dup = dup || (u.D == c.D && std::abs(u.q - c.q) < 1e-9 &&
                    std::abs(u.a - c.a) < 1e-9);
    if (!dup) unique.push_back(std::move(c));
  }
  std::sort(unique.begin(), unique.end(),
            [](const FeasibilityCandidate& x, const FeasibilityCandidate& y) {
              if (std::abs(x.integrality_residual - y.integrality_residual) > 1e-15)
                return x.integrality_residual < y.integrality_residual;
              if (std::abs(x.n_implied - y.n_implied) > 1e-9)
                return x.n_implied < y.n_implied;
              if (std::abs(x.q.real() - y.q.real()) > 1e-12)
                return x.q.real() < y.q.real();
              if (std::abs(x.q.imag() - y.q.imag()) > 1e-12)
                return x.q.imag() < y.q.imag();
              if (std::abs(x.a.real() - y.a.real()) > 1e-12)
                return x.a.real() < y.a.real();
              return x.a.imag() < y.a.imag();
            });
  return unique;
}

CandidateReport evaluate_candidate(const FeasibilityCandidate& c) {
  CandidateReport rep;
  rep.candidate = c;
  if (admissibility_margin(c.D, c.q, c.a) < kAdmissMargin)
    throw Error(ErrorCode::Inadmissible, "candidate parameters are inadmissible");

  QRacahParams p = make_params(c.D, c.q, c.a, 1.0, 0.0);
  const AppendixTables t = scalar_tables(p);
  rep.candidate.tags = special_tags(c.D, c.q, c.a);

  auto check = [&](const std::string& name, cx v, bool applicable = true) {
    if (!applicable) return;
    const double r = entry_residual(v);
    rep.quantities.emplace_back(name, v.real());
    if (r > 1e-6) {
      rep.feasible = false;
      rep.reasons.push_back(name + " not a nonnegative integer");
    }
  };

  for (int i = 0; i <= c.D; ++i) {
    if (i < c.D) check("b" + std::to_string(i), t.b[i]);
    if (i >= 1) check("c" + std::to_string(i), t.c[i]);
    check("a" + std::to_string(i), t.a[i]);
    check("k" + std::to_string(i), t.k[i]);
  }

  const bool a1_zero = std::abs(t.a1_cf) < 1e-8;
  for (int i = 1; i <= c.D; ++i)
    check("z" + std::to_string(i), z_value(p, i), !a1_zero);
  for (int i = 2; i <= c.D; ++i)
    check("p2_" + std::to_string(i) + "_" + std::to_string(i - 1),
          p2_im1(p, t, i));
  for (int i = 2; i <= c.D - 1; ++i)
    check("p2_" + std::to_string(i) + "_" + std::to_string(i), p2_ii(p, t, i));
  check("p2_D_D", p2_DD(p, t));
  if (!a1_zero && formula_margin(c.D, c.q, c.a) > kAdmissMargin) {
    const LocalGraphScalars L = local_graph_scalars(p);
    check("local_mult_r", L.mult_r);
    check("local_mult_s", L.mult_s);
  }
  return rep;
}

std::string candidates_to_csv(const std::vector<FeasibilityCandidate>& list) {
  std::ostringstream os;
  os.precision(17);
  os << "D,q_re,q_im,a_re,a_im,family_tag,residual,n_implied,b,c,a,k,tags\n";
  auto seq = [](const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(12);
    for (size_t i = 0; i < v.size(); ++i) s << (i ? " " : "") << v[i];
    return s.str();
  };
  for (const auto& c : list) {
    std::string tags;
    for (size_t i = 0; i < c.tags.size(); ++i)
      tags += (i ? " " : "") + c.tags[i];
    os << c.D << ',' << c.q.real() << ',' << c.q.imag() << ',' << c.a.real()
       << ',' << c.a.imag() << ',' << c.family_tag << ','
       << c.integrality_residual << ',' << c.n_implied << ",\"" << seq(c.b)
       << "\",\"" << seq(c.c) << "\",\"" << seq(c.a_seq) << "\",\"" << seq(c.k)
       << "\",\"" << tags << "\"\n";
  }
  return os.str();
}

}  // namespace drgspin
