#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "drgspin/graph.hpp"
#include "drgspin/qracah.hpp"
#include "drgspin/spectral.hpp"

using namespace drgspin;
using std::numbers::pi;

namespace {

std::vector<double> cycle_theta(int N) {
  Graph g = cycle_graph(N);
  SpectralData s = eigendecompose(g);
  return std::vector<double>(s.theta.data(), s.theta.data() + g.D + 1);
}

}  // namespace

TEST_CASE("fit recovers the odd cycle parameters") {
  auto fits = fit_qracah(cycle_theta(7));
  REQUIRE(!fits.empty());
  bool found = false, alpha_one = false;
  for (const auto& p : fits) {
    if (std::abs(qpow(p.q, 14) - 1.0) > 1e-9) continue;
    if (std::abs(p.a + qpow(p.q, -4)) > 1e-9) continue;
    CHECK(std::abs(p.epsilon) < 1e-9);
    CHECK(std::abs(p.alpha + qpow(p.q, -7)) < 1e-9);  // alpha = -q^{-2D-1}
    CHECK(p.fit_residual < 1e-9);
    CHECK(p.admissible);
    CHECK(p.almost_bipartite);
    found = true;
    // the branch with q^7 = -1 realizes alpha = 1
    alpha_one = alpha_one || std::abs(p.alpha - 1.0) < 1e-9;
  }
  CHECK(found);
  CHECK(alpha_one);
}

TEST_CASE("linear eigenvalue sequences are rejected") {
  try {
    fit_qracah({4, 2, 0, -2, -4});
    FAIL("expected NotQRacah");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotQRacah);
    CHECK(std::string(e.detail()).find("q^2 = 1") != std::string::npos);
  }
}

TEST_CASE("fit inverts a forward-evaluated sequence up to branch") {
  const int D = 4;
  const double q0 = 1.3, a0 = 0.7, alpha0 = 2.0, eps0 = 0.5;
  std::vector<double> theta(D + 1);
  for (int i = 0; i <= D; ++i)
    theta[i] = alpha0 * (a0 * std::pow(q0, 2 * i - D) +
                         std::pow(q0, D - 2 * i) / a0) +
               eps0;
  auto fits = fit_qracah(theta);
  REQUIRE(!fits.empty());

  auto [ac, qc] = canonical_branch(D, q0, a0);
  bool found = false;
  for (const auto& p : fits)
    found = found || (std::abs(p.q - qc) < 1e-9 && std::abs(p.a - ac) < 1e-9 &&
                      std::abs(p.alpha - alpha0) < 1e-9 &&
                      std::abs(p.epsilon - eps0) < 1e-9 &&
                      p.fit_residual < 1e-9);
  CHECK(found);
}

TEST_CASE("degenerate sequence with v = 0") {
  const int D = 4;
  std::vector<double> theta(D + 1);
  for (int i = 0; i <= D; ++i) theta[i] = std::pow(1.3, 2 * i - D);
  CHECK_THROWS_AS(fit_qracah(theta), Error);
  try {
    fit_qracah(theta);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
}

TEST_CASE("branch canonicalization fixes every vartheta") {
  const int D = 5;
  const cx q(0.9, 0.31), a(1.4, -0.2);
  auto [ac, qc] = canonical_branch(D, q, a);
  QRacahParams p1 = make_params(D, q, a, 1.0, 0.0);
  QRacahParams p2 = make_params(D, qc, ac, 1.0, 0.0);
  for (int i = 0; i <= D; ++i)
    CHECK(std::abs(p1.vartheta[i] - p2.vartheta[i]) < 1e-12);
  // idempotent
  auto [ac2, qc2] = canonical_branch(D, qc, ac);
  CHECK(std::abs(ac2 - ac) < 1e-12);
  CHECK(std::abs(qc2 - qc) < 1e-12);
  CHECK(qc.imag() >= -1e-12);
}

TEST_CASE("cycle parameter tables reproduce the intersection arrays") {
  // odd cycle: a = -q^{-D-1}
  {
    const int D = 3;
    const cx q = std::polar(1.0, pi / 7);
    const cx a = -qpow(q, -D - 1);
    QRacahParams p = make_params(D, q, a, a * qpow(q, -D), 0.0);
    REQUIRE(p.admissible);
    AppendixTables t = scalar_tables(p);
    CHECK(std::abs(t.epsilon_cf) < 1e-12);  // the (a + q^{-D-1}) factor
    CHECK(std::abs(t.alpha_cf - a * qpow(q, -D)) < 1e-12);
    for (int i = 0; i < D; ++i) CHECK(std::abs(t.a[i]) < 1e-12);
    CHECK(std::abs(t.a[D] - 1.0) < 1e-12);
    CHECK(std::abs(t.n_implied - 7.0) < 1e-10);
    CHECK(t.almost_bipartite);
  }
  // even cycle: a^2 = -1
  {
    const int D = 4;
    const cx q = std::polar(1.0, pi / 8);
    const cx a(0, 1);
    QRacahParams p = make_params(D, q, a, a * qpow(q, -D), 0.0);
    REQUIRE(p.admissible);
    AppendixTables t = scalar_tables(p);
    CHECK(std::abs(t.epsilon_cf) < 1e-12);
    for (int i = 0; i <= D; ++i) CHECK(std::abs(t.a[i]) < 1e-12);
    CHECK(std::abs(t.c[D] - 2.0) < 1e-12);
    CHECK(std::abs(t.n_implied - 8.0) < 1e-10);
    CHECK(t.bipartite);
  }
}

TEST_CASE("the wrong sign branch of the odd cycle is inadmissible") {
  const int D = 3;
  const cx q = std::polar(1.0, pi / 7);
  const cx a = qpow(q, -4);  // a^3 q^{2-D-1} = 1 violates the constraints
  QRacahParams p = make_params(D, q, a, 1.0, 0.0);
  CHECK(!p.admissible);
  CHECK_THROWS_AS(scalar_tables(p), Error);
}

TEST_CASE("valency closure at a random admissible point") {
  QRacahParams p = harness_sample(4, 7, 0);
  AppendixTables t = scalar_tables(p);
  for (int i = 0; i <= 4; ++i)
    CHECK(rel_residual(t.c[i] + t.a[i] + t.b[i], t.b[0]) < 1e-9);
}

TEST_CASE("identity harness") {
  HarnessReport rep = identity_harness(3, 100, 12345);
  CHECK(rep.max_residual() < 1e-9);
  for (const auto& [name, e] : rep.identities) {
    INFO(name);
    CHECK(e.max_residual < 1e-9);
    CHECK(e.evaluated == 100);
  }

  // determinism: the same seed gives the same stream
  HarnessReport again = identity_harness(3, 100, 12345);
  REQUIRE(again.identities.size() == rep.identities.size());
  for (size_t i = 0; i < rep.identities.size(); ++i) {
    CHECK(again.identities[i].first == rep.identities[i].first);
    CHECK(again.identities[i].second.max_residual ==
          rep.identities[i].second.max_residual);
  }
}

TEST_CASE("bipartite sample skips the z identities with a flag") {
  const int D = 4;
  const cx q(1.3, 0.0), a(0, 1);
  QRacahParams probe = make_params(D, q, a, 1.0, 0.0);
  REQUIRE(probe.admissible);
  AppendixTables t = scalar_tables(probe);
  QRacahParams p = make_params(D, q, a, t.alpha_cf, t.epsilon_cf);
  ResidualMap rm = identity_residuals(p);
  const Check* z = rm.find("z_closed_form");
  REQUIRE(z != nullptr);
  CHECK(z->skipped);
  CHECK(z->reason == "bipartite: a_1=0");
  // identities that survive a_1 = 0 still hold
  CHECK(!rm.find("five_term_diagonal")->skipped);
  CHECK(rm.find("five_term_diagonal")->value < 1e-9);
  CHECK(!rm.find("a_epsilon_form")->skipped);
}

TEST_CASE("harness samples respect the rejection margin") {
  for (int i = 0; i < 20; ++i) {
    QRacahParams p = harness_sample(5, 42, i);
    CHECK(admissibility_margin(5, p.q, p.a) >= 1e-4);
    CHECK(formula_margin(5, p.q, p.a) >= 1e-4);
    // alpha and epsilon are pinned to the closed forms
    AppendixTables t = scalar_tables(p);
    CHECK(std::abs(p.alpha - t.alpha_cf) < 1e-12);
    CHECK(std::abs(p.epsilon - t.epsilon_cf) < 1e-12);
  }
}

TEST_CASE("theta and tau have the documented structure") {
  QRacahParams p = harness_sample(4, 3, 5);
  CHECK(std::abs(p.tau[0] - 1.0) < 1e-15);
  for (int i = 1; i <= p.D; ++i)
    CHECK(std::abs(p.tau[i] / p.tau[i - 1] + qpow(p.q, p.D - 2 * i + 1) / p.a) <
          1e-12);
  for (int i = 1; i <= p.D - 1; ++i)
    CHECK(std::abs(p.vartheta[i - 1] - p.beta * p.vartheta[i] +
                   p.vartheta[i + 1]) < 1e-12);
}
