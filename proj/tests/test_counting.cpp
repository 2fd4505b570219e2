#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "drgspin/counting.hpp"

using namespace drgspin;

namespace {

struct Setup {
  Graph g;
  SpectralData s;
  QRacahParams p;
  DualStructure d;
};

Setup make(int N) {
  Graph g = cycle_graph(N);
  SpectralData s0 = eigendecompose(g);
  krein_and_eigenmatrices(g, s0);
  auto orderings = find_qpoly_orderings(s0);
  REQUIRE(!orderings.empty());
  SpectralData s = reorder(s0, orderings.front().perm);
  std::vector<double> theta(s.theta.data(), s.theta.data() + g.D + 1);
  QRacahParams p = fit_qracah(theta).front();
  DualStructure d = dual_structure(g, s, 0);
  return {std::move(g), std::move(s), std::move(p), std::move(d)};
}

IMat icosahedron() {
  IMat adj = IMat::Zero(12, 12);
  auto link = [&](int u, int v) { adj(u, v) = adj(v, u) = 1; };
  for (int i = 0; i < 5; ++i) {
    link(0, 1 + i);
    link(11, 6 + i);
    link(1 + i, 1 + (i + 1) % 5);
    link(6 + i, 6 + (i + 1) % 5);
    link(1 + i, 6 + i);
    link(1 + i, 6 + (i + 1) % 5);
  }
  return adj;
}

}  // namespace

TEST_CASE("triple counts by direct enumeration") {
  Graph c7 = cycle_graph(7);
  CHECK(triple_count(c7, 0, 1, 2, 1) == 0);  // no triangles on a cycle

  // degenerate pair y = z reduces to a two-set intersection
  Graph q3 = hypercube_graph(3);
  for (int j = 0; j <= q3.D; ++j) {
    long long direct = 0;
    for (int w = 0; w < q3.n; ++w)
      if (q3.dist(0, w) == j && q3.adjacency(3, w)) ++direct;
    CHECK(triple_count(q3, 0, 3, 3, j) == direct);
  }
  CHECK(triple_count(q3, 0, 1, 2, 1) == 0);
}

TEST_CASE("z counts on cycles vanish and match the formulas") {
  for (int N : {7, 8}) {
    Setup u = make(N);
    CountStats stats;
    ResidualMap rm = verify_z_counts(u.g, u.p, 0, &stats);
    CHECK(!stats.constancy_violation);
    for (int i = 1; i <= u.g.D; ++i) {
      CHECK(stats.z[i] == 0);
      CHECK(rm.find("z" + std::to_string(i) + "_formula")->value < 1e-8);
      CHECK(rm.find("z" + std::to_string(i) + "_recurrence")->value < 1e-8);
    }
    const Check* fact = rm.find("z_factored_forms");
    REQUIRE(fact != nullptr);
    CHECK(fact->skipped);
    CHECK(fact->reason == "a_1=0");
  }
}

TEST_CASE("distance-2 splits across consecutive shells") {
  Setup u = make(7);
  ResidualMap rm = verify_c2_splits(u.g, u.p, 0);
  // i = 2 has p^2_{2,1} = a_2 = 0: skipped with the documented flag
  CHECK(rm.find("split2")->skipped);
  CHECK(rm.find("split2")->reason == "p^i_{2,i-1}=0");
  // i = 3 = D: the unique configuration splits (1, 0) or (0, 1)
  CHECK(rm.find("split3_down_constancy")->value == 0.0);
  CHECK(rm.find("split3_sum")->value < 1e-12);
  CHECK(rm.find("split3_theta_form")->value < 1e-8);
  CHECK(rm.find("split3_aq_form")->value < 1e-8);
  // the end-shell pair case vanishes on an odd cycle: p^D_{2,D} != 0 there
  const Check* endcase = rm.find("splitD");
  if (endcase) CHECK(endcase->skipped);

  Setup u8 = make(8);
  ResidualMap rm8 = verify_c2_splits(u8.g, u8.p, 0);
  const Check* skip8 = rm8.find("splitD");
  REQUIRE(skip8 != nullptr);
  CHECK(skip8->skipped);
  CHECK(skip8->reason == "p^D_{2,D}=0 (a^2=-1)");
  for (const auto& [name, check] : rm8.entries())
    if (!check.skipped) {
      INFO(name);
      CHECK(check.value < 1e-8);
    }
}

TEST_CASE("same-shell adjacent splits are skipped when a_1 = 0") {
  Setup u = make(7);
  ResidualMap rm = verify_same_layer(u.g, u.p, 0);
  REQUIRE(rm.find("same_layer") != nullptr);
  CHECK(rm.find("same_layer")->skipped);
  CHECK(rm.find("same_layer")->reason == "a_1=0");
}

TEST_CASE("inequality statistics on cycles sit in the equality branch") {
  for (int N : {7, 8, 12}) {
    Setup u = make(N);
    CountStats stats;
    ResidualMap rm = verify_inequality(u.g, u.p, 0, &stats);
    for (const auto& [name, check] : rm.entries()) {
      INFO("N=" << N << " " << name);
      if (!check.skipped) CHECK(check.value < 1e-8);
    }
    CHECK(!stats.constancy_violation);
  }
}

TEST_CASE("five-term matrix relations") {
  for (int N : {7, 8}) {
    Setup u = make(N);
    ResidualMap rm = verify_matrix_eq(u.g, u.p, u.d, 0);
    CHECK(rm.find("five_term_shifted")->value < 1e-8);
    CHECK(rm.find("five_term_adjacency")->value < 1e-8);
    CHECK(rm.find("five_term_diagonal_graph")->value < 1e-8);
  }
  // corrupted epsilon must be loud
  Setup u = make(7);
  QRacahParams bad =
      make_params(u.p.D, u.p.q, u.p.a, u.p.alpha, u.p.epsilon + 0.2);
  ResidualMap rm = verify_matrix_eq(u.g, bad, u.d, 0);
  CHECK(rm.find("five_term_adjacency")->value > 1e-4);
}

TEST_CASE("local graph analysis") {
  // cycles have edgeless local graphs
  Setup u = make(7);
  ResidualMap rm = local_graph_srg(u.g, &u.p, 0);
  REQUIRE(rm.find("local_srg") != nullptr);
  CHECK(rm.find("local_srg")->skipped);

  // the icosahedron's local graph is a pentagon: SRG(5, 2, 0, 1)
  Graph ico = analyze_drg(icosahedron());
  CHECK(ico.a[1] == 2);
  ResidualMap rmi = local_graph_srg(ico, nullptr, 0);
  REQUIRE(rmi.find("local_srg_counted") != nullptr);
  CHECK(rmi.find("local_srg_counted")->value == 0.0);
}
