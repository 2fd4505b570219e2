#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "drgspin/graph.hpp"

using namespace drgspin;

namespace {

// Independent distance oracle: Floyd-Warshall.
IMat floyd_warshall(const IMat& adj) {
  const int n = static_cast<int>(adj.rows());
  const int inf = 1 << 20;
  IMat d = IMat::Constant(n, n, inf);
  for (int i = 0; i < n; ++i) d(i, i) = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (adj(i, j)) d(i, j) = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d;
}

IMat petersen() {
  IMat adj = IMat::Zero(10, 10);
  auto link = [&](int u, int v) { adj(u, v) = adj(v, u) = 1; };
  for (int i = 0; i < 5; ++i) {
    link(i, (i + 1) % 5);
    link(i, i + 5);
    link(5 + i, 5 + (i + 2) % 5);
  }
  return adj;
}

std::string write_temp(const std::string& contents) {
  static int counter = 0;
  std::string path = "graph_test_" + std::to_string(counter++) + ".tmp";
  std::ofstream out(path);
  out << contents;
  return path;
}

}  // namespace

TEST_CASE("cycle intersection data") {
  Graph g = cycle_graph(7);
  CHECK(g.n == 7);
  CHECK(g.D == 3);
  CHECK(g.k == std::vector<long long>{1, 2, 2, 2});
  CHECK(g.c == std::vector<long long>{0, 1, 1, 1});
  CHECK(g.b == std::vector<long long>{2, 1, 1, 0});
  CHECK(g.a == std::vector<long long>{0, 0, 0, 1});  // a_D = 1 on an odd cycle
  CHECK(g.pnum(1, 1, 1) == 0);
  for (int i = 0; i <= g.D; ++i) CHECK(g.pnum(0, i, i) == g.k[i]);

  Graph g8 = cycle_graph(8);
  CHECK(g8.D == 4);
  CHECK(g8.k == std::vector<long long>{1, 2, 2, 2, 1});
  CHECK(g8.c[4] == 2);
  CHECK(g8.a == std::vector<long long>{0, 0, 0, 0, 0});

  CHECK_THROWS_AS(cycle_graph(6), Error);
  try {
    cycle_graph(5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DiameterTooSmall);
  }
}

TEST_CASE("hypercube intersection data") {
  Graph g = hypercube_graph(3);
  CHECK(g.n == 8);
  CHECK(g.k == std::vector<long long>{1, 3, 3, 1});
  CHECK(g.c == std::vector<long long>{0, 1, 2, 3});
  Graph g4 = hypercube_graph(4);
  CHECK(g4.pnum(2, 1, 1) == 2);  // c_2
  CHECK_THROWS_AS(hypercube_graph(2), Error);
}

TEST_CASE("distances agree with the Floyd-Warshall oracle") {
  for (const IMat& adj :
       {cycle_graph(9).adjacency, hypercube_graph(3).adjacency, petersen()}) {
    IMat oracle = floyd_warshall(adj);
    CHECK(bfs_distances(adj) == oracle);
    CHECK(bfs_distances_serial(adj) == oracle);
  }
}

TEST_CASE("certified graphs satisfy the algebra identities exactly") {
  for (const Graph& g : {cycle_graph(7), cycle_graph(10), hypercube_graph(4),
                         analyze_drg(petersen())}) {
    const int m = g.D + 1;
    long long total = 0;
    for (long long v : g.k) total += v;
    CHECK(total == g.n);

    // distance matrices partition J and are Hadamard-orthogonal
    for (int y = 0; y < g.n; ++y)
      for (int z = 0; z < g.n; ++z) {
        CHECK(g.dist(y, z) <= g.D);
        CHECK((g.dist(y, z) == 1) == (g.adjacency(y, z) == 1));
      }

    // A_i A_j = sum_h p^h_{ij} A_h as exact integer matrices
    std::vector<IMat> A(m, IMat::Zero(g.n, g.n));
    for (int y = 0; y < g.n; ++y)
      for (int z = 0; z < g.n; ++z) A[g.dist(y, z)](y, z) = 1;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        IMat lhs = A[i] * A[j];
        IMat rhs = IMat::Zero(g.n, g.n);
        for (int h = 0; h < m; ++h)
          rhs += static_cast<int>(g.pnum(h, i, j)) * A[h];
        CHECK(lhs == rhs);
      }

    // symmetry and the triangle-inequality vanishing pattern
    for (int h = 0; h < m; ++h)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          CHECK(g.pnum(h, i, j) == g.pnum(h, j, i));
          if (h > i + j || i > h + j || j > h + i) CHECK(g.pnum(h, i, j) == 0);
          if (h == i + j || i == h + j || j == h + i) CHECK(g.pnum(h, i, j) != 0);
        }
  }
}

TEST_CASE("non-distance-regular input is rejected with a witness") {
  IMat path = IMat::Zero(5, 5);
  for (int i = 0; i < 4; ++i) path(i, i + 1) = path(i + 1, i) = 1;
  try {
    analyze_drg(path);
    FAIL("expected NotDistanceRegular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotDistanceRegular);
    REQUIRE(e.witness().size() == 7);  // (h, i, j, y, z, y', z')
  }

  IMat two = IMat::Zero(4, 4);
  two(0, 1) = two(1, 0) = two(2, 3) = two(3, 2) = 1;
  CHECK_THROWS_AS(analyze_drg(two), Error);
  try {
    analyze_drg(two);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConnected);
  }
}

TEST_CASE("edge list file round-trip") {
  Graph g = cycle_graph(7);
  const std::string path = write_temp("");
  save_graph(g, path);
  Graph h = load_graph(path);
  CHECK(h.n == g.n);
  CHECK(h.adjacency == g.adjacency);
  CHECK(h.p == g.p);
  std::remove(path.c_str());
}

TEST_CASE("file parser errors") {
  auto expect_parse_error = [](const std::string& contents) {
    const std::string path = write_temp(contents);
    CHECK_THROWS_AS(load_graph(path), Error);
    try {
      load_graph(path);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
    std::remove(path.c_str());
  };
  expect_parse_error("3 3\n0 1\n0 1\n1 2\n");   // duplicate edge
  expect_parse_error("3 2\n0 0\n1 2\n");        // self-loop
  expect_parse_error("3 2\n1 0\n1 2\n");        // u >= v
  expect_parse_error("3 2\n0 5\n1 2\n");        // out of range
  expect_parse_error("3 junk\n0 1\n");          // bad header
  expect_parse_error("2 1\n");                  // missing edges

  // comments and blank lines are fine
  const std::string path =
      write_temp("# heptagon\n\n7 7\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n# wrap\n0 6\n");
  Graph g = load_graph(path);
  CHECK(g.D == 3);
  CHECK(g.k == std::vector<long long>{1, 2, 2, 2});
  std::remove(path.c_str());

  const std::string p5 = write_temp("5 4\n0 1\n1 2\n2 3\n3 4\n");
  CHECK_THROWS_AS(load_graph(p5), Error);
  std::remove(p5.c_str());
}
