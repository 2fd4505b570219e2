#include "drgspin/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace drgspin {

namespace {

std::vector<std::vector<int>> neighbor_lists(const IMat& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  std::vector<std::vector<int>> nbrs(n);
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z)
      if (adjacency(y, z) != 0) nbrs[y].push_back(z);
  return nbrs;
}

void bfs_from(const std::vector<std::vector<int>>& nbrs, int src, int* row,
              std::vector<int>& queue) {
  const int n = static_cast<int>(nbrs.size());
  std::fill(row, row + n, -1);
  queue.clear();
  queue.push_back(src);
  row[src] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    const int y = queue[head];
    for (int z : nbrs[y])
      if (row[z] < 0) {
        row[z] = row[y] + 1;
        queue.push_back(z);
      }
  }
}

}  // namespace

IMat bfs_distances_serial(const IMat& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  const auto nbrs = neighbor_lists(adjacency);
  IMat dist(n, n);
  std::vector<int> row(n), queue;
  for (int x = 0; x < n; ++x) {
    bfs_from(nbrs, x, row.data(), queue);
    for (int y = 0; y < n; ++y) dist(x, y) = row[y];
  }
  return dist;
}

IMat bfs_distances(const IMat& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  const auto nbrs = neighbor_lists(adjacency);
  IMat dist(n, n);
#pragma omp parallel
  {
    std::vector<int> row(n), queue;
#pragma omp for
    for (int x = 0; x < n; ++x) {
      bfs_from(nbrs, x, row.data(), queue);
      for (int y = 0; y < n; ++y) dist(x, y) = row[y];
    }
  }
  return dist;
}

Graph analyze_drg(const IMat& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  if (n <= 0 || adjacency.cols() != n)
    throw Error(ErrorCode::ParseError, "adjacency matrix must be square");
  for (int y = 0; y < n; ++y) {
    if (adjacency(y, y) != 0)
      throw Error(ErrorCode::ParseError, "self-loop at vertex " + std::to_string(y));
    for (int z = 0; z < n; ++z)
      if (adjacency(y, z) != adjacency(z, y) ||
          (adjacency(y, z) != 0 && adjacency(y, z) != 1))
        throw Error(ErrorCode::ParseError, "adjacency must be symmetric 0/1");
  }

  Graph g;
  g.n = n;
  g.adjacency = adjacency;
  g.dist = bfs_distances(adjacency);
  if (g.dist.minCoeff() < 0)
    throw Error(ErrorCode::NotConnected, "graph is not connected");
  g.D = g.dist.maxCoeff();
  const int m = g.D + 1;

  // For each ordered pair (y,z), the joint distribution over w of
  // (dist(y,w), dist(z,w)) must depend only on dist(y,z). The first pair
  // at each distance (in vertex order) sets the reference; any later
  // disagreement yields the witness.
  std::vector<std::vector<long long>> ref(m);
  std::vector<std::pair<int, int>> ref_pair(m, {-1, -1});
  std::vector<long long> counts(static_cast<size_t>(m) * m);
  for (int y = 0; y < n; ++y) {
    for (int z = 0; z < n; ++z) {
      const int h = g.dist(y, z);
      std::fill(counts.begin(), counts.end(), 0);
      for (int w = 0; w < n; ++w)
        ++counts[static_cast<size_t>(g.dist(y, w)) * m + g.dist(z, w)];
      if (ref_pair[h].first < 0) {
        ref[h] = counts;
        ref_pair[h] = {y, z};
      } else if (counts != ref[h]) {
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            if (counts[static_cast<size_t>(i) * m + j] !=
                ref[h][static_cast<size_t>(i) * m + j]) {
              std::ostringstream msg;
              msg << "count |G_" << i << "(y) n G_" << j << "(z)| differs at h="
                  << h << ": pair (" << ref_pair[h].first << ","
                  << ref_pair[h].second << ") gives "
                  << ref[h][static_cast<size_t>(i) * m + j] << ", pair (" << y
                  << "," << z << ") gives "
                  << counts[static_cast<size_t>(i) * m + j];
              throw Error(ErrorCode::NotDistanceRegular, msg.str(),
                          {h, i, j, ref_pair[h].first, ref_pair[h].second, y, z});
            }
      }
    }
  }

  g.p.assign(static_cast<size_t>(m) * m * m, 0);
  for (int h = 0; h < m; ++h)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        g.p[(static_cast<size_t>(h) * m + i) * m + j] =
            ref[h][static_cast<size_t>(i) * m + j];

  g.k.resize(m);
  g.b.assign(m, 0);
  g.c.assign(m, 0);
  g.a.resize(m);
  for (int i = 0; i < m; ++i) {
    g.k[i] = g.pnum(0, i, i);
    g.a[i] = g.pnum(i, 1, i);
    if (i >= 1) g.c[i] = g.pnum(i, 1, i - 1);
    if (i < g.D) g.b[i] = g.pnum(i, 1, i + 1);
  }

  // k_i * (c_1...c_i) == b_0...b_{i-1}, exactly.
  __int128 bprod = 1, cprod = 1;
  for (int i = 1; i < m; ++i) {
    bprod *= g.b[i - 1];
    cprod *= g.c[i];
    if (static_cast<__int128>(g.k[i]) * cprod != bprod)
      throw Error(ErrorCode::NotDistanceRegular,
                  "valency product formula fails at i=" + std::to_string(i));
  }
  return g;
}

Graph cycle_graph(int N) {
  if (N < 7)
    throw Error(ErrorCode::DiameterTooSmall,
                "cycle needs N >= 7 for diameter >= 3, got N=" + std::to_string(N));
  IMat adjacency = IMat::Zero(N, N);
  for (int y = 0; y < N; ++y) {
    adjacency(y, (y + 1) % N) = 1;
    adjacency((y + 1) % N, y) = 1;
  }
  return analyze_drg(adjacency);
}

Graph hypercube_graph(int d) {
  if (d < 3)
    throw Error(ErrorCode::DiameterTooSmall,
                "hypercube needs d >= 3, got d=" + std::to_string(d));
  const int n = 1 << d;
  IMat adjacency = IMat::Zero(n, n);
  for (int y = 0; y < n; ++y)
    for (int bit = 0; bit < d; ++bit) adjacency(y, y ^ (1 << bit)) = 1;
  return analyze_drg(adjacency);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");

  auto next_line = [&](std::string& line) {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw Error(ErrorCode::ParseError, "missing header line");
  long long n = 0, m = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra))
      throw Error(ErrorCode::ParseError, "header must be 'n m': " + line);
  }
  if (n <= 0 || m < 0) throw Error(ErrorCode::ParseError, "bad header values");

  IMat adjacency = IMat::Zero(n, n);
  for (long long e = 0; e < m; ++e) {
    if (!next_line(line))
      throw Error(ErrorCode::ParseError,
                  "expected " + std::to_string(m) + " edges, got " + std::to_string(e));
    std::istringstream es(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(es >> u >> v) || (es >> extra))
      throw Error(ErrorCode::ParseError, "bad edge line: " + line);
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(ErrorCode::ParseError, "edge endpoint out of range: " + line);
    if (u == v) throw Error(ErrorCode::ParseError, "self-loop: " + line);
    if (u > v) throw Error(ErrorCode::ParseError, "edges must satisfy u < v: " + line);
    if (adjacency(u, v) != 0)
      throw Error(ErrorCode::ParseError, "duplicate edge: " + line);
    adjacency(u, v) = adjacency(v, u) = 1;
  }
  if (next_line(line))
    throw Error(ErrorCode::ParseError, "trailing content after edge list: " + line);
  return analyze_drg(adjacency);
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  long long m = 0;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (g.adjacency(u, v)) ++m;
  out << g.n << ' ' << m << '\n';
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (g.adjacency(u, v)) out << u << ' ' << v << '\n';
}

}  // namespace drgspin
