#pragma once

#include <string>
#include <vector>

#include "drgspin/common.hpp"

namespace drgspin {

// A certified distance-regular graph: distances, the full intersection
// number tensor p^h_{i,j}, valencies and the intersection array. Everything
// in this module is exact integer arithmetic.
struct Graph {
  int n = 0;
  int D = 0;
  IMat adjacency;               // symmetric 0/1, zero diagonal
  IMat dist;                    // BFS path-length distances
  std::vector<long long> p;     // (D+1)^3 tensor, index via pnum()
  std::vector<long long> k;     // valencies k_0..k_D
  std::vector<long long> b;     // b_0..b_D with b_D = 0
  std::vector<long long> c;     // c_0..c_D with c_0 = 0
  std::vector<long long> a;     // a_0..a_D

  long long pnum(int h, int i, int j) const {
    return p[(static_cast<size_t>(h) * (D + 1) + i) * (D + 1) + j];
  }
  // Vertices of the distance-i sphere around x.
  std::vector<int> sphere(int x, int i) const {
    std::vector<int> out;
    for (int y = 0; y < n; ++y)
      if (dist(x, y) == i) out.push_back(y);
    return out;
  }
};

// All-pairs distances by BFS from every source. -1 marks unreachable pairs.
IMat bfs_distances(const IMat& adjacency);
IMat bfs_distances_serial(const IMat& adjacency);

// Certify distance-regularity of a connected simple graph and fill in the
// intersection data. Throws NotDistanceRegular with a witness
// (h, i, j, y, z, y', z') on the first inconsistency under vertex order.
Graph analyze_drg(const IMat& adjacency);

Graph cycle_graph(int N);        // N >= 7 so that D >= 3
Graph hypercube_graph(int d);    // d >= 3

// Edge-list file format: "n m" header, then m lines "u v" with
// 0 <= u < v < n. '#' comments and blank lines are ignored.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

}  // namespace drgspin
