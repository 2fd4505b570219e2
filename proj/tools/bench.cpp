// Benchmark comparing the serial reference kernels with their
// OpenMP-parallel counterparts.
#include <chrono>
#include <cstdio>

#include "drgspin/dual.hpp"
#include "drgspin/feasibility.hpp"
#include "drgspin/graph.hpp"
#include "drgspin/qracah.hpp"
#include "drgspin/spectral.hpp"
#include "drgspin/spinmodel.hpp"

using namespace drgspin;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, double diff) {
  std::printf("%-24s %10.1f ms %10.1f ms   x%-5.2f  |delta| = %.3g\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms, diff);
}

}  // namespace

int main() {
  std::printf("%-24s %13s %13s   %-7s\n", "kernel", "serial", "openmp", "speedup");

  {  // all-pairs BFS
    IMat adj = IMat::Zero(6000, 6000);
    for (int i = 0; i < 6000; ++i) {
      adj(i, (i + 1) % 6000) = adj((i + 1) % 6000, i) = 1;
      adj(i, (i + 17) % 6000) = adj((i + 17) % 6000, i) = 1;
    }
    auto t0 = clk::now();
    IMat d1 = bfs_distances_serial(adj);
    const double s = ms_since(t0);
    t0 = clk::now();
    IMat d2 = bfs_distances(adj);
    const double p = ms_since(t0);
    row("bfs_distances", s, p, (d1 - d2).cast<double>().norm());
  }

  // a spin model on a largish cycle for the dense kernels
  const Graph g = cycle_graph(31);
  SpectralData sd = eigendecompose(g);
  krein_and_eigenmatrices(g, sd);
  auto orderings = find_qpoly_orderings(sd);
  SpectralData so = reorder(sd, orderings.front().perm);
  std::vector<double> theta(so.theta.data(), so.theta.data() + g.D + 1);
  QRacahParams params = fit_qracah(theta).front();
  DualStructure du = dual_structure(g, so, 0);
  BoltzmannPair bp = boltzmann_pair(g, so, du, params, FMode::Theorem);

  {  // star-triangle brute force, O(n^4)
    auto t0 = clk::now();
    const double r1 = type3_max_residual_serial(bp.W);
    const double s = ms_since(t0);
    t0 = clk::now();
    const double r2 = type3_max_residual(bp.W);
    const double p = ms_since(t0);
    row("type3_bruteforce", s, p, std::abs(r1 - r2));
  }

  {  // Nomura eigenvector condition, O(n^3 D)
    auto t0 = clk::now();
    const double r1 = nomura_max_residual_serial(bp.W, g);
    const double s = ms_since(t0);
    t0 = clk::now();
    const double r2 = nomura_max_residual(bp.W, g);
    const double p = ms_since(t0);
    row("nomura_membership", s, p, std::abs(r1 - r2));
  }

  {  // identity harness samples
    auto t0 = clk::now();
    HarnessReport h1;
    {
      // serial reference: same samples, one thread of work
      h1.D = 5;
      for (int i = 0; i < 400; ++i) {
        ResidualMap rm = identity_residuals(harness_sample(5, 99, i));
        for (const auto& [name, c] : rm.entries())
          if (!c.skipped) {
            bool found = false;
            for (auto& [n2, e] : h1.identities)
              if (n2 == name) {
                e.max_residual = std::max(e.max_residual, c.value);
                found = true;
              }
            if (!found) h1.identities.emplace_back(name, HarnessEntry{c.value, 1, 0});
          }
      }
      const double s = ms_since(t0);
      t0 = clk::now();
      HarnessReport h2 = identity_harness(5, 400, 99);
      const double p = ms_since(t0);
      row("identity_harness", s, p,
          std::abs(h1.max_residual() - h2.max_residual()));
    }
  }

  {  // feasibility scan (real grid only, coarse)
    GridSpec spec;
    spec.unit_circle = false;
    spec.real_q_step = 4e-3;
    spec.real_a_step = 4e-3;
    auto t0 = clk::now();
    auto c2 = scan(4, spec);
    const double p = ms_since(t0);
    std::printf("%-24s %13s %10.1f ms   (%zu candidates)\n", "feasibility_scan",
                "-", p, c2.size());
  }
  return 0;
}
