#include "drgspin/pipeline.hpp"

#include <chrono>

#include "drgspin/counting.hpp"
#include "drgspin/dual.hpp"
#include "drgspin/graph.hpp"
#include "drgspin/spectral.hpp"
#include "drgspin/spinmodel.hpp"

namespace drgspin {

namespace {

constexpr int kType3Cap = 64;

json error_to_json(const Error& e) {
  json out{{"code", error_name(e.code())}, {"message", e.detail()}};
  if (!e.witness().empty()) out["witness"] = e.witness();
  return out;
}

json params_to_json(const QRacahParams& p) {
  return json{{"q", complex_to_json(p.q)},
              {"a", complex_to_json(p.a)},
              {"alpha", complex_to_json(p.alpha)},
              {"epsilon", complex_to_json(p.epsilon)},
              {"fit_residual", p.fit_residual},
              {"admissible", p.admissible},
              {"bipartite", p.bipartite},
              {"almost_bipartite", p.almost_bipartite}};
}

// Everything computed for one base vertex.
ResidualMap vertex_residuals(const Graph& g, const SpectralData& s,
                             const QRacahParams& p, int x,
                             const AnalyzeOptions& opt, json& vrec) {
  ResidualMap rm;

  DualStructure d = dual_structure(g, s, x, opt.tolerance);
  rm.merge(verify_dual_identities(g, s, d), "dual");

  CentralElement z = build_Z(g, s, d, p, opt.tolerance);
  rm.set("z.gate", z.gate_residual);
  rm.set("z.centrality", centrality_residual(z.Z, g, s, d));
  double proj = 0.0;
  for (double v : z.z_on_E) proj = std::max(proj, v);
  rm.set("z.action_on_E", proj);
  proj = 0.0;
  for (double v : z.z_on_Estar) proj = std::max(proj, v);
  rm.set("z.action_on_Estar", proj);

  ResidualMap abc_extra;
  AbcTriple abc = build_abc(g, s, d, p, z.Z, &abc_extra);
  rm.merge(abc_extra, "aw");
  rm.merge(verify_askey_wilson(abc, z.Z, p), "aw");

  // spectrum of Z against the module eigenvalue formula
  {
    auto zspec = z_spectrum_check(z.Z, p);
    json list = json::array();
    bool all_matched = true;
    for (const auto& e : zspec) {
      json entry{{"eigenvalue", complex_to_json(e.eigenvalue)},
                 {"multiplicity", e.multiplicity},
                 {"matched", e.matched}};
      if (e.matched) {
        entry["endpoint"] = e.r;
        entry["diameter"] = e.d;
        entry["mismatch"] = e.mismatch;
      }
      all_matched = all_matched && e.matched;
      list.push_back(entry);
    }
    vrec["z_spectrum"] = list;
    vrec["z_spectrum_all_matched"] = all_matched;  // finding, not a failure
  }

  BoltzmannPair bp = boltzmann_pair(g, s, d, p, FMode::Theorem);
  rm.merge(verify_intertwiners(bp, abc, p), "spin");
  rm.merge(verify_braid_and_rho(bp, abc, s, d), "spin");
  rm.merge(verify_type2_and_expansions(bp, g, d), "spin");

  const bool brute = opt.type3_bruteforce && g.n <= kType3Cap;
  SpinVerdict verdict =
      spin_verdict(bp.W, g, bp.f * bp.f / bp.sum_tauinv_k, brute, opt.tolerance);
  rm.merge(verdict.residuals, "spin");

  // the transpose-inverse must again be a spin model
  {
    Mat wm = wminus(bp.W);
    SpinVerdict mv = spin_verdict(wm, g, std::sqrt(double(g.n)) / (bp.f * bp.f) *
                                             bp.sum_tauinv_k,
                                  brute, opt.tolerance);
    rm.set("spin.wminus.symmetry", mv.residuals.find("symmetry")->value);
    rm.set("spin.wminus.type2", mv.residuals.find("type2")->value);
    const Check* t3 = mv.residuals.find("type3_max");
    if (t3->skipped)
      rm.skip("spin.wminus.type3_max", t3->reason);
    else
      rm.set("spin.wminus.type3_max", t3->value);
    Mat wmm = wminus(wm);
    rm.set("spin.wminus.involution", mat_residual(wmm, bp.W));
  }

  // braid-based verdict and brute-force verdict must agree
  const Check* braid = rm.find("spin.braid");
  const Check* t3 = rm.find("spin.type3_max");
  const bool braid_ok = braid->value < opt.tolerance;
  if (t3->skipped)
    rm.skip("spin.verdict_agreement", "type3 brute force disabled");
  else
    rm.set("spin.verdict_agreement",
           braid_ok == (t3->value < opt.tolerance) ? 0.0 : 1.0);
  vrec["is_spin_model"] = t3->skipped ? braid_ok : verdict.is_spin_model;
  vrec["is_afforded"] = verdict.is_afforded;

  // combinatorial counting suite
  CountStats stats;
  rm.merge(verify_z_counts(g, p, x, &stats), "combin");
  rm.merge(verify_c2_splits(g, p, x, &stats), "combin");
  rm.merge(verify_same_layer(g, p, x, &stats), "combin");
  rm.merge(verify_inequality(g, p, x, &stats), "combin");
  rm.merge(verify_matrix_eq(g, p, d, x), "combin");
  rm.merge(local_graph_srg(g, &p, x, &stats), "combin");
  vrec["constancy_violation"] = stats.constancy_violation;
  if (!stats.notes.empty()) vrec["notes"] = stats.notes;

  return rm;
}

}  // namespace

AnalyzeResult run_analysis(const AnalyzeOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  AnalyzeResult res;
  json& rep = res.report;
  rep["tool"] = json{{"name", kToolName}, {"version", kToolVersion}};
  {
    json inv;
    switch (opt.source) {
      case AnalyzeOptions::Source::Cycle:
        inv["source"] = "cycle";
        inv["size"] = opt.size;
        break;
      case AnalyzeOptions::Source::Hypercube:
        inv["source"] = "hypercube";
        inv["size"] = opt.size;
        break;
      case AnalyzeOptions::Source::File:
        inv["source"] = "file";
        inv["path"] = opt.path;
        break;
    }
    inv["base_vertex"] = opt.base_vertex;
    inv["all_vertices"] = opt.all_vertices;
    inv["tolerance"] = opt.tolerance;
    inv["type3_bruteforce"] = opt.type3_bruteforce;
    inv["seed"] = opt.seed;
    rep["invocation"] = inv;
  }

  auto finish = [&](int code) {
    rep["overall"] = code == 0 ? "pass" : "fail";
    if (opt.timing)
      rep["wall_time_ms"] =
          std::chrono::duration_cast<std::chrono::milliseconds>(
              std::chrono::steady_clock::now() - t0)
              .count();
    res.exit_code = code;
    return res;
  };

  // ---- graph stage ----
  Graph g;
  try {
    switch (opt.source) {
      case AnalyzeOptions::Source::Cycle:
        g = cycle_graph(opt.size);
        break;
      case AnalyzeOptions::Source::Hypercube:
        g = hypercube_graph(opt.size);
        break;
      case AnalyzeOptions::Source::File:
        g = load_graph(opt.path);
        break;
    }
  } catch (const Error& e) {
    rep["error"] = error_to_json(e);
    return finish(e.code() == ErrorCode::ParseError ? 2 : 1);
  }
  rep["graph"] = json{{"n", g.n}, {"D", g.D}, {"k", g.k},
                      {"b", g.b}, {"c", g.c}, {"a", g.a}};
  if (opt.base_vertex < 0 || opt.base_vertex >= g.n) {
    rep["error"] = json{{"code", "UsageError"},
                        {"message", "base vertex out of range"}};
    return finish(2);
  }

  ResidualMap global;

  // ---- spectral stage ----
  SpectralData s;
  std::vector<QPolyOrdering> orderings;
  try {
    s = eigendecompose(g);
    krein_and_eigenmatrices(g, s);

    const int m = g.D + 1;
    const RMat I = RMat::Identity(g.n, g.n);
    double idem = 0.0, expand = 0.0;
    RMat sum = RMat::Zero(g.n, g.n);
    for (int i = 0; i < m; ++i) {
      sum += s.E[i];
      for (int j = 0; j < m; ++j)
        idem = std::max(idem, mat_residual(s.E[i] * s.E[j],
                                           i == j ? s.E[i] : RMat(0.0 * I)));
    }
    global.set("spectral.idempotents", idem);
    global.set("spectral.sum_to_identity", mat_residual(sum, I));
    global.set("spectral.e0",
               mat_residual(s.E[0], RMat::Constant(g.n, g.n, 1.0 / g.n)));
    for (int j = 0; j < m; ++j) {
      RMat aj = RMat::Zero(g.n, g.n);
      for (int i = 0; i < m; ++i) aj += s.P(i, j) * s.E[i];
      RMat target = RMat::Zero(g.n, g.n);
      for (int y = 0; y < g.n; ++y)
        for (int z = 0; z < g.n; ++z)
          if (g.dist(y, z) == j) target(y, z) = 1.0;
      expand = std::max(expand, mat_residual(aj, target));
    }
    global.set("spectral.eigenmatrix_expansion", expand);
    global.set("spectral.pq",
               mat_residual(s.P * s.Q, double(g.n) * RMat::Identity(m, m)));
    double kmin = 0.0;
    for (double v : s.krein) kmin = std::min(kmin, v);
    global.set("spectral.krein_nonnegative", std::max(0.0, -kmin));
    long long ksum = 0;
    for (long long v : s.kstar) ksum += v;
    global.set("spectral.multiplicity_sum", ksum == g.n ? 0.0 : 1.0);

    orderings = find_qpoly_orderings(s, opt.tolerance);
    json olist = json::array();
    for (const auto& o : orderings)
      olist.push_back(json{{"perm", o.perm},
                           {"q_polynomial", o.is_q_poly},
                           {"formally_self_dual", o.formally_self_dual},
                           {"pq_residual", o.pq_residual},
                           {"theta_star_residual", o.theta_star_residual}});
    rep["spectral"] = json{{"theta", std::vector<double>(
                                         s.theta.data(), s.theta.data() + m)},
                           {"kstar", s.kstar},
                           {"orderings", olist}};
  } catch (const Error& e) {
    rep["error"] = error_to_json(e);
    rep["residuals"] = residuals_to_json(global);
    return finish(1);
  }

  // ---- q-Racah fits per formally self-dual ordering ----
  struct FitCandidate {
    int ordering_index;
    SpectralData reordered;
    QRacahParams params;
    double tables_match;
  };
  std::vector<FitCandidate> candidates;
  json fits = json::array();
  std::optional<Error> fit_error;
  for (size_t oi = 0; oi < orderings.size(); ++oi) {
    if (!orderings[oi].formally_self_dual) continue;
    SpectralData so = reorder(s, orderings[oi].perm);
    std::vector<double> theta(so.theta.data(), so.theta.data() + g.D + 1);
    try {
      for (QRacahParams& p : fit_qracah(theta)) {
        FitCandidate c{static_cast<int>(oi), so, std::move(p), 0.0};
        const AppendixTables t = scalar_tables(c.params);
        double match = 0.0;
        for (int i = 0; i <= g.D; ++i) {
          match = std::max(match, std::abs(t.b[i] - double(g.b[i])));
          match = std::max(match, std::abs(t.c[i] - double(g.c[i])));
          match = std::max(match, std::abs(t.a[i] - double(g.a[i])));
        }
        c.tables_match = match;
        json f = params_to_json(c.params);
        f["ordering"] = oi;
        f["tables_match"] = match;
        fits.push_back(f);
        candidates.push_back(std::move(c));
      }
    } catch (const Error& e) {
      if (!fit_error) fit_error = e;
    }
  }
  rep["qracah"] = json{{"fits", fits}};
  if (candidates.empty()) {
    if (!orderings.empty() && fit_error) {
      rep["qracah"]["error"] = error_to_json(*fit_error);
      rep["error"] = error_to_json(*fit_error);
    } else {
      json e{{"code", "NotQRacah"},
             {"message", "no formally self-dual Q-polynomial ordering found"}};
      rep["qracah"]["error"] = e;
      rep["error"] = e;
    }
    rep["residuals"] = residuals_to_json(global);
    return finish(1);
  }

  // Pick the first candidate whose closed-form tables reproduce the graph
  // data and whose central-element gate passes at the base vertex.
  int selected = -1;
  std::string gate_note;
  for (size_t ci = 0; ci < candidates.size(); ++ci) {
    if (candidates[ci].tables_match > 1e-6) continue;
    try {
      DualStructure d0 = dual_structure(g, candidates[ci].reordered,
                                        opt.base_vertex, opt.tolerance);
      build_Z(g, candidates[ci].reordered, d0, candidates[ci].params,
              opt.tolerance);
      selected = static_cast<int>(ci);
      break;
    } catch (const Error& e) {
      if (gate_note.empty()) gate_note = e.what();
    }
  }
  if (selected < 0) {
    json e{{"code", "AssumptionFails"},
           {"message", gate_note.empty()
                           ? "no fit reproduces the intersection arrays"
                           : gate_note}};
    rep["qracah"]["error"] = e;
    rep["error"] = e;
    rep["residuals"] = residuals_to_json(global);
    return finish(1);
  }
  const FitCandidate& chosen = candidates[selected];
  rep["selected"] = json{{"ordering", chosen.ordering_index},
                         {"fit", selected},
                         {"tables_match", chosen.tables_match}};

  {
    const QPolyOrdering& o = orderings[chosen.ordering_index];
    global.set("spectral.ordering_pq", o.pq_residual);
    global.set("spectral.ordering_theta_star", o.theta_star_residual);
    global.set("qracah.fit", chosen.params.fit_residual);
    global.set("qracah.tables_match", chosen.tables_match);
    const AppendixTables t = scalar_tables(chosen.params);
    global.set("qracah.alpha_closed_form",
               rel_residual(chosen.params.alpha, t.alpha_cf));
    global.set("qracah.epsilon_closed_form",
               rel_residual(chosen.params.epsilon, t.epsilon_cf));
    double theta_form = 0.0;
    for (int i = 0; i <= g.D; ++i)
      theta_form = std::max(
          theta_form,
          rel_residual(cx(chosen.reordered.theta(i)),
                       chosen.params.alpha * chosen.params.vartheta[i] +
                           chosen.params.epsilon));
    global.set("qracah.eigenvalue_form", theta_form);
  }

  // ---- per-vertex verification ----
  std::vector<int> vertices;
  if (opt.all_vertices)
    for (int x = 0; x < g.n; ++x) vertices.push_back(x);
  else
    vertices.push_back(opt.base_vertex);

  json vlist = json::array();
  bool vertex_failed = false;
  double worst = global.max_value();
  for (int x : vertices) {
    json vrec;
    vrec["x"] = x;
    try {
      ResidualMap rm = vertex_residuals(g, chosen.reordered, chosen.params, x,
                                        opt, vrec);
      vrec["residuals"] = residuals_to_json(rm);
      vrec["max_residual"] = rm.max_value();
      worst = std::max(worst, rm.max_value());
    } catch (const Error& e) {
      vrec["error"] = error_to_json(e);
      vertex_failed = true;
    }
    vlist.push_back(vrec);
  }
  rep["residuals"] = residuals_to_json(global);
  rep["vertices"] = vlist;
  rep["max_residual"] = worst;

  const bool pass = !vertex_failed && worst < opt.tolerance;
  return finish(pass ? 0 : 1);
}

}  // namespace drgspin
