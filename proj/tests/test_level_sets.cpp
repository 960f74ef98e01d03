#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "lvg/level_sets.hpp"
#include "lvg/lattice.hpp"
#include "test_util.hpp"

using namespace lvg;
using namespace lvg_test;

namespace {

ScalarField indicator_at_center(const LatticeWindow& w) {
  ScalarField u(w.graph, 0.0);
  u.set(4, 1.0);  // center of the 3x3 interior
  return u;
}

}  // namespace

TEST_CASE("superlevel sets") {
  GraphBuilder b;
  for (int k = 0; k < 3; ++k) b.add_vertex(k, 1.0);
  b.add_edge(0, 1, 1.0).add_edge(1, 2, 1.0);
  WeightedGraph g = b.build();
  ScalarField u(g, std::vector<double>{0.0, 1.0, 2.0});

  CHECK(superlevel_set(u, 0.0).size() == 3);   // sigma = min: everything
  CHECK(superlevel_set(u, 3.0).empty());       // above max: nothing
  VertexSet mid = superlevel_set(u, 1.0);      // ties included
  CHECK(mid.size() == 2);
  CHECK(mid.contains(1));
  CHECK(mid.contains(2));

  SUBCASE("nesting in sigma") {
    std::mt19937_64 rng(1);
    WeightedGraph rg = random_graph(rng);
    ScalarField ru = random_field(rng, rg);
    VertexSet lo = superlevel_set(ru, -1.0);
    VertexSet hi = superlevel_set(ru, 1.0);
    for (std::size_t i : hi.indices()) CHECK(lo.contains_index(i));
  }
}

TEST_CASE("cut edges never contain flat edges") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    WeightedGraph g = random_graph(rng);
    ScalarField u = random_field(rng, g);
    // plant a flat edge value pattern
    if (g.edge_count() > 0) {
      auto [ia, ib] = g.edge_endpoints(0);
      u[ib] = u[ia];
    }
    for (double sigma : audit_sigmas(u)) {
      for (const CutEdge& c : cut_edges(u, sigma)) {
        CHECK(c.gap > 0.0);
        CHECK(u[c.low] < sigma);
        CHECK(u[c.high] >= sigma);
      }
    }
  }
}

TEST_CASE("flux identity: the lattice indicator example") {
  LatticeWindow w = make_lattice_window(3, true);
  ScalarField u = indicator_at_center(w);
  FluxIdentity fi = flux_identity_check(u, 0.5);
  CHECK(fi.neg_laplacian_integral == doctest::Approx(4.0));
  CHECK(fi.flux == doctest::Approx(4.0));
  CHECK(g_sigma(u, 0.5) == doctest::Approx(4.0));
  CHECK(cut_weight(u, 0.5) == doctest::Approx(4.0));
}

TEST_CASE("flux identity on random graphs at random levels") {
  std::mt19937_64 rng(1234);
  int cases = 0;
  std::uniform_real_distribution<double> sig(-6.0, 6.0);
  while (cases < 120) {
    WeightedGraph g = random_graph(rng);
    ScalarField u = random_field(rng, g);
    for (int k = 0; k < 3; ++k, ++cases) {
      FluxIdentity fi = flux_identity_check(u, sig(rng));
      CHECK(std::abs(fi.neg_laplacian_integral - fi.flux) <=
            1e-10 * (1.0 + std::abs(fi.neg_laplacian_integral)));
    }
  }
  SUBCASE("constant field: both sides vanish at every level") {
    WeightedGraph g = random_graph(rng);
    ScalarField u(g, 1.5);
    FluxIdentity fi = flux_identity_check(u, 1.0);
    CHECK(fi.neg_laplacian_integral == 0.0);
    CHECK(fi.flux == 0.0);
  }
}

TEST_CASE("interior antisymmetry vanishes") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 60; ++rep) {
    WeightedGraph g = random_graph(rng);
    ScalarField u = random_field(rng, g);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
      if (rng() % 2 == 0) members.push_back(i);
    }
    VertexSet s = VertexSet::from_indices(g, members);
    double a = interior_antisymmetry(u, s);
    double scale = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) scale = std::max(scale, std::abs(u[i]));
    CHECK(std::abs(a) <= 1e-12 * (1.0 + scale * g.edge_count()));
  }
  SUBCASE("two vertices joined by one edge") {
    GraphBuilder b;
    b.add_vertex(0, 1.0).add_vertex(1, 1.0).add_edge(0, 1, 2.5);
    WeightedGraph g = b.build();
    ScalarField u(g, std::vector<double>{3.0, -4.0});
    VertexSet s(g, std::vector<VertexId>{0, 1});
    CHECK(interior_antisymmetry(u, s) == 0.0);
  }
}

TEST_CASE("g_sigma values") {
  GraphBuilder b;
  b.add_vertex(0, 1.0).add_vertex(1, 1.0).add_edge(0, 1, 1.0);
  WeightedGraph g = b.build();
  ScalarField u(g, std::vector<double>{0.0, 2.0});
  CHECK(g_sigma(u, 1.0) == doctest::Approx(0.5));
  CHECK(g_sigma(u, 5.0) == 0.0);

  LatticeWindow w = make_lattice_window(3, true);
  CHECK(g_sigma(indicator_at_center(w), 0.5) == doctest::Approx(4.0));
}

TEST_CASE("exact exponential coarea") {
  SUBCASE("constant field gives zero") {
    LatticeWindow w = make_lattice_window(2, false);
    ScalarField u(w.graph, 0.7);
    CHECK(exact_exp_coarea(u) == 0.0);
  }
  SUBCASE("single rising edge") {
    GraphBuilder b;
    b.add_vertex(0, 1.0).add_vertex(1, 1.0).add_edge(0, 1, 1.0);
    WeightedGraph g = b.build();
    ScalarField u(g, std::vector<double>{0.0, 1.0});
    CHECK(exact_exp_coarea(u) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  }
  SUBCASE("closed form vs adaptive quadrature on random fields") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
      WeightedGraph g = random_graph(rng);
      ScalarField u = random_field(rng, g);
      double closed = exact_exp_coarea(u);
      std::vector<double> bps = breakpoints(u);
      double quad = 0.0;
      for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
        quad += adaptive_simpson([&](double s) { return std::exp(s) * g_sigma(u, s); },
                                 bps[k], bps[k + 1], 1e-12);
      }
      CHECK(closed == doctest::Approx(quad).epsilon(1e-6));
    }
  }
  SUBCASE("bounded by Deg(G) times the energy for any field") {
    std::mt19937_64 rng(32);
    for (int rep = 0; rep < 60; ++rep) {
      WeightedGraph g = random_graph(rng);
      ScalarField u = random_field(rng, g);
      double lhs = exact_exp_coarea(u);
      double rhs = deg_sup(g) * energy(u);
      CHECK(lhs <= rhs + 1e-9 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST_CASE("elementary inequality") {
  CHECK(elementary_inequality_check(0.0, 1.0));
  CHECK((std::exp(1.0) - 1.0) / 1.0 == doctest::Approx(1.718281828).epsilon(1e-9));
  CHECK(elementary_inequality_check(-50.0, -49.0));
  CHECK_THROWS_AS(elementary_inequality_check(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(elementary_inequality_check(2.0, 1.0), std::invalid_argument);

  SUBCASE("holds on random pairs") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> d(-40.0, 40.0);
    for (int k = 0; k < 10000; ++k) {
      double a = d(rng), b = d(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      CHECK(elementary_inequality_check(a, b));
    }
  }
  SUBCASE("vanishing gap approaches the bound from below") {
    double b = 1.0;
    for (double gap : {1e-2, 1e-4, 1e-6}) {
      double secant = (std::exp(b) - std::exp(b - gap)) / gap;
      CHECK(secant < std::exp(b));
      CHECK(secant / std::exp(b) > 1.0 - gap);
    }
  }
}

TEST_CASE("Cauchy-Schwarz step") {
  SUBCASE("equal gaps give equality: lattice indicator") {
    LatticeWindow w = make_lattice_window(3, true);
    CauchySchwarzStep cs = cauchy_schwarz_step(indicator_at_center(w), 0.5);
    CHECK(cs.lhs == doctest::Approx(16.0));
    CHECK(cs.rhs == doctest::Approx(16.0));
    CHECK(std::abs(cs.lhs - cs.rhs) <= 1e-12 * (1.0 + cs.rhs));
  }
  SUBCASE("random fields and levels: lhs >= rhs, equality iff equal gaps") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> sig(-6.0, 6.0);
    int pairs = 0;
    while (pairs < 1000) {
      WeightedGraph g = random_graph(rng);
      ScalarField u = random_field(rng, g);
      for (int k = 0; k < 5 && pairs < 1000; ++k, ++pairs) {
        double s = sig(rng);
        CauchySchwarzStep cs = cauchy_schwarz_step(u, s);
        double scale = 1.0 + std::max(std::abs(cs.lhs), std::abs(cs.rhs));
        CHECK(cs.lhs >= cs.rhs - 1e-9 * scale);

        auto cuts = cut_edges(u, s);
        bool equal_gaps = true;
        for (const CutEdge& c : cuts) {
          if (std::abs(c.gap - cuts.front().gap) > 1e-12) equal_gaps = false;
        }
        if (!cuts.empty() && !equal_gaps) {
          CHECK(cs.lhs > cs.rhs + 0.0);  // strict when gaps differ
        }
      }
    }
  }
}

TEST_CASE("layer cake identity") {
  SUBCASE("constant field") {
    LatticeWindow w = make_lattice_window(3, false);
    ScalarField u(w.graph, 2.0);
    LayerCake lc = layer_cake(u);
    double expected = w.graph.total_measure() * std::exp(2.0);
    CHECK(lc.breakpoint_integral == doctest::Approx(expected).epsilon(1e-14));
    CHECK(lc.vertex_sum == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("two-point field, decomposed by hand") {
    GraphBuilder b;
    b.add_vertex(0, 1.0).add_vertex(1, 3.0).add_edge(0, 1, 1.0);
    WeightedGraph g = b.build();
    ScalarField u(g, std::vector<double>{0.0, 1.0});
    // integral of mu(Omega_sigma) e^sigma: 4 e^0 + 3 (e^1 - e^0)
    LayerCake lc = layer_cake(u);
    CHECK(lc.breakpoint_integral ==
          doctest::Approx(4.0 + 3.0 * (std::exp(1.0) - 1.0)).epsilon(1e-14));
    CHECK(lc.vertex_sum ==
          doctest::Approx(1.0 + 3.0 * std::exp(1.0)).epsilon(1e-14));
    CHECK(lc.breakpoint_integral == doctest::Approx(lc.vertex_sum).epsilon(1e-14));
  }
  SUBCASE("random fields: equality and quadrature oracle") {
    std::mt19937_64 rng(481);
    for (int rep = 0; rep < 40; ++rep) {
      WeightedGraph g = random_graph(rng);
      ScalarField u = random_field(rng, g);
      LayerCake lc = layer_cake(u);
      CHECK(std::abs(lc.breakpoint_integral - lc.vertex_sum) <=
            1e-10 * (1.0 + std::abs(lc.vertex_sum)));
      if (rep < 10) {
        std::vector<double> bps = breakpoints(u);
        auto mu_omega = [&](double s) { return set_measure(superlevel_set(u, s)); };
        double quad = adaptive_simpson(
            [&](double s) { return mu_omega(s) * std::exp(s); }, bps.front() - 40.0,
            bps.front(), 1e-12);
        for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
          quad += adaptive_simpson(
              [&](double s) { return mu_omega(s) * std::exp(s); }, bps[k],
              bps[k + 1], 1e-12);
        }
        CHECK(quad == doctest::Approx(lc.vertex_sum).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("G is a step function between breakpoints") {
  std::mt19937_64 rng(6);
  WeightedGraph g = random_graph(rng);
  ScalarField u = random_field(rng, g);
  std::vector<double> bps = breakpoints(u);
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    double a = bps[k], b = bps[k + 1];
    double g_mid = g_sigma(u, 0.5 * (a + b));
    // constant across the open interval
    for (double t : {0.1, 0.35, 0.77, 0.93}) {
      CHECK(g_sigma(u, a + t * (b - a)) == g_mid);
    }
    // interval integral of e^sigma G matches the constant-G closed form
    double quad = adaptive_simpson(
        [&](double s) { return std::exp(s) * g_sigma(u, s); }, a, b, 1e-13);
    CHECK(quad ==
          doctest::Approx(g_mid * (std::exp(b) - std::exp(a))).epsilon(1e-9));
  }
}

TEST_CASE("level set profile") {
  LatticeWindow w = make_lattice_window(3, true);
  ScalarField u = indicator_at_center(w);
  std::vector<double> sigmas{0.5, 1.0, 2.0};
  LevelSetProfile prof = level_set_profile(u, sigmas);
  CHECK(prof.breakpoints == std::vector<double>{0.0, 1.0});
  REQUIRE(prof.entries.size() == 3);
  CHECK(prof.entries[0].omega.size() == 1);
  CHECK(prof.entries[0].cuts.size() == 4);
  CHECK(prof.entries[0].flux == doctest::Approx(4.0));
  CHECK(prof.entries[0].g_sigma == doctest::Approx(4.0));
  CHECK(prof.entries[0].mu_omega == doctest::Approx(4.0));
  CHECK(prof.entries[1].omega.size() == 1);  // ties included at sigma = 1
  CHECK(prof.entries[2].omega.empty());
  CHECK(prof.entries[2].cuts.empty());
}

TEST_CASE("chain audit") {
  SUBCASE("rejects non-positive c_is") {
    LatticeWindow w = make_lattice_window(2, true);
    ScalarField u(w.graph, 0.0);
    CHECK_THROWS_AS(chain_audit(w.graph, u, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chain_audit(w.graph, u, -1.0, 0.0), std::invalid_argument);
  }
  SUBCASE("constant field, generic steps only") {
    LatticeWindow w = make_lattice_window(3, true);
    ScalarField u(w.graph, -1.0);
    ChainLedger led = chain_audit(w.graph, u, 123.0,
                                  std::numeric_limits<double>::infinity());
    CHECK(led.all_passed);
    CHECK(led.exact_sigma_integral == 0.0);
    CHECK(led.layer_cake_ok);
    for (const AuditRecord& r : led.records) CHECK(!r.solution_audited);
  }
  SUBCASE("lattice corollary constants") {
    LatticeWindow w = make_lattice_window(3, true);
    ScalarField u(w.graph, 0.0);
    ChainLedger led = chain_audit(w.graph, u, 4.0,
                                  std::numeric_limits<double>::infinity());
    CHECK(led.deg_sup == 1.0);
    CHECK(led.final_lower_bound == 4.0);
  }
  SUBCASE("generic steps pass on arbitrary random fields") {
    std::mt19937_64 rng(1001);
    for (int rep = 0; rep < 15; ++rep) {
      WeightedGraph g = random_graph(rng);
      ScalarField u = random_field(rng, g);
      ChainLedger led = chain_audit(g, u, 1.0,
                                    std::numeric_limits<double>::infinity());
      CHECK(led.all_passed);
      CHECK(led.deg_bound_ok);
      CHECK(led.elementary_ok);
      CHECK(led.coarea_ok);
      CHECK(led.layer_cake_ok);
    }
  }
  SUBCASE("solution gate excludes levels touching the boundary data") {
    LatticeWindow w = make_lattice_window(2, true);
    ScalarField u(w.graph, 0.0);
    for (VertexId id : w.meta.interior) u.set(id, 1.0);
    // sigma_min = 0 = boundary level: at sigma = 0 and 0.5 the set reaches
    // into the ghost ring or sits exactly on it; only levels fully above 0
    // audit the solution steps
    ChainLedger led = chain_audit(w.graph, u, 4.0, 0.0);
    for (const AuditRecord& r : led.records) {
      bool expect = r.sigma >= 0.0;
      // at sigma = 0 the superlevel set includes the ghost ring (u = 0 >= 0)
      if (r.sigma == 0.0) expect = false;
      CHECK(r.solution_audited == expect);
    }
  }
  SUBCASE("detects a corrupted interior value") {
    LatticeWindow w = make_lattice_window(3, true);
    // plant a field that satisfies nothing: solution steps must flag it
    ScalarField u(w.graph, 0.0);
    for (VertexId id : w.meta.interior) u.set(id, 1.0);
    u.set(4, 2.0);
    ChainLedger led = chain_audit(w.graph, u, 4.0, 0.0);
    CHECK(!led.all_passed);
    bool flux_failure = false;
    for (const std::string& f : led.failures) {
      if (f.find("flux-identity") != std::string::npos) flux_failure = true;
    }
    CHECK(flux_failure);
  }
  SUBCASE("ledger CSV shape") {
    LatticeWindow w = make_lattice_window(2, true);
    ScalarField u(w.graph, 0.25);
    ChainLedger led = chain_audit(w.graph, u, 4.0, 1.0);
    std::string csv = ledger_to_csv(led);
    CHECK(csv.rfind("sigma,g_sigma,flux,cut_weight,mu_omega\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          1 + static_cast<long>(led.records.size()));
  }
}
