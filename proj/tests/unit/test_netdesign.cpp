#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "specround/error.hpp"
#include "specround/netdesign.hpp"

using namespace specround;
using netdesign::NetworkDesignInstance;

namespace {

const netdesign::FamilyCheck& family(const netdesign::ImplicationReport& r, const std::string& name) {
  for (const auto& f : r.families)
    if (f.name == name) return f;
  FAIL("missing family " << name);
  return r.families.front();
}

NetworkDesignInstance make(graph::Graph g) {
  NetworkDesignInstance nd;
  nd.g = std::move(g);
  return nd;
}

// min over cuts of z(delta(S)) - f(S), by enumeration over all 2^n sides.
double brute_cut_slack(const graph::Graph& g, const std::vector<double>& z, double f) {
  const int n = g.num_vertices();
  double worst = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    double w = 0.0;
    for (int e = 0; e < g.num_edges(); ++e) {
      const auto& ed = g.edge(e);
      if (((mask >> ed.u) & 1) != ((mask >> ed.v) & 1)) w += z[static_cast<std::size_t>(e)];
    }
    worst = std::min(worst, w - f);
  }
  return worst;
}

std::vector<std::pair<int, int>> pairs_of(const graph::Graph& g) {
  std::vector<std::pair<int, int>> p;
  for (const auto& e : g.edges()) p.emplace_back(e.u, e.v);
  return p;
}

}  // namespace

TEST_SUITE("netdesign") {
  TEST_CASE("graph_to_vectors examples") {
    auto inst = netdesign::graph_to_vectors(make(graph::path_graph(2)));
    CHECK(inst.n() == 1);
    CHECK(inst.vectors.col(0).norm() == doctest::Approx(1.0));

    inst = netdesign::graph_to_vectors(make(graph::complete_graph(3)));
    CHECK(inst.n() == 2);
    for (int e = 0; e < 3; ++e) CHECK(inst.vectors.col(e).squaredNorm() == doctest::Approx(2.0 / 3.0));

    inst = netdesign::graph_to_vectors(make(graph::path_graph(4)));
    CHECK(inst.is_isotropic());
    for (int e = 0; e < 3; ++e) CHECK(inst.vectors.col(e).squaredNorm() == doctest::Approx(1.0));
  }

  TEST_CASE("norm equals effective resistance on random weighted graphs") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const graph::Graph g = testing::random_connected_graph(7, 8, seed, 0.1, 1.0);
      const auto inst = netdesign::graph_to_vectors(make(g));
      CHECK(inst.isotropy_error() <= 1e-8);
      const auto pairs = pairs_of(g);
      for (int e = 0; e < g.num_edges(); ++e) {
        const double r = oracle::effective_resistance(7, pairs, g.weights(), g.edge(e).u, g.edge(e).v);
        CHECK(std::abs(inst.vectors.col(e).squaredNorm() - r) <= 1e-8);
      }
    }
  }

  TEST_CASE("disconnected support is rejected") {
    graph::Graph g(4, {{0, 1, 1.0, 1.0}, {2, 3, 1.0, 1.0}, {1, 2, 0.0, 1.0}});
    try {
      netdesign::graph_to_vectors(make(g));
      FAIL("expected DisconnectedSupport");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DisconnectedSupport);
    }
  }

  TEST_CASE("integral x rounds to itself") {
    NetworkDesignInstance nd = make(graph::cycle_graph(6));
    nd.requirements = netdesign::uniform_requirements(6, 2.0);
    const auto sol = netdesign::round_network(nd, {0.2, 1});
    CHECK(sol.z == std::vector<int>(6, 1));
    CHECK(sol.report.pass);
    const auto rep = netdesign::verify_spectral_implications(nd, std::vector<double>(6, 1.0), 0.0);
    CHECK(rep.pass);
    CHECK(rep.spectral_min == doctest::Approx(1.0));
  }

  TEST_CASE("unit K_6 at x = 1/2 with f = 2") {
    NetworkDesignInstance nd = make(graph::complete_graph(6, 0.5));
    nd.requirements = netdesign::uniform_requirements(6, 2.0);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto sol = netdesign::round_network(nd, {0.2, seed});
      CHECK(sol.report.exhaustive_cuts);
      CHECK(sol.report.cuts_checked == 31);
      CHECK(family(sol.report, "connectivity").pass);
      CHECK(family(sol.report, "spectral").pass);
      CHECK(sol.report.spectral_min >= 1.0 - 1e-7);
      std::vector<double> zd(sol.z.begin(), sol.z.end());
      CHECK(brute_cut_slack(nd.g, zd, 2.0) >= -1e-9);
      for (std::size_t e = 0; e < sol.z.size(); ++e) CHECK((sol.z[e] == 0 || nd.g.edges()[e].weight > 0.0));
      CHECK(sol.cost_within_bound);
    }
  }

  TEST_CASE("empty z fails connectivity") {
    NetworkDesignInstance nd = make(graph::complete_graph(4));
    nd.requirements = netdesign::uniform_requirements(4, 1.0);
    const auto rep = netdesign::verify_spectral_implications(nd, std::vector<double>(6, 0.0));
    CHECK_FALSE(family(rep, "connectivity").pass);
    CHECK_FALSE(rep.pass);
  }

  TEST_CASE("K_5 minus one edge matches brute force") {
    NetworkDesignInstance nd = make(graph::complete_graph(5));
    nd.requirements = netdesign::uniform_requirements(5, 2.0);
    std::vector<double> z(10, 1.0);
    z[3] = 0.0;
    const auto rep = netdesign::verify_spectral_implications(nd, z, 0.0);
    const auto& conn = family(rep, "connectivity");
    const double brute = brute_cut_slack(nd.g, z, 2.0);
    CHECK(conn.pass == (brute >= -1e-9));
    CHECK(conn.residual == doctest::Approx(brute));
    CHECK(conn.pass);
  }

  TEST_CASE("other families") {
    NetworkDesignInstance nd = make(graph::complete_graph(5, 0.5));
    nd.reff_bounds = {{0, 1, 0.8}};
    nd.algebraic_connectivity = 2.5;
    nd.spectral_lower = graph::laplacian(nd.g);
    nd.degree_bounds = std::vector<double>(5, 2.0);
    const auto rep = netdesign::verify_spectral_implications(nd, std::vector<double>(10, 0.5), 0.0);
    // z = x: Reff = 2/(0.5*5) = 0.8, lambda_2 = 2.5, degrees 2
    CHECK(family(rep, "reff").pass);
    CHECK(family(rep, "reff").residual == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(family(rep, "algebraic_connectivity").pass);
    CHECK(family(rep, "spectral_lower").pass);
    CHECK(family(rep, "degree").applicable);
    CHECK(family(rep, "degree").pass);

    const auto full = netdesign::verify_spectral_implications(nd, std::vector<double>(10, 1.0), 0.0);
    CHECK_FALSE(family(full, "degree").applicable);
    CHECK(full.pass);
  }

  TEST_CASE("quadratic form of L_z equals the cut weight") {
    NetworkDesignInstance nd = make(testing::random_connected_graph(8, 10, 4, 0.2, 0.9));
    const auto sol = netdesign::round_network(nd, {0.2, 2});
    const graph::Graph gz = nd.g.with_weights(std::vector<double>(sol.z.begin(), sol.z.end()));
    const auto lz = graph::laplacian(gz);
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<bool> side(8);
      linalg::Vector chi = linalg::Vector::Zero(8);
      for (int v = 0; v < 8; ++v) {
        side[static_cast<std::size_t>(v)] = gen() & 1u;
        chi(v) = side[static_cast<std::size_t>(v)] ? 1.0 : 0.0;
      }
      CHECK(std::abs(chi.dot(lz.matrix() * chi) - graph::cut_weight(gz, side)) <= 1e-9);
    }
  }

  TEST_CASE("spectral domination implies every cut on small graphs") {
    std::mt19937_64 gen(2024);
    int dominated = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const int n = 4 + static_cast<int>(seed % 6);
      graph::Graph g = testing::random_connected_graph(n, n, seed, 0.1, 1.0);
      NetworkDesignInstance nd = make(g);
      // uniform f equal to the global min cut of x, the largest uniform requirement x meets
      nd.requirements = netdesign::uniform_requirements(n, brute_cut_slack(g, g.weights(), 0.0));
      std::vector<double> z(static_cast<std::size_t>(g.num_edges()), 1.0);
      for (auto& zi : z)
        if (gen() % 5 == 0) zi = 0.0;
      const auto rep = netdesign::verify_spectral_implications(nd, z, 0.0);
      if (family(rep, "spectral").pass) {
        ++dominated;
        // L_z >= L_x gives z(delta(S)) >= x(delta(S)) for every S
        const int nn = g.num_vertices();
        for (int mask = 1; mask < (1 << nn) - 1; ++mask) {
          std::vector<bool> side(static_cast<std::size_t>(nn));
          for (int v = 0; v < nn; ++v) side[static_cast<std::size_t>(v)] = (mask >> v) & 1;
          CHECK(graph::cut_weight(g.with_weights(z), side) >= graph::cut_weight(g, side) - 1e-9);
        }
        CHECK(family(rep, "connectivity").pass);
      }
    }
    CHECK(dominated > 0);
  }
}
