#include <doctest.h>

#include <cmath>
#include <sstream>

#include "casim/net/graph.hpp"
#include "oracles/graph_oracles.hpp"

using namespace casim;
using net::Graph;
using net::NodeIdx;

namespace {

Graph path_abc() {
  Graph g;
  g.add_edge("A", "B");
  g.add_edge("B", "C");
  return g;
}

Graph k3() {
  Graph g;
  g.add_edge("A", "B");
  g.add_edge("B", "C");
  g.add_edge("A", "C");
  return g;
}

}  // namespace

TEST_CASE("graph basics: no self loops, no parallel edges, canonical undirected") {
  Graph g;
  NodeIdx a = g.add_node("a");
  NodeIdx b = g.add_node("b");
  CHECK_THROWS_AS(g.add_edge(a, a), ModelError);
  g.add_edge(a, b);
  g.add_edge(b, a);  // same undirected edge
  g.add_edge(a, b);
  CHECK(g.edge_count() == 1);
  CHECK(g.has_edge(b, a));
  CHECK_THROWS_AS(g.index_of("zzz"), ModelError);
}

TEST_CASE("degree centrality") {
  Graph g = k3();
  for (NodeIdx v = 0; v < 3; ++v) CHECK(net::degree_centrality(g, v) == 2);
  g.add_node("isolated");
  CHECK(net::degree_centrality(g, g.index_of("isolated")) == 0);

  Graph d(true);
  d.add_edge("x", "y");
  d.add_edge("z", "y");
  auto [in, out] = net::degree_centrality_directed(d, d.index_of("y"));
  CHECK(in == 2);
  CHECK(out == 0);
}

TEST_CASE("clustering coefficient") {
  Graph g = k3();
  CHECK(net::clustering_coefficient(g, 0) == doctest::Approx(1.0));
  Graph p = path_abc();
  CHECK(net::clustering_coefficient(p, p.index_of("B")) == 0.0);
  CHECK(net::clustering_coefficient(p, p.index_of("A")) == 0.0);  // k < 2
  CHECK(net::mean_clustering(k3()) == doctest::Approx(1.0));
}

TEST_CASE("matching index") {
  Graph g = k3();
  CHECK(net::matching_index(g, 0, 1) == doctest::Approx(1.0));
  Graph h;
  h.add_edge("u", "a");
  h.add_edge("v", "b");
  CHECK(net::matching_index(h, h.index_of("u"), h.index_of("v")) == 0.0);
  CHECK_THROWS_AS(net::matching_index(g, 1, 1), ModelError);
}

TEST_CASE("eccentricity centrality on a path") {
  Graph p = path_abc();
  CHECK(net::eccentricity_centrality(p, p.index_of("B")) ==
        doctest::Approx(1.0));
  CHECK(net::eccentricity_centrality(p, p.index_of("A")) ==
        doctest::Approx(0.5));
  p.add_node("lonely");
  CHECK(net::eccentricity_centrality(p, p.index_of("lonely")) == 0.0);
}

TEST_CASE("closeness centrality (harmonic form) on a path") {
  Graph p = path_abc();
  CHECK(net::closeness_centrality(p, p.index_of("B")) == doctest::Approx(2.0));
  CHECK(net::closeness_centrality(p, p.index_of("A")) == doctest::Approx(1.5));
  p.add_node("lonely");  // unreachable contributes 0
  CHECK(net::closeness_centrality(p, p.index_of("A")) == doctest::Approx(1.5));
}

TEST_CASE("betweenness centrality on small graphs") {
  Graph p = path_abc();
  auto b = net::betweenness_centrality(p);
  CHECK(b[static_cast<std::size_t>(p.index_of("B"))] == doctest::Approx(1.0));
  CHECK(b[static_cast<std::size_t>(p.index_of("A"))] == doctest::Approx(0.0));
  auto k = net::betweenness_centrality(k3());
  for (double v : k) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("all measures match brute-force oracles on random graphs") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(10));  // up to 12 nodes
    const double p = rng.uniform(0.15, 0.7);
    Graph g = oracle::random_graph(n, p, rng);
    for (NodeIdx v = 0; v < n; ++v) {
      CHECK(net::degree_centrality(g, v) == oracle::degree(g, v));
      CHECK(net::clustering_coefficient(g, v) ==
            doctest::Approx(oracle::clustering(g, v)).epsilon(1e-12));
      CHECK(net::eccentricity_centrality(g, v) ==
            doctest::Approx(oracle::eccentricity_centrality(g, v))
                .epsilon(1e-12));
      CHECK(net::closeness_centrality(g, v) ==
            doctest::Approx(oracle::closeness_centrality(g, v))
                .epsilon(1e-12));
    }
    const NodeIdx u = static_cast<NodeIdx>(rng.below(n));
    NodeIdx v = static_cast<NodeIdx>(rng.below(n));
    if (u == v) v = (v + 1) % n;
    CHECK(net::matching_index(g, u, v) ==
          doctest::Approx(oracle::matching(g, u, v)).epsilon(1e-12));
    auto fast = net::betweenness_centrality(g);
    auto slow = oracle::betweenness(g);
    for (NodeIdx w = 0; w < n; ++w)
      CHECK(fast[static_cast<std::size_t>(w)] ==
            doctest::Approx(slow[static_cast<std::size_t>(w)]).epsilon(1e-9));
  }
}

TEST_CASE("qudg degenerates to udg at rho 1 and obeys the bands") {
  Rng rng(7);
  std::vector<net::Point2> pts;
  for (int i = 0; i < 50; ++i)
    pts.push_back({rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)});

  Rng r1(1);
  Graph q1 = net::generate_qudg(pts, 1.0, 0.3, r1);
  CHECK(oracle::same_edges(q1, oracle::udg(pts)));

  Rng r2(2);
  Graph q0 = net::generate_qudg(pts, 0.5, 0.0, r2);
  for (const auto& [u, v] : q0.edges()) {
    const double dx = pts[static_cast<std::size_t>(u)].x -
                      pts[static_cast<std::size_t>(v)].x;
    const double dy = pts[static_cast<std::size_t>(u)].y -
                      pts[static_cast<std::size_t>(v)].y;
    CHECK(std::sqrt(dx * dx + dy * dy) <= 0.5 + 1e-12);
  }

  Rng r3(3);
  Graph qall = net::generate_qudg(pts, 0.5, 1.0, r3);
  CHECK(oracle::same_edges(qall, oracle::udg(pts)));

  // never beyond distance 1
  Rng r4(4);
  std::vector<net::Point2> far{{0.0, 0.0}, {1.2, 0.0}};
  for (int i = 0; i < 20; ++i) {
    Graph g = net::generate_qudg(far, 0.9, 1.0, r4);
    CHECK(g.edge_count() == 0);
  }

  Rng r5(5);
  CHECK_THROWS_AS(net::generate_qudg(pts, 0.0, 0.5, r5), ModelError);
  CHECK_THROWS_AS(net::generate_qudg(pts, 1.5, 0.5, r5), ModelError);
}

TEST_CASE("edge list round trip and canonicalization") {
  std::istringstream in("A\tB\n# comment\nB\tC\t2.0\nC\tA\nA\tC\n");
  Graph g = net::read_edge_list(in);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 3);  // duplicate undirected edge collapsed

  std::ostringstream out;
  net::write_edge_list(g, out);
  std::istringstream in2(out.str());
  Graph g2 = net::read_edge_list(in2);
  CHECK(oracle::same_edges(g, g2));

  std::istringstream bad("A\n");
  CHECK_THROWS_AS(net::read_edge_list(bad), ParseError);
  std::istringstream loop("A\tA\n");
  CHECK_THROWS_AS(net::read_edge_list(loop), ParseError);
  std::istringstream badw("A\tB\tx\n");
  try {
    net::read_edge_list(badw);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("simple edge list forms two nodes and one edge") {
  std::istringstream in("A\tB\n");
  Graph g = net::read_edge_list(in);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
}
