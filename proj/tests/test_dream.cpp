#include <doctest.h>

#include <set>
#include <sstream>

#include "casim/net/dream.hpp"

using namespace casim;
using net::Graph;
using net::ModelManifest;
using net::ProcClass;

TEST_CASE("baseline is exactly the 18-node, 17-edge template tree") {
  Graph g = net::dream_baseline();
  CHECK(g.node_count() == 18);
  CHECK(g.edge_count() == 17);
  CHECK(g.degree(g.index_of("ABM")) == 6);

  // connected + |E| = |V|-1 means tree
  auto dist = g.bfs_distances(g.index_of("ABM"));
  for (int d : dist) CHECK(d >= 0);

  const std::set<std::pair<std::string, std::string>> expected = {
      {"ABM", "BS-Expts"},        {"ABM", "Globals"},
      {"Globals", "InputGlobals"}, {"Globals", "OutputGlobals"},
      {"Procedures", "Reporter-Argumented"},
      {"ABM", "Agents"},          {"Agents", "Agent-Breeds"},
      {"Agents", "Agent-Attributes"}, {"ABM", "Procedures"},
      {"Procedures", "Forever"},  {"Procedures", "Reporter"},
      {"Procedures", "Argumented"}, {"ABM", "Patches"},
      {"Patches", "Patch-Attributes"}, {"ABM", "Links"},
      {"Links", "Link-Breeds"},   {"Links", "Link-Attributes"}};
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& [u, v] : g.edges()) {
    std::string a = g.name_of(u), b = g.name_of(v);
    if (b < a) std::swap(a, b);
    got.insert({a, b});
  }
  std::set<std::pair<std::string, std::string>> canon;
  for (auto [a, b] : expected) {
    if (b < a) std::swap(a, b);
    canon.insert({a, b});
  }
  CHECK(got == canon);
}

TEST_CASE("empty manifest expands to the baseline") {
  ModelManifest m;
  Graph g = net::dream_expand(m);
  CHECK(g.node_count() == 18);
  CHECK(g.edge_count() == 17);
}

TEST_CASE("single breed attaches under Agent-Breeds") {
  ModelManifest m;
  m.agent_breeds = {{"Boid", {}}};
  Graph g = net::dream_expand(m);
  CHECK(g.node_count() == 19);
  CHECK(g.has_edge(g.index_of("Agent-Breeds"), g.index_of("Boid")));
}

TEST_CASE("every manifest item lands under its template parent") {
  ModelManifest m;
  m.input_globals = {"alpha"};
  m.output_globals = {"omega"};
  m.agent_breeds = {{"Bee", {"wings"}}};
  m.link_breeds = {{"Road", {"length"}}};
  m.patch_attributes = {"elevation"};
  m.procedures = {{"setup", ProcClass::Plain},
                  {"go", ProcClass::Forever},
                  {"mean-x", ProcClass::Reporter},
                  {"turn", ProcClass::Argumented},
                  {"path-to", ProcClass::ReporterArgumented}};
  m.experiments = {"sweep"};
  Graph g = net::dream_expand(m);
  // 13 items: 2 globals, breed + attr, link breed + attr, patch attr,
  // 5 procedures, 1 experiment
  CHECK(g.node_count() == 18 + 13);
  CHECK(g.edge_count() == 17 + 13);
  CHECK(g.has_edge(g.index_of("InputGlobals"), g.index_of("alpha")));
  CHECK(g.has_edge(g.index_of("OutputGlobals"), g.index_of("omega")));
  CHECK(g.has_edge(g.index_of("Agent-Breeds"), g.index_of("Bee")));
  CHECK(g.has_edge(g.index_of("Bee"), g.index_of("wings")));
  CHECK(g.has_edge(g.index_of("Link-Breeds"), g.index_of("Road")));
  CHECK(g.has_edge(g.index_of("Road"), g.index_of("length")));
  CHECK(g.has_edge(g.index_of("Patch-Attributes"), g.index_of("elevation")));
  CHECK(g.has_edge(g.index_of("Procedures"), g.index_of("setup")));
  CHECK(g.has_edge(g.index_of("Forever"), g.index_of("go")));
  CHECK(g.has_edge(g.index_of("Reporter"), g.index_of("mean-x")));
  CHECK(g.has_edge(g.index_of("Argumented"), g.index_of("turn")));
  CHECK(g.has_edge(g.index_of("Reporter-Argumented"), g.index_of("path-to")));
  CHECK(g.has_edge(g.index_of("BS-Expts"), g.index_of("sweep")));
}

TEST_CASE("duplicate construct names are rejected") {
  ModelManifest m;
  m.input_globals = {"go"};
  m.procedures = {{"go", ProcClass::Forever}};
  CHECK_THROWS_AS(net::dream_expand(m), ModelError);
}

TEST_CASE("footprint has one row per node with sane percentages") {
  ModelManifest m = net::flocksense_manifest();
  net::Footprint fp = net::dream_footprint(m);
  Graph g = net::dream_expand(m);
  CHECK(static_cast<int>(fp.rows.size()) == g.node_count());
  for (const auto& row : fp.rows) {
    CHECK(row.eccentricity_pct >= 0.0);
    CHECK(row.betweenness_pct >= 0.0);
    CHECK(row.betweenness_pct <= 100.0);
    CHECK(row.degree_pct >= 0.0);
    CHECK(row.degree_pct <= 100.0);
  }
}

TEST_CASE("flocksense footprint: Procedures dominates degree and betweenness") {
  net::Footprint fp = net::dream_footprint(net::flocksense_manifest());
  CHECK(fp.argmax_degree() == "Procedures");
  CHECK(fp.argmax_betweenness() == "Procedures");
}

TEST_CASE("footprint csv shape") {
  net::Footprint fp = net::dream_footprint(net::ModelManifest{});
  std::ostringstream os;
  net::write_footprint_csv(fp, os);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "node,eccentricity_pct,betweenness_pct,degree_pct");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 18);
}
