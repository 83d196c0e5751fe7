#include "casim/net/dream.hpp"

#include <algorithm>
#include <ostream>

namespace casim::net {

namespace {

std::string argmax_of(const std::vector<FootprintRow>& rows,
                      double FootprintRow::*column) {
  if (rows.empty()) return {};
  const FootprintRow* best = &rows.front();
  for (const auto& r : rows)
    if (r.*column > best->*column) best = &r;
  return best->node;
}

}  // namespace

std::string Footprint::argmax_eccentricity() const {
  return argmax_of(rows, &FootprintRow::eccentricity_pct);
}
std::string Footprint::argmax_betweenness() const {
  return argmax_of(rows, &FootprintRow::betweenness_pct);
}
std::string Footprint::argmax_degree() const {
  return argmax_of(rows, &FootprintRow::degree_pct);
}

Graph dream_baseline() {
  Graph g(false);
  const std::pair<const char*, const char*> edges[] = {
      {"ABM", "BS-Expts"},
      {"ABM", "Globals"},
      {"Globals", "InputGlobals"},
      {"Globals", "OutputGlobals"},
      {"Procedures", "Reporter-Argumented"},
      {"ABM", "Agents"},
      {"Agents", "Agent-Breeds"},
      {"Agents", "Agent-Attributes"},
      {"ABM", "Procedures"},
      {"Procedures", "Forever"},
      {"Procedures", "Reporter"},
      {"Procedures", "Argumented"},
      {"ABM", "Patches"},
      {"Patches", "Patch-Attributes"},
      {"ABM", "Links"},
      {"Links", "Link-Breeds"},
      {"Links", "Link-Attributes"},
  };
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

Graph dream_expand(const ModelManifest& manifest) {
  Graph g = dream_baseline();
  auto attach = [&g](const std::string& parent, const std::string& child) {
    if (g.has_node(child))
      throw ModelError("dream_expand: duplicate construct '" + child + "'");
    g.add_edge(parent, child);
  };
  for (const auto& name : manifest.input_globals) attach("InputGlobals", name);
  for (const auto& name : manifest.output_globals)
    attach("OutputGlobals", name);
  for (const auto& [breed, attrs] : manifest.agent_breeds) {
    attach("Agent-Breeds", breed);
    for (const auto& a : attrs) attach(breed, a);
  }
  for (const auto& [breed, attrs] : manifest.link_breeds) {
    attach("Link-Breeds", breed);
    for (const auto& a : attrs) attach(breed, a);
  }
  for (const auto& name : manifest.patch_attributes)
    attach("Patch-Attributes", name);
  for (const auto& [name, cls] : manifest.procedures) {
    switch (cls) {
      case ProcClass::Plain: attach("Procedures", name); break;
      case ProcClass::Forever: attach("Forever", name); break;
      case ProcClass::Reporter: attach("Reporter", name); break;
      case ProcClass::Argumented: attach("Argumented", name); break;
      case ProcClass::ReporterArgumented:
        attach("Reporter-Argumented", name);
        break;
      default:
        throw ModelError("dream_expand: unknown procedure class for '" + name +
                         "'");
    }
  }
  for (const auto& name : manifest.experiments) attach("BS-Expts", name);
  return g;
}

Footprint dream_footprint(const ModelManifest& manifest) {
  const Graph g = dream_expand(manifest);
  const int n = g.node_count();
  const std::vector<double> btw = betweenness_centrality(g);
  const double btw_max =
      n > 2 ? (static_cast<double>(n) - 1) * (n - 2) / 2.0 : 1.0;
  const double deg_max = n > 1 ? static_cast<double>(n) - 1 : 1.0;

  Footprint fp;
  fp.model_name = manifest.model_name;
  fp.rows.reserve(static_cast<std::size_t>(n));
  for (NodeIdx v = 0; v < n; ++v) {
    FootprintRow row;
    row.node = g.name_of(v);
    row.eccentricity_pct = 100.0 * eccentricity_centrality(g, v);
    row.betweenness_pct = 100.0 * btw[static_cast<std::size_t>(v)] / btw_max;
    row.degree_pct = 100.0 * g.degree(v) / deg_max;
    fp.rows.push_back(std::move(row));
  }
  return fp;
}

void write_footprint_csv(const Footprint& fp, std::ostream& out) {
  out << "node,eccentricity_pct,betweenness_pct,degree_pct\n";
  for (const auto& r : fp.rows)
    out << r.node << "," << r.eccentricity_pct << "," << r.betweenness_pct
        << "," << r.degree_pct << "\n";
}

ModelManifest flocksense_manifest() {
  ModelManifest m;
  m.model_name = "flocksense";
  m.input_globals = {"n", "n-boids", "visible?", "max-scen?"};
  m.agent_breeds = {{"Node", {"boids-near", "sensed?"}},
                    {"Boid", {"nearest-neighbor", "flockmates"}}};
  m.procedures = {{"setup", ProcClass::Plain},
                  {"make-wsn", ProcClass::Plain},
                  {"init-node", ProcClass::Plain},
                  {"make-reg-wsn", ProcClass::Plain},
                  {"make-boids", ProcClass::Plain},
                  {"move-boids", ProcClass::Plain},
                  {"wsn-sense", ProcClass::Plain},
                  {"separate", ProcClass::Plain},
                  {"align", ProcClass::Plain},
                  {"cohere", ProcClass::Plain},
                  {"do-plot", ProcClass::Plain},
                  {"go", ProcClass::Forever},
                  {"go80", ProcClass::Forever},
                  {"average-flockmate-heading", ProcClass::Reporter},
                  {"average-heading-towards-flockmates", ProcClass::Reporter},
                  {"sensor-data", ProcClass::Reporter},
                  {"turn-away", ProcClass::Argumented},
                  {"turn-towards", ProcClass::Argumented},
                  {"data-of", ProcClass::ReporterArgumented}};
  m.experiments = {"vary-sensors", "vary-boids"};
  return m;
}

}  // namespace casim::net
