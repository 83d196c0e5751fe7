#pragma once

#include <string>
#include <vector>

#include "casim/net/graph.hpp"

namespace casim::net {

enum class ProcClass { Plain, Forever, Reporter, Argumented, ReporterArgumented };

// Machine-readable inventory of an agent-based model: the constructs that
// hang off the template network when the model is expanded.
struct ModelManifest {
  std::string model_name;
  std::vector<std::string> input_globals;
  std::vector<std::string> output_globals;
  // breed name -> its attribute names
  std::vector<std::pair<std::string, std::vector<std::string>>> agent_breeds;
  std::vector<std::pair<std::string, std::vector<std::string>>> link_breeds;
  std::vector<std::string> patch_attributes;
  std::vector<std::pair<std::string, ProcClass>> procedures;
  std::vector<std::string> experiments;
};

struct FootprintRow {
  std::string node;
  double eccentricity_pct = 0.0;
  double betweenness_pct = 0.0;
  double degree_pct = 0.0;
};

struct Footprint {
  std::string model_name;
  std::vector<FootprintRow> rows;  // one per node, graph order

  // node name holding the column maximum
  std::string argmax_eccentricity() const;
  std::string argmax_betweenness() const;
  std::string argmax_degree() const;
};

// The 18-node / 17-edge template network (undirected).
Graph dream_baseline();

// Baseline plus one node per manifest item, each attached to its template
// parent: input/output globals under InputGlobals/OutputGlobals, breeds
// under Agent-Breeds (attributes under their breed), link breeds under
// Link-Breeds, patch attributes under Patch-Attributes, procedures under
// their class node (plain ones directly under Procedures), experiments
// under BS-Expts.
Graph dream_expand(const ModelManifest& manifest);

// Centrality footprint of the expanded network. Eccentricity centrality
// (1/longest shortest path) scales against a maximum of 1; betweenness by
// the star maximum (n-1)(n-2)/2; degree by n-1.
Footprint dream_footprint(const ModelManifest& manifest);

void write_footprint_csv(const Footprint& fp, std::ostream& out);

// Manifest of the boids/WSN sensing model: two breeds with their internal
// variables, the four input globals, the full procedure roster with
// classifications, and both sweep experiments.
ModelManifest flocksense_manifest();

}  // namespace casim::net
