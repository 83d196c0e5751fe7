#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "casim/errors.hpp"
#include "casim/rng.hpp"

namespace casim::net {

using NodeIdx = int;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Attributed graph: no self-loops, no parallel edges; an undirected edge
// (u,v) is the same edge as (v,u).
class Graph {
 public:
  explicit Graph(bool directed = false) : directed_(directed) {}

  bool directed() const { return directed_; }
  int node_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return edge_count_; }

  NodeIdx add_node(const std::string& name);
  bool has_node(const std::string& name) const;
  NodeIdx index_of(const std::string& name) const;  // lookup error if absent
  const std::string& name_of(NodeIdx v) const;
  const std::vector<std::string>& names() const { return names_; }

  // Idempotent: re-adding an existing edge keeps the first weight.
  void add_edge(NodeIdx u, NodeIdx v, double weight = 1.0);
  void add_edge(const std::string& u, const std::string& v,
                double weight = 1.0);
  bool has_edge(NodeIdx u, NodeIdx v) const;

  // Ascending neighbor indices. For directed graphs these are out-neighbors;
  // in_neighbors gives the reverse adjacency.
  const std::vector<NodeIdx>& neighbors(NodeIdx v) const;
  const std::vector<NodeIdx>& in_neighbors(NodeIdx v) const;

  int degree(NodeIdx v) const;      // undirected (or out-degree if directed)
  int in_degree(NodeIdx v) const;   // directed only
  int out_degree(NodeIdx v) const;  // directed only

  std::map<std::string, double>& node_attrs(NodeIdx v);
  const std::map<std::string, double>& node_attrs(NodeIdx v) const;
  std::map<std::string, std::string>& node_labels(NodeIdx v);
  const std::map<std::string, std::string>& node_labels(NodeIdx v) const;

  // sorted (u,v) pairs with u < v for undirected graphs
  std::vector<std::pair<NodeIdx, NodeIdx>> edges() const;

  // Unweighted hop distances from src; -1 where unreachable.
  std::vector<int> bfs_distances(NodeIdx src) const;

 private:
  void check(NodeIdx v) const;

  bool directed_;
  int edge_count_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, NodeIdx> by_name_;
  std::vector<std::vector<NodeIdx>> adj_;
  std::vector<std::vector<NodeIdx>> radj_;  // directed only
  std::vector<std::map<std::string, double>> attrs_;
  std::vector<std::map<std::string, std::string>> labels_;
};

// --- measures ---------------------------------------------------------------

// Incident edge count; for directed graphs use degree_in/out.
int degree_centrality(const Graph& g, NodeIdx v);
std::pair<int, int> degree_centrality_directed(const Graph& g, NodeIdx v);

// C_v = 2 E_v / (k_v (k_v - 1)); defined as 0 when k_v < 2.
double clustering_coefficient(const Graph& g, NodeIdx v);
double mean_clustering(const Graph& g);

// Jaccard of punctured neighborhoods (u and v excluded from both sides);
// 0 when the union is empty. u == v is an argument error.
double matching_index(const Graph& g, NodeIdx u, NodeIdx v);

// 1 / (longest shortest path to any reachable node); isolated nodes -> 0.
double eccentricity_centrality(const Graph& g, NodeIdx v);

// Harmonic form: sum over u != v of 1/dist(v,u); unreachable contributes 0.
double closeness_centrality(const Graph& g, NodeIdx v);

// Exact shortest-path betweenness (Brandes), unordered pairs, endpoints
// excluded, no normalization.
std::vector<double> betweenness_centrality(const Graph& g);

// --- generators & I/O -------------------------------------------------------

// Quasi unit disk graph over points in normalized units (1 = max range):
// certain edge within rho, probability p_link in (rho, 1], never beyond 1.
Graph generate_qudg(const std::vector<Point2>& positions, double rho,
                    double p_link, Rng& rng);

// One edge per line: source <TAB> target [<TAB> weight], '#' comments.
Graph read_edge_list(std::istream& in, bool directed = false);
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace casim::net
