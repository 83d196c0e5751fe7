#include "casim/net/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <stack>

namespace casim::net {

void Graph::check(NodeIdx v) const {
  if (v < 0 || v >= node_count())
    throw ModelError("graph: no node with index " + std::to_string(v));
}

NodeIdx Graph::add_node(const std::string& name) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return it->second;
  NodeIdx idx = node_count();
  by_name_[name] = idx;
  names_.push_back(name);
  adj_.emplace_back();
  radj_.emplace_back();
  attrs_.emplace_back();
  labels_.emplace_back();
  return idx;
}

bool Graph::has_node(const std::string& name) const {
  return by_name_.count(name) != 0;
}

NodeIdx Graph::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ModelError("graph: no node named " + name);
  return it->second;
}

const std::string& Graph::name_of(NodeIdx v) const {
  check(v);
  return names_[static_cast<std::size_t>(v)];
}

void Graph::add_edge(NodeIdx u, NodeIdx v, double) {
  check(u);
  check(v);
  if (u == v) throw ModelError("graph: self-loops are not allowed");
  if (has_edge(u, v)) return;
  auto insert_sorted = [](std::vector<NodeIdx>& vec, NodeIdx x) {
    vec.insert(std::lower_bound(vec.begin(), vec.end(), x), x);
  };
  insert_sorted(adj_[static_cast<std::size_t>(u)], v);
  if (directed_) {
    insert_sorted(radj_[static_cast<std::size_t>(v)], u);
  } else {
    insert_sorted(adj_[static_cast<std::size_t>(v)], u);
  }
  ++edge_count_;
}

void Graph::add_edge(const std::string& u, const std::string& v,
                     double weight) {
  add_edge(add_node(u), add_node(v), weight);
}

bool Graph::has_edge(NodeIdx u, NodeIdx v) const {
  check(u);
  check(v);
  const auto& a = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(a.begin(), a.end(), v);
}

const std::vector<NodeIdx>& Graph::neighbors(NodeIdx v) const {
  check(v);
  return adj_[static_cast<std::size_t>(v)];
}

const std::vector<NodeIdx>& Graph::in_neighbors(NodeIdx v) const {
  check(v);
  return directed_ ? radj_[static_cast<std::size_t>(v)]
                   : adj_[static_cast<std::size_t>(v)];
}

int Graph::degree(NodeIdx v) const {
  return static_cast<int>(neighbors(v).size());
}

int Graph::in_degree(NodeIdx v) const {
  return static_cast<int>(in_neighbors(v).size());
}

int Graph::out_degree(NodeIdx v) const {
  return static_cast<int>(neighbors(v).size());
}

std::map<std::string, double>& Graph::node_attrs(NodeIdx v) {
  check(v);
  return attrs_[static_cast<std::size_t>(v)];
}

const std::map<std::string, double>& Graph::node_attrs(NodeIdx v) const {
  check(v);
  return attrs_[static_cast<std::size_t>(v)];
}

std::map<std::string, std::string>& Graph::node_labels(NodeIdx v) {
  check(v);
  return labels_[static_cast<std::size_t>(v)];
}

const std::map<std::string, std::string>& Graph::node_labels(NodeIdx v) const {
  check(v);
  return labels_[static_cast<std::size_t>(v)];
}

std::vector<std::pair<NodeIdx, NodeIdx>> Graph::edges() const {
  std::vector<std::pair<NodeIdx, NodeIdx>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (NodeIdx u = 0; u < node_count(); ++u)
    for (NodeIdx v : adj_[static_cast<std::size_t>(u)])
      if (directed_ || u < v) out.emplace_back(u, v);
  return out;
}

std::vector<int> Graph::bfs_distances(NodeIdx src) const {
  check(src);
  std::vector<int> dist(static_cast<std::size_t>(node_count()), -1);
  std::deque<NodeIdx> frontier{src};
  dist[static_cast<std::size_t>(src)] = 0;
  while (!frontier.empty()) {
    NodeIdx v = frontier.front();
    frontier.pop_front();
    for (NodeIdx w : adj_[static_cast<std::size_t>(v)]) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

int degree_centrality(const Graph& g, NodeIdx v) { return g.degree(v); }

std::pair<int, int> degree_centrality_directed(const Graph& g, NodeIdx v) {
  return {g.in_degree(v), g.out_degree(v)};
}

double clustering_coefficient(const Graph& g, NodeIdx v) {
  const auto& nb = g.neighbors(v);
  const int k = static_cast<int>(nb.size());
  if (k < 2) return 0.0;  // the k(k-1) denominator would be zero
  int among = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (g.has_edge(nb[i], nb[j])) ++among;
  return 2.0 * among / (static_cast<double>(k) * (k - 1));
}

double mean_clustering(const Graph& g) {
  if (g.node_count() == 0) return 0.0;
  double sum = 0.0;
  for (NodeIdx v = 0; v < g.node_count(); ++v)
    sum += clustering_coefficient(g, v);
  return sum / g.node_count();
}

double matching_index(const Graph& g, NodeIdx u, NodeIdx v) {
  if (u == v) throw ModelError("matching_index: nodes must differ");
  const auto& nu = g.neighbors(u);
  const auto& nv = g.neighbors(v);
  auto punctured = [&](const std::vector<NodeIdx>& nb) {
    std::vector<NodeIdx> out;
    out.reserve(nb.size());
    for (NodeIdx w : nb)
      if (w != u && w != v) out.push_back(w);
    return out;
  };
  std::vector<NodeIdx> a = punctured(nu), b = punctured(nv);
  std::vector<NodeIdx> common, all;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(all));
  if (all.empty()) return 0.0;
  return static_cast<double>(common.size()) / static_cast<double>(all.size());
}

double eccentricity_centrality(const Graph& g, NodeIdx v) {
  std::vector<int> dist = g.bfs_distances(v);
  int longest = 0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (static_cast<NodeIdx>(i) != v && dist[i] > longest) longest = dist[i];
  if (longest == 0) return 0.0;  // isolated node
  return 1.0 / longest;
}

double closeness_centrality(const Graph& g, NodeIdx v) {
  std::vector<int> dist = g.bfs_distances(v);
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (static_cast<NodeIdx>(i) != v && dist[i] > 0) sum += 1.0 / dist[i];
  return sum;
}

std::vector<double> betweenness_centrality(const Graph& g) {
  const int n = g.node_count();
  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  // Brandes (2001); source loop accumulates ordered-pair dependencies,
  // halved at the end to count unordered pairs once.
  for (NodeIdx s = 0; s < n; ++s) {
    std::vector<std::vector<NodeIdx>> pred(static_cast<std::size_t>(n));
    std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::vector<NodeIdx> order;
    order.reserve(static_cast<std::size_t>(n));
    sigma[static_cast<std::size_t>(s)] = 1.0;
    dist[static_cast<std::size_t>(s)] = 0;
    std::deque<NodeIdx> queue{s};
    while (!queue.empty()) {
      NodeIdx v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (NodeIdx w : g.neighbors(v)) {
        auto wi = static_cast<std::size_t>(w);
        auto vi = static_cast<std::size_t>(v);
        if (dist[wi] < 0) {
          dist[wi] = dist[vi] + 1;
          queue.push_back(w);
        }
        if (dist[wi] == dist[vi] + 1) {
          sigma[wi] += sigma[vi];
          pred[wi].push_back(v);
        }
      }
    }
    std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeIdx w = *it;
      auto wi = static_cast<std::size_t>(w);
      for (NodeIdx v : pred[wi]) {
        auto vi = static_cast<std::size_t>(v);
        delta[vi] += sigma[vi] / sigma[wi] * (1.0 + delta[wi]);
      }
      if (w != s) score[wi] += delta[wi];
    }
  }
  for (double& s : score) s /= 2.0;
  return score;
}

Graph generate_qudg(const std::vector<Point2>& positions, double rho,
                    double p_link, Rng& rng) {
  if (!(rho > 0.0) || rho > 1.0)
    throw ModelError("generate_qudg: rho must lie in (0,1]");
  if (p_link < 0.0 || p_link > 1.0)
    throw ModelError("generate_qudg: p_link must lie in [0,1]");
  Graph g(false);
  for (std::size_t i = 0; i < positions.size(); ++i)
    g.add_node("s" + std::to_string(i));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      const double dx = positions[i].x - positions[j].x;
      const double dy = positions[i].y - positions[j].y;
      const double d = std::sqrt(dx * dx + dy * dy);
      if (d <= rho) {
        g.add_edge(static_cast<NodeIdx>(i), static_cast<NodeIdx>(j));
      } else if (d <= 1.0 && rng.chance(p_link)) {
        g.add_edge(static_cast<NodeIdx>(i), static_cast<NodeIdx>(j));
      }
    }
  }
  return g;
}

Graph read_edge_list(std::istream& in, bool directed) {
  Graph g(directed);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view sv(line);
    auto hash = sv.find('#');
    if (hash != std::string_view::npos) sv = sv.substr(0, hash);
    // trim
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t'))
      sv.remove_prefix(1);
    while (!sv.empty() && (sv.back() == ' ' || sv.back() == '\t'))
      sv.remove_suffix(1);
    if (sv.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= sv.size()) {
      std::size_t tab = sv.find('\t', start);
      if (tab == std::string_view::npos) {
        fields.emplace_back(sv.substr(start));
        break;
      }
      fields.emplace_back(sv.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty())
      throw ParseError("edge list: expected 'source<TAB>target[<TAB>weight]'",
                       lineno);
    double weight = 1.0;
    if (fields.size() == 3) {
      try {
        std::size_t used = 0;
        weight = std::stod(fields[2], &used);
        if (used != fields[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("edge list: bad weight '" + fields[2] + "'", lineno);
      }
    }
    if (fields[0] == fields[1])
      throw ParseError("edge list: self-loop on '" + fields[0] + "'", lineno);
    g.add_edge(fields[0], fields[1], weight);
  }
  return g;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [u, v] : g.edges())
    out << g.name_of(u) << "\t" << g.name_of(v) << "\n";
}

}  // namespace casim::net
