#include "casim/models/scholars.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace casim::models {

using engine::AgentId;
using engine::World;

int h_index(const std::vector<int>& citations) {
  std::vector<int> sorted = citations;
  std::sort(sorted.begin(), sorted.end(), std::greater<int>());
  int h = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= static_cast<int>(i) + 1)
      h = static_cast<int>(i) + 1;
    else
      break;
  }
  return h;
}

std::vector<std::pair<int, int>> load_history(
    const std::vector<YearRecord>& records) {
  std::vector<std::pair<int, int>> timeline;
  timeline.reserve(records.size());
  int prev_year = 0;
  bool first = true;
  for (const auto& rec : records) {
    if (!first && rec.year <= prev_year)
      throw ModelError("history years must be strictly increasing (saw " +
                       std::to_string(rec.year) + " after " +
                       std::to_string(prev_year) + ")");
    first = false;
    prev_year = rec.year;
    std::vector<int> cites;
    cites.reserve(rec.papers.size());
    for (const auto& [paper, c] : rec.papers) {
      if (c < 0)
        throw ModelError("history: negative citation count for " + paper);
      cites.push_back(c);
    }
    timeline.emplace_back(rec.year, h_index(cites));
  }
  return timeline;
}

std::vector<YearRecord> parse_history_csv(std::istream& in) {
  std::vector<YearRecord> records;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string year_s, paper, cites_s;
    if (!std::getline(ss, year_s, ',') || !std::getline(ss, paper, ',') ||
        !std::getline(ss, cites_s))
      throw ParseError("history: expected year,paper_id,citations", lineno);
    if (lineno == 1 && year_s == "year") continue;  // optional header
    int year = 0, cites = 0;
    try {
      year = std::stoi(year_s);
      cites = std::stoi(cites_s);
    } catch (const std::exception&) {
      throw ParseError("history: bad number in '" + line + "'", lineno);
    }
    if (records.empty() || records.back().year != year) {
      if (!records.empty() && year < records.back().year)
        throw ParseError("history: years must be non-decreasing", lineno);
      records.push_back(YearRecord{year, {}});
    }
    records.back().papers.emplace_back(paper, cites);
  }
  return records;
}

Tcn build_tcn(const TcnInput& input, double view_height) {
  Tcn tcn;
  int max_h = 0;
  for (const auto& r : input.researchers) max_h = std::max(max_h, r.h);
  const double scale = max_h > 0 ? view_height / max_h : 0.0;
  for (std::size_t i = 0; i < input.researchers.size(); ++i) {
    const auto& r = input.researchers[i];
    net::NodeIdx v = tcn.graph.add_node(r.id);
    tcn.graph.node_labels(v)["kind"] = "researcher";
    tcn.graph.node_attrs(v)["h"] = r.h;
    // equal-h researchers fan out horizontally by id order
    tcn.graph.node_attrs(v)["x"] = static_cast<double>(i);
    tcn.graph.node_attrs(v)["y"] = r.h * scale;
  }
  for (const auto& inc : input.incidences) {
    const auto& owner =
        input.researchers.at(static_cast<std::size_t>(inc.researcher));
    const std::string instance = inc.paper + "@" + owner.id;
    net::NodeIdx v = tcn.graph.add_node(instance);
    tcn.graph.node_labels(v)["kind"] = "paper";
    tcn.graph.node_attrs(v)["citations"] = inc.citations;
    tcn.graph.node_attrs(v)["x"] =
        tcn.graph.node_attrs(tcn.graph.index_of(owner.id)).at("x") + 0.5;
    tcn.graph.node_attrs(v)["y"] =
        tcn.graph.node_attrs(tcn.graph.index_of(owner.id)).at("y") - 1.0;
    tcn.graph.add_edge(owner.id, instance);
    ++tcn.paper_instances;
  }
  return tcn;
}

CitationNetworkSize citation_network_size(const TcnInput& input) {
  CitationNetworkSize size;
  // distinct papers + researchers as nodes
  std::vector<std::string> papers;
  int citations = 0;
  for (const auto& inc : input.incidences) {
    if (std::find(papers.begin(), papers.end(), inc.paper) == papers.end()) {
      papers.push_back(inc.paper);
      citations += inc.citations;
    }
  }
  size.nodes = static_cast<int>(input.researchers.size() + papers.size());
  // every authorship is an edge, and every citation is a paper-paper link
  size.edges = static_cast<int>(input.incidences.size()) + citations;
  return size;
}

void write_tcn_nodes_csv(const Tcn& tcn, std::ostream& os) {
  os << "id,kind,h_or_citations,x,y\n";
  for (net::NodeIdx v = 0; v < tcn.graph.node_count(); ++v) {
    const auto& labels = tcn.graph.node_labels(v);
    const auto& attrs = tcn.graph.node_attrs(v);
    const std::string kind = labels.at("kind");
    const double value =
        kind == "researcher" ? attrs.at("h") : attrs.at("citations");
    os << tcn.graph.name_of(v) << "," << kind << "," << value << ","
       << attrs.at("x") << "," << attrs.at("y") << "\n";
  }
}

Scholars::Scholars(int n_res, int max_init_papers, double rate, int width,
                   int height, std::uint64_t seed)
    : rate_(rate), world_(width, height, seed, /*wrap=*/false) {
  if (n_res < 1) throw ConfigError("scholars: n-res must be >= 1");
  if (max_init_papers < 0)
    throw ConfigError("scholars: max-init-papers must be >= 0");
  if (rate < 0.0 || rate > 1.0)
    throw ConfigError("scholars: rate must lie in [0,1]");
  researcher_ = world_.declare_breed(
      "researcher", {{"num-papers", engine::AttrKind::Number},
                     {"h", engine::AttrKind::Number},
                     {"my-papers", engine::AttrKind::IdSet}});
  paper_ = world_.declare_breed("paper",
                                {{"tend-to-be-cited", engine::AttrKind::Number},
                                 {"num-cites", engine::AttrKind::Number},
                                 {"my-res", engine::AttrKind::Ref},
                                 {"year", engine::AttrKind::Number}});
  s_num_papers_ = world_.attr_slot(researcher_, "num-papers");
  s_h_ = world_.attr_slot(researcher_, "h");
  s_my_papers_ = world_.attr_slot(researcher_, "my-papers");
  s_tend_ = world_.attr_slot(paper_, "tend-to-be-cited");
  s_cites_ = world_.attr_slot(paper_, "num-cites");
  s_my_res_ = world_.attr_slot(paper_, "my-res");
  s_year_ = world_.attr_slot(paper_, "year");
  setup(n_res, max_init_papers);
}

void Scholars::setup(int n_res, int max_init_papers) {
  Rng& rng = world_.rng();
  for (int i = 0; i < n_res; ++i) {
    AgentId r = world_.spawn(researcher_, {0.0, 0.0});
    const int papers =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(
            max_init_papers + 1)));
    for (int p = 0; p < papers; ++p) {
      AgentId paper = world_.spawn(paper_, {0.0, 0.0});
      world_.set_num(paper, s_tend_, rng.uniform());
      world_.set_ref(paper, s_my_res_, r);
      world_.idset_mut(r, s_my_papers_).push_back(paper);
    }
    world_.set_num(r, s_num_papers_, papers);
    world_.set_num(r, s_h_, h_index(citation_counts(r)));
  }
  reposition();
  publish();
}

std::vector<int> Scholars::citation_counts(AgentId researcher) const {
  std::vector<int> cites;
  for (AgentId p : world_.idset(researcher, s_my_papers_))
    cites.push_back(static_cast<int>(world_.num(p, s_cites_)));
  return cites;
}

int Scholars::researcher_h(AgentId researcher) const {
  return static_cast<int>(world_.num(researcher, s_h_));
}

void Scholars::step_citations() {
  Rng& rng = world_.rng();
  std::vector<AgentId> touched;
  for (AgentId p : world_.agents_of(paper_)) {
    const double tend = world_.num(p, s_tend_);
    if (rng.chance(rate_ * tend)) {
      world_.set_num(p, s_cites_, world_.num(p, s_cites_) + 1.0);
      touched.push_back(world_.ref(p, s_my_res_));
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (AgentId r : touched)
    world_.set_num(r, s_h_, h_index(citation_counts(r)));
  if (!touched.empty()) reposition();
}

void Scholars::reposition() {
  int max_h = 0;
  const std::vector<AgentId> researchers = world_.agents_of(researcher_);
  for (AgentId r : researchers)
    max_h = std::max(max_h, static_cast<int>(world_.num(r, s_h_)));
  const double scale =
      max_h > 0 ? (world_.height() - 1.0) / max_h : 0.0;
  const double dx =
      static_cast<double>(world_.width()) / (researchers.size() + 1.0);
  int i = 0;
  for (AgentId r : researchers) {
    const double h = world_.num(r, s_h_);
    world_.move_to(r, {dx * (i + 1.0), h * scale});
    int j = 0;
    for (AgentId p : world_.idset(r, s_my_papers_)) {
      world_.move_to(p, {dx * (i + 1.0) + 0.2 * (j + 1), h * scale});
      ++j;
    }
    ++i;
  }
}

void Scholars::publish() {
  int max_h = 0, total_cites = 0;
  for (AgentId r : world_.agents_of(researcher_))
    max_h = std::max(max_h, static_cast<int>(world_.num(r, s_h_)));
  for (AgentId p : world_.agents_of(paper_))
    total_cites += static_cast<int>(world_.num(p, s_cites_));
  world_.set_global("max_h", max_h);
  world_.set_global("total_citations", total_cites);
  world_.set_global("papers", static_cast<double>(world_.count(paper_)));
}

void Scholars::step() {
  const engine::World::Behavior behaviors[] = {
      [this](World&) { step_citations(); },
      [this](World&) { publish(); },
  };
  world_.step(behaviors);
}

double Scholars::report(const std::string& name) {
  return world_.global(name);
}

TcnInput Scholars::tcn_input() const {
  TcnInput input;
  std::vector<AgentId> researchers = world_.agents_of(researcher_);
  for (AgentId r : researchers)
    input.researchers.push_back(
        {"res-" + std::to_string(r), researcher_h(r)});
  for (std::size_t i = 0; i < researchers.size(); ++i) {
    for (AgentId p : world_.idset(researchers[i], s_my_papers_)) {
      input.incidences.push_back(
          {static_cast<int>(i), "paper-" + std::to_string(p),
           static_cast<int>(world_.num(p, s_cites_))});
    }
  }
  return input;
}

std::unique_ptr<engine::ModelInstance> make_scholars(
    const engine::ParamMap& params, int width, int height,
    std::uint64_t seed) {
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  return std::make_unique<Scholars>(
      static_cast<int>(get("n-res", 60)),
      static_cast<int>(get("max-init-papers", 10)), get("rate", 0.2), width,
      height, seed);
}

vomas::Invariant h_consistency_invariant() {
  vomas::Invariant inv;
  inv.name = "h-consistency";
  inv.contexts = [](const engine::World& w) {
    std::vector<vomas::Context> out;
    for (engine::AgentId id : w.agents_of(w.breed_id("researcher"))) {
      vomas::Context ctx;
      ctx.agent = id;
      out.push_back(ctx);
    }
    return out;
  };
  inv.pre = [](const engine::World&, const vomas::Context&) { return true; };
  inv.post = [](const engine::World& w, const vomas::Context& ctx) {
    const engine::BreedId rb = w.breed_id("researcher");
    const engine::BreedId pb = w.breed_id("paper");
    const int my_papers = w.attr_slot(rb, "my-papers");
    const int h_slot = w.attr_slot(rb, "h");
    const int cites = w.attr_slot(pb, "num-cites");
    std::vector<int> counts;
    for (engine::AgentId p : w.idset(ctx.agent, my_papers))
      counts.push_back(static_cast<int>(w.num(p, cites)));
    return static_cast<int>(w.num(ctx.agent, h_slot)) == h_index(counts);
  };
  return inv;
}

}  // namespace casim::models
