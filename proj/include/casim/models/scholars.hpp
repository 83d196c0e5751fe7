#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "casim/engine/experiment.hpp"
#include "casim/engine/world.hpp"
#include "casim/net/graph.hpp"
#include "casim/vomas/vomas.hpp"

namespace casim::models {

// Largest h such that at least h entries are >= h.
int h_index(const std::vector<int>& citations);

// One chronological snapshot: every paper existing that year with its
// cumulative citation count.
struct YearRecord {
  int year = 0;
  std::vector<std::pair<std::string, int>> papers;  // (paper id, citations)
};

// Per-year h values; years must be strictly increasing.
std::vector<std::pair<int, int>> load_history(
    const std::vector<YearRecord>& records);

// CSV of (year, paper_id, cumulative_citations), '#' comments allowed.
std::vector<YearRecord> parse_history_csv(std::istream& in);

// One row per (author, paper) incidence; co-authored papers appear once
// per author and become one instance node each in the TCN.
struct TcnInput {
  struct Researcher {
    std::string id;
    int h = 0;
  };
  struct Incidence {
    int researcher = 0;  // index into researchers
    std::string paper;
    int citations = 0;
  };
  std::vector<Researcher> researchers;
  std::vector<Incidence> incidences;
};

// Temporal citation network: researcher nodes plus per-author paper
// instances, author-paper edges only, researchers placed vertically by h.
struct Tcn {
  net::Graph graph;
  int paper_instances = 0;
};

Tcn build_tcn(const TcnInput& input, double view_height);

// Node/edge budget of the plain author-paper-citation representation of the
// same data (paper-paper links counted once per citation).
struct CitationNetworkSize {
  int nodes = 0;
  int edges = 0;
};
CitationNetworkSize citation_network_size(const TcnInput& input);

// id, kind, h-or-citations, x, y
void write_tcn_nodes_csv(const Tcn& tcn, std::ostream& os);

class Scholars : public engine::ModelInstance {
 public:
  Scholars(int n_res, int max_init_papers, double rate, int width, int height,
           std::uint64_t seed);

  engine::World& world() override { return world_; }
  void step() override;
  double report(const std::string& name) override;

  // Bernoulli citation accrual: each paper gains one citation with
  // probability rate * tend_to_be_cited, then owners' h are recomputed.
  void step_citations();

  int researcher_h(engine::AgentId researcher) const;
  std::vector<int> citation_counts(engine::AgentId researcher) const;
  TcnInput tcn_input() const;

  engine::BreedId researcher_breed() const { return researcher_; }
  engine::BreedId paper_breed() const { return paper_; }

 private:
  void setup(int n_res, int max_init_papers);
  void reposition();
  void publish();

  double rate_;
  engine::World world_;
  engine::BreedId researcher_ = 0, paper_ = 0;
  int s_num_papers_ = 0, s_h_ = 0, s_my_papers_ = 0;
  int s_tend_ = 0, s_cites_ = 0, s_my_res_ = 0, s_year_ = 0;
};

std::unique_ptr<engine::ModelInstance> make_scholars(
    const engine::ParamMap& params, int width, int height, std::uint64_t seed);

// Contract: every researcher's stored h equals h_index of their papers'
// citation counts, and vertical position is monotone in h.
vomas::Invariant h_consistency_invariant();

}  // namespace casim::models
