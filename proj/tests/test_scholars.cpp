#include <doctest.h>

#include <map>
#include <sstream>

#include "casim/models/scholars.hpp"

using namespace casim;
using engine::AgentId;
using models::Scholars;
using models::Tcn;
using models::TcnInput;
using models::YearRecord;

namespace {

// try every candidate h from len down to 0
int h_brute(const std::vector<int>& cites) {
  for (int h = static_cast<int>(cites.size()); h >= 1; --h) {
    int at_least = 0;
    for (int c : cites) at_least += c >= h;
    if (at_least >= h) return h;
  }
  return 0;
}

const std::vector<YearRecord>& ten_year_history() {
  auto row = [](int year, std::vector<int> cites) {
    YearRecord rec;
    rec.year = year;
    for (std::size_t i = 0; i < cites.size(); ++i)
      rec.papers.emplace_back("p" + std::to_string(i), cites[i]);
    return rec;
  };
  static const std::vector<YearRecord> records = {
      row(1968, {6}),
      row(1969, {6}),
      row(1970, {6, 3}),
      row(1971, {20, 6, 3}),
      row(1972, {20, 7, 6, 3}),
      row(1973, {20, 7, 6, 6, 3}),
      row(1974, {20, 7, 6, 6, 3, 2, 0}),
      row(1975, {166, 20, 7, 6, 6, 3, 3, 2, 0, 0}),
      row(1976, {166, 21, 20, 15, 7, 6, 6, 3, 3, 2, 0, 0}),
      row(1977, {166, 122, 103, 71, 21, 20, 15, 8, 7, 6, 6, 3, 3, 2, 0, 0, 0}),
  };
  return records;
}

}  // namespace

TEST_CASE("h-index worked examples") {
  CHECK(models::h_index({4, 4, 4, 4, 4, 1}) == 4);
  CHECK(models::h_index(
            {166, 122, 103, 71, 21, 20, 15, 8, 7, 6, 6, 3, 3, 2, 0, 0, 0}) ==
        8);
  CHECK(models::h_index({}) == 0);
  CHECK(models::h_index({6}) == 1);
  CHECK(models::h_index({20, 6, 3}) == 3);
  CHECK(models::h_index({0, 0, 0}) == 0);
}

TEST_CASE("h-index matches the brute-force oracle on 1000 random lists") {
  Rng rng(31337);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> cites(rng.below(20));
    for (auto& c : cites) c = static_cast<int>(rng.below(30));
    CHECK(models::h_index(cites) == h_brute(cites));
  }
}

TEST_CASE("h is monotone under new citations and new papers") {
  Rng rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> cites(1 + rng.below(15));
    for (auto& c : cites) c = static_cast<int>(rng.below(20));
    const int h0 = models::h_index(cites);
    std::vector<int> cited = cites;
    cited[rng.below(cited.size())] += 1;
    CHECK(models::h_index(cited) >= h0);
    std::vector<int> extended = cites;
    extended.push_back(static_cast<int>(rng.below(20)));
    CHECK(models::h_index(extended) >= h0);
  }
}

TEST_CASE("load_history reproduces the ten-year h timeline") {
  const auto timeline = models::load_history(ten_year_history());
  const std::vector<int> expected = {1, 1, 2, 3, 3, 4, 4, 5, 6, 8};
  REQUIRE(timeline.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(timeline[i].first == 1968 + static_cast<int>(i));
    CHECK(timeline[i].second == expected[i]);
  }
  CHECK(models::load_history({}).empty());
}

TEST_CASE("load_history rejects non-increasing years") {
  std::vector<YearRecord> bad = {{1990, {{"a", 1}}}, {1990, {{"a", 2}}}};
  CHECK_THROWS_AS(models::load_history(bad), ModelError);
  std::vector<YearRecord> worse = {{1990, {{"a", 1}}}, {1989, {{"a", 2}}}};
  CHECK_THROWS_AS(models::load_history(worse), ModelError);
}

TEST_CASE("history csv parsing") {
  std::istringstream in(
      "year,paper_id,citations\n"
      "# a comment\n"
      "1970,p0,6\n"
      "1970,p1,3\n"
      "1971,p0,20\n");
  const auto records = models::parse_history_csv(in);
  REQUIRE(records.size() == 2);
  CHECK(records[0].year == 1970);
  CHECK(records[0].papers.size() == 2);
  CHECK(records[1].papers.size() == 1);

  std::istringstream bad("1970,p0\n");
  CHECK_THROWS_AS(models::parse_history_csv(bad), ParseError);
  std::istringstream nonnum("1970,p0,x\n");
  CHECK_THROWS_AS(models::parse_history_csv(nonnum), ParseError);
}

TEST_CASE("population setup: counts, bounds, determinism") {
  Scholars a(60, 10, 0.2, 40, 40, 5);
  CHECK(a.world().count(a.researcher_breed()) == 60);
  for (AgentId r : a.world().agents_of(a.researcher_breed())) {
    CHECK(a.citation_counts(r).size() <= 10);
    CHECK(a.researcher_h(r) == 0);  // no citations yet
  }
  Scholars b(60, 10, 0.2, 40, 40, 5);
  CHECK(a.world().count(a.paper_breed()) == b.world().count(b.paper_breed()));

  Scholars zero(10, 0, 0.2, 40, 40, 6);
  for (AgentId r : zero.world().agents_of(zero.researcher_breed()))
    CHECK(zero.researcher_h(r) == 0);
}

TEST_CASE("citation accrual: rate 0 freezes, tendency 1 with rate 1 cites all") {
  Scholars frozen(20, 5, 0.0, 40, 40, 7);
  const int before =
      static_cast<int>(frozen.world().global("total_citations"));
  for (int t = 0; t < 10; ++t) frozen.step();
  CHECK(static_cast<int>(frozen.world().global("total_citations")) == before);

  Scholars hot(20, 5, 1.0, 40, 40, 8);
  const int tend = hot.world().attr_slot(hot.paper_breed(), "tend-to-be-cited");
  for (AgentId p : hot.world().agents_of(hot.paper_breed()))
    hot.world().set_num(p, tend, 1.0);
  const auto papers = hot.world().count(hot.paper_breed());
  hot.step();
  CHECK(hot.world().global("total_citations") ==
        static_cast<double>(papers));
}

TEST_CASE("stored h equals the from-scratch oracle after every step") {
  Scholars m(30, 8, 0.5, 40, 40, 9);
  for (int t = 0; t < 25; ++t) {
    m.step();
    for (AgentId r : m.world().agents_of(m.researcher_breed()))
      CHECK(m.researcher_h(r) == h_brute(m.citation_counts(r)));
  }
}

TEST_CASE("tcn: one author with three solo papers") {
  TcnInput input;
  input.researchers = {{"alice", 2}};
  input.incidences = {{0, "p1", 3}, {0, "p2", 2}, {0, "p3", 0}};
  Tcn tcn = models::build_tcn(input, 100.0);
  CHECK(tcn.graph.node_count() == 4);
  CHECK(tcn.graph.edge_count() == 3);
  CHECK(tcn.paper_instances == 3);
}

TEST_CASE("tcn: a co-authored paper becomes one instance per author") {
  TcnInput input;
  input.researchers = {{"alice", 1}, {"bob", 2}};
  input.incidences = {{0, "shared", 5}, {1, "shared", 5}};
  Tcn tcn = models::build_tcn(input, 100.0);
  CHECK(tcn.graph.node_count() == 4);  // 2 researchers + 2 instances
  CHECK(tcn.graph.edge_count() == 2);
  CHECK(tcn.paper_instances == 2);
}

TEST_CASE("tcn structural invariants: no paper-paper edges, h-scaled heights") {
  TcnInput input;
  input.researchers = {{"a", 1}, {"b", 4}, {"c", 4}, {"d", 0}};
  for (int r = 0; r < 4; ++r)
    for (int p = 0; p < 3; ++p)
      input.incidences.push_back(
          {r, "p" + std::to_string(r) + "-" + std::to_string(p), p});
  Tcn tcn = models::build_tcn(input, 120.0);
  for (const auto& [u, v] : tcn.graph.edges()) {
    const bool u_res = tcn.graph.node_labels(u).at("kind") == "researcher";
    const bool v_res = tcn.graph.node_labels(v).at("kind") == "researcher";
    CHECK(u_res != v_res);  // always author-paper, never paper-paper
  }
  auto y_of = [&](const std::string& id) {
    return tcn.graph.node_attrs(tcn.graph.index_of(id)).at("y");
  };
  CHECK(y_of("b") == doctest::Approx(120.0));  // max h at the top
  CHECK(y_of("c") == doctest::Approx(120.0));  // equal h, equal height
  CHECK(y_of("a") == doctest::Approx(30.0));
  CHECK(y_of("d") == doctest::Approx(0.0));
  CHECK(y_of("b") > y_of("a"));
  // equal-h researchers separate horizontally
  CHECK(tcn.graph.node_attrs(tcn.graph.index_of("b")).at("x") !=
        tcn.graph.node_attrs(tcn.graph.index_of("c")).at("x"));
}

TEST_CASE("tcn is strictly smaller than the author-paper-citation network") {
  TcnInput input;
  input.researchers = {{"veteran", 8}};
  const auto& final_year = ten_year_history().back();
  for (const auto& [paper, cites] : final_year.papers)
    input.incidences.push_back({0, paper, cites});
  Tcn tcn = models::build_tcn(input, 100.0);
  const auto classic = models::citation_network_size(input);
  CHECK(tcn.graph.edge_count() < classic.edges);
  // without citations the two representations have equal edge budgets
  TcnInput uncited = input;
  for (auto& inc : uncited.incidences) inc.citations = 0;
  CHECK(models::build_tcn(uncited, 100.0).graph.edge_count() ==
        models::citation_network_size(uncited).edges);
}

TEST_CASE("tcn node csv lists every node with kind and coordinates") {
  TcnInput input;
  input.researchers = {{"a", 1}};
  input.incidences = {{0, "p", 2}};
  Tcn tcn = models::build_tcn(input, 10.0);
  std::ostringstream os;
  models::write_tcn_nodes_csv(tcn, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "id,kind,h_or_citations,x,y");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("researcher vertical position tracks h through a run") {
  Scholars m(15, 6, 0.6, 40, 40, 10);
  for (int t = 0; t < 30; ++t) m.step();
  int max_h = 0;
  for (AgentId r : m.world().agents_of(m.researcher_breed()))
    max_h = std::max(max_h, m.researcher_h(r));
  if (max_h > 0) {
    std::map<int, double> y_by_h;
    for (AgentId r : m.world().agents_of(m.researcher_breed()))
      y_by_h[m.researcher_h(r)] = m.world().agent(r).pos.y;
    double prev_y = -1.0;
    for (const auto& [h, y] : y_by_h) {
      CHECK(y > prev_y);
      prev_y = y;
    }
  }
}
