#include <doctest.h>

#include <cmath>
#include <deque>
#include <functional>
#include <map>

#include "casim/models/sacs.hpp"

using namespace casim;
using engine::AgentId;
using engine::Vec2;
using models::QueryEvent;
using models::Sacs;
using models::SacsLayout;
using models::SacsParams;

namespace {

SacsParams reference_params(int sacs_radius, int max_ttl = 10) {
  SacsParams p;
  p.device_probability = 100.0;
  p.n_gw = 10;
  p.n_cs = 10;
  p.n_srchs = 100;
  p.k = 5;
  p.max_ttl = max_ttl;
  p.sacs_radius = sacs_radius;
  p.sens_radius = 2.0;
  p.gw_cost = 10.0;
  return p;
}

// Proximity graph + multi-source BFS, independent of the model's frontier.
std::vector<int> bfs_to_nearest_goal(Sacs& m) {
  engine::World& w = m.world();
  std::vector<AgentId> devices = w.agents_of(m.device_breed());
  std::vector<std::vector<int>> adj(devices.size());
  for (std::size_t i = 0; i < devices.size(); ++i)
    for (std::size_t j = i + 1; j < devices.size(); ++j)
      if (w.distance(w.agent(devices[i]).pos, w.agent(devices[j]).pos) <=
          m.params().sens_radius) {
        adj[i].push_back(static_cast<int>(j));
        adj[j].push_back(static_cast<int>(i));
      }
  std::vector<int> dist(devices.size(), -1);
  std::deque<int> frontier;
  for (std::size_t i = 0; i < devices.size(); ++i)
    if (m.is_goal(devices[i])) {
      dist[i] = 0;
      frontier.push_back(static_cast<int>(i));
    }
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop_front();
    for (int u : adj[static_cast<std::size_t>(v)])
      if (dist[static_cast<std::size_t>(u)] < 0) {
        dist[static_cast<std::size_t>(u)] =
            dist[static_cast<std::size_t>(v)] + 1;
        frontier.push_back(u);
      }
  }
  return dist;
}

}  // namespace

TEST_CASE("setup: default roles give 2500 devices, disjoint roles, ntot 500") {
  Sacs m(reference_params(5), 50, 50, 42);
  engine::World& w = m.world();
  CHECK(w.count(m.device_breed()) == 2500);
  CHECK(m.metrics().ntot == 500);
  CHECK(m.metrics().nsucc == 0);
  CHECK(m.metrics().nhop == 0.0);
  int gw = 0, goals = 0, starts = 0;
  for (AgentId id : w.agents_of(m.device_breed())) {
    gw += m.is_gateway(id);
    goals += m.is_goal(id);
    starts += m.is_start(id);
    const int roles = m.is_gateway(id) + m.is_goal(id) + m.is_start(id);
    CHECK(roles <= 1);
  }
  CHECK(gw == 10);
  CHECK(goals == 10);
  CHECK(starts == 100);
}

TEST_CASE("setup: zero devices cannot fill roles") {
  SacsParams p = reference_params(5);
  p.device_probability = 0.0;
  CHECK_THROWS_AS(Sacs(p, 50, 50, 1), ModelError);
}

TEST_CASE("gradient: line of three devices labels 0,1,2") {
  SacsParams p = reference_params(2);
  p.n_gw = 0;
  p.n_cs = 1;
  p.n_srchs = 0;
  SacsLayout layout;
  layout.devices = {{5.0, 5.0}, {6.5, 5.0}, {8.0, 5.0}};
  layout.goals = {0};
  Sacs m(p, 20, 20, 1, layout);
  auto devices = m.world().agents_of(m.device_breed());
  CHECK(m.sacs_distance(devices[0]) == 0.0);
  CHECK(m.sacs_distance(devices[1]) == 1.0);
  CHECK(m.sacs_distance(devices[2]) == 2.0);
}

TEST_CASE("gradient: sacs radius 0 labels only the goals") {
  SacsParams p = reference_params(0);
  p.n_gw = 0;
  p.n_cs = 1;
  p.n_srchs = 0;
  SacsLayout layout;
  layout.devices = {{5.0, 5.0}, {6.5, 5.0}, {8.0, 5.0}};
  layout.goals = {0};
  Sacs m(p, 20, 20, 1, layout);
  auto devices = m.world().agents_of(m.device_breed());
  CHECK(m.sacs_distance(devices[0]) == 0.0);
  CHECK(m.sacs_distance(devices[1]) == 0.0);  // initial value = sacs radius
  CHECK(m.sacs_distance(devices[2]) == 0.0);
}

TEST_CASE("gradient: Y topology keeps the minimum over goals") {
  SacsParams p = reference_params(5);
  p.n_gw = 0;
  p.n_cs = 2;
  p.n_srchs = 0;
  SacsLayout layout;
  layout.devices = {{2.0, 2.0},   // goal A
                    {3.5, 2.0},
                    {5.0, 2.0},   // junction, 2 hops from both goals
                    {6.5, 2.0},
                    {8.0, 2.0}};  // goal B
  layout.goals = {0, 4};
  Sacs m(p, 20, 20, 1, layout);
  auto devices = m.world().agents_of(m.device_breed());
  CHECK(m.sacs_distance(devices[2]) == 2.0);
  CHECK(m.sacs_distance(devices[1]) == 1.0);
  CHECK(m.sacs_distance(devices[3]) == 1.0);
}

TEST_CASE("gradient equals BFS-to-nearest-goal on random fields (oracle)") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SacsParams p = reference_params(6);
    p.n_srchs = 0;
    p.n_gw = 5;
    p.n_cs = 8;
    Sacs m(p, 30, 30, seed);
    const std::vector<int> oracle = bfs_to_nearest_goal(m);
    auto devices = m.world().agents_of(m.device_breed());
    for (std::size_t i = 0; i < devices.size(); ++i) {
      const double label = m.sacs_distance(devices[i]);
      if (oracle[i] >= 0 && oracle[i] <= p.sacs_radius)
        CHECK(label == static_cast<double>(oracle[i]));
      else
        CHECK(label == static_cast<double>(p.sacs_radius));
    }
  }
}

TEST_CASE("walkers descend the gradient: min-label neighbor wins") {
  SacsParams p = reference_params(5);
  p.n_gw = 0;
  p.n_cs = 0;
  p.n_srchs = 0;
  p.k = 1;
  SacsLayout layout;
  layout.devices = {{5.0, 5.0}, {6.5, 5.0}, {5.0, 6.5}, {3.5, 5.0}};
  layout.starts = {0};
  Sacs m(p, 20, 20, 3, layout);
  auto devices = m.world().agents_of(m.device_breed());
  const int slot = m.world().attr_slot(m.device_breed(), "sacs-dist");
  m.world().set_num(devices[0], slot, 4.0);
  m.world().set_num(devices[1], slot, 3.0);
  m.world().set_num(devices[2], slot, 1.0);
  m.world().set_num(devices[3], slot, 2.0);
  m.step_queries();
  auto queries = m.world().agents_of(m.query_breed());
  REQUIRE(queries.size() == 1);
  const int loc_slot = m.world().attr_slot(m.query_breed(), "loc");
  CHECK(m.world().ref(queries[0], loc_slot) == devices[2]);
  CHECK(m.metrics().nhop == 1.0);
}

TEST_CASE("gateway step costs gw_cost and counts as a success") {
  SacsParams p = reference_params(5);
  p.n_gw = 0;
  p.n_cs = 0;
  p.n_srchs = 0;
  p.k = 1;
  SacsLayout layout;
  layout.devices = {{5.0, 5.0}, {6.5, 5.0}};
  layout.starts = {0};
  layout.gateways = {1};
  Sacs m(p, 20, 20, 3, layout);
  m.step_queries();
  CHECK(m.metrics().nsucc == 1);
  CHECK(m.metrics().nhop == 10.0);
  CHECK(m.live_queries() == 0);
}

TEST_CASE("ttl exhaustion kills without success; empty neighborhood strands") {
  SacsParams p = reference_params(0);
  p.n_gw = 0;
  p.n_cs = 0;
  p.n_srchs = 0;
  p.k = 1;
  p.max_ttl = 1;
  SacsLayout layout;
  layout.devices = {{5.0, 5.0}, {6.5, 5.0}};
  layout.starts = {0};
  Sacs m(p, 20, 20, 3, layout);
  m.step_queries();
  CHECK(m.metrics().nsucc == 0);
  CHECK(m.metrics().nhop == 1.0);
  CHECK(m.live_queries() == 0);

  SacsLayout lonely;
  lonely.devices = {{5.0, 5.0}};
  lonely.starts = {0};
  Sacs m2(p, 20, 20, 3, lonely);
  CHECK(m2.live_queries() == 1);
  m2.step_queries();
  CHECK(m2.live_queries() == 0);
  CHECK(m2.metrics().nhop == 0.0);  // died in place
}

TEST_CASE("expected successes match exhaustive walk enumeration (oracle)") {
  // line of six devices, goal at the left end, walkers blind (SACS off)
  SacsParams p = reference_params(0);
  p.n_gw = 0;
  p.n_cs = 0;
  p.n_srchs = 0;
  p.k = 1;
  p.max_ttl = 3;
  SacsLayout layout;
  for (int i = 0; i < 6; ++i) layout.devices.push_back({2.0 + 1.5 * i, 5.0});
  layout.goals = {0};
  layout.starts = {3};

  std::function<double(int, int)> success_prob = [&](int at, int ttl) {
    if (ttl == 0) return 0.0;
    std::vector<int> nb;
    if (at > 0) nb.push_back(at - 1);
    if (at < 5) nb.push_back(at + 1);
    double total = 0.0;
    for (int n : nb) {
      if (n == 0)
        total += 1.0 / nb.size();
      else
        total += success_prob(n, ttl - 1) / nb.size();
    }
    return total;
  };
  const double expected = success_prob(3, 3);
  CHECK(expected == doctest::Approx(0.125));

  int successes = 0;
  const int runs = 4000;
  for (int seed = 0; seed < runs; ++seed) {
    Sacs m(p, 20, 20, static_cast<std::uint64_t>(seed), layout);
    for (int t = 0; t < 5; ++t) m.step_queries();
    successes += static_cast<int>(m.metrics().nsucc);
  }
  const double mean = static_cast<double>(successes) / runs;
  const double sigma = std::sqrt(expected * (1 - expected) / runs);
  CHECK(std::abs(mean - expected) < 4 * sigma);
}

TEST_CASE("conservation and event-log replay over a full run") {
  Sacs m(reference_params(5), 50, 50, 7, /*record_events=*/true);
  while (!m.finished()) {
    m.step();
    const auto metrics = m.metrics();
    CHECK(metrics.nsucc <= metrics.ntot);
    CHECK(m.live_queries() +
              static_cast<std::int64_t>(m.world().global("dead-queries")) ==
          metrics.ntot);
  }
  const auto metrics = m.metrics();
  CHECK(metrics.ntot == 500);
  CHECK(metrics.nhop >= static_cast<double>(metrics.nsucc));

  int successes = 0;
  for (const QueryEvent& ev : m.events()) {
    CHECK(ev.outcome != QueryEvent::Outcome::Alive);
    CHECK(ev.path.size() <= 1 + static_cast<std::size_t>(m.params().max_ttl));
    if (ev.outcome == QueryEvent::Outcome::Success) {
      ++successes;
      const AgentId final_loc = ev.path.back();
      CHECK((m.is_goal(final_loc) || m.is_gateway(final_loc)));
    }
  }
  CHECK(successes == metrics.nsucc);
}

TEST_CASE("monotone guidance: every hop goes to a minimum-label neighbor") {
  SacsParams p = reference_params(5);
  Sacs m(p, 50, 50, 11, /*record_events=*/true);
  const int slot = m.world().attr_slot(m.device_breed(), "sacs-dist");
  std::map<AgentId, double> label;
  for (AgentId id : m.world().agents_of(m.device_breed()))
    label[id] = m.world().num(id, slot);
  while (!m.finished()) m.step();
  for (const QueryEvent& ev : m.events()) {
    for (std::size_t i = 0; i + 1 < ev.path.size(); ++i) {
      const AgentId from = ev.path[i];
      const AgentId to = ev.path[i + 1];
      double best = label[to];
      for (AgentId n : m.world().agents_in_radius(
               m.world().agent(from).pos, p.sens_radius, m.device_breed(),
               from))
        best = std::min(best, label[n]);
      CHECK(label[to] == best);
    }
  }
}

TEST_CASE("mobility: fraction 0 leaves devices still, fraction 1 moves all") {
  SacsParams p = reference_params(5);
  p.mobility = true;
  p.mobile_fraction = 0.0;
  Sacs m(p, 50, 50, 5);
  std::map<AgentId, Vec2> before;
  for (AgentId id : m.world().agents_of(m.device_breed()))
    before[id] = m.world().agent(id).pos;
  m.step();
  for (const auto& [id, pos] : before) {
    CHECK(m.world().agent(id).pos.x == pos.x);
    CHECK(m.world().agent(id).pos.y == pos.y);
  }

  SacsParams p2 = reference_params(5);
  p2.mobility = true;
  p2.mobile_fraction = 1.0;
  Sacs m2(p2, 50, 50, 5);
  std::map<AgentId, Vec2> before2;
  for (AgentId id : m2.world().agents_of(m2.device_breed()))
    before2[id] = m2.world().agent(id).pos;
  m2.step();
  int moved = 0;
  for (const auto& [id, pos] : before2) {
    const Vec2 now = m2.world().agent(id).pos;
    moved += (now.x != pos.x || now.y != pos.y);
  }
  CHECK(moved == static_cast<int>(before2.size()));
}

TEST_CASE("device moved out of range resets to the initial label") {
  SacsParams p = reference_params(3);
  p.n_gw = 0;
  p.n_cs = 1;
  p.n_srchs = 0;
  SacsLayout layout;
  layout.devices = {{5.0, 5.0}, {6.5, 5.0}};
  layout.goals = {0};
  Sacs m(p, 40, 40, 1, layout);
  auto devices = m.world().agents_of(m.device_breed());
  CHECK(m.sacs_distance(devices[1]) == 1.0);
  m.world().move_to(devices[1], {30.0, 30.0});
  m.establish_gradient();
  CHECK(m.sacs_distance(devices[1]) == 3.0);  // back to sacs-radius
}

TEST_CASE("same seed gives identical metric traces") {
  auto trace = [](std::uint64_t seed) {
    Sacs m(reference_params(5), 50, 50, seed);
    std::vector<double> out;
    while (!m.finished()) {
      m.step();
      out.push_back(m.world().global("nsucc"));
      out.push_back(m.world().global("nhop"));
    }
    return out;
  };
  CHECK(trace(99) == trace(99));
  CHECK(trace(99) != trace(100));
}
