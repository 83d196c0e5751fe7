#pragma once

#include <memory>
#include <vector>

#include "casim/engine/experiment.hpp"
#include "casim/engine/world.hpp"
#include "casim/vomas/vomas.hpp"

namespace casim::models {

struct SacsParams {
  double device_probability = 100.0;  // percent, per patch
  int n_gw = 10;                      // gateway nodes
  int n_cs = 10;                      // content sources (goals)
  int n_srchs = 100;                  // search origins
  int k = 5;                          // walkers per origin
  int max_ttl = 10;                   // hop budget per walker
  int sacs_radius = 5;                // gradient depth in hops; 0 = SACS off
  double sens_radius = 2.0;           // communication radius, patch units
  double gw_cost = 10.0;              // hop-cost of stepping onto a gateway
  bool mobility = false;
  double mobile_fraction = 0.05;      // devices moved per tick
  void validate() const;
};

struct SacsMetrics {
  std::int64_t nsucc = 0;  // successful queries
  std::int64_t ntot = 0;   // queries launched
  double nhop = 0.0;       // accumulated hop cost
};

// Per-query trace, recorded only when event logging is on (tests).
struct QueryEvent {
  engine::AgentId query = engine::kNoAgent;
  std::vector<engine::AgentId> path;  // devices visited, origin first
  enum class Outcome { Alive, Success, TtlExpired, Stranded } outcome =
      Outcome::Alive;
};

// Explicit scenario: device positions with roles given by index.
struct SacsLayout {
  std::vector<engine::Vec2> devices;
  std::vector<std::size_t> gateways;
  std::vector<std::size_t> starts;
  std::vector<std::size_t> goals;
};

class Sacs : public engine::ModelInstance {
 public:
  Sacs(const SacsParams& params, int width, int height, std::uint64_t seed,
       bool record_events = false);
  Sacs(const SacsParams& params, int width, int height, std::uint64_t seed,
       const SacsLayout& layout, bool record_events = false);

  engine::World& world() override { return world_; }
  void step() override;
  double report(const std::string& name) override;
  bool finished() const override { return live_queries_ == 0; }

  const SacsParams& params() const { return params_; }
  SacsMetrics metrics() const;
  std::int64_t live_queries() const { return live_queries_; }
  const std::vector<QueryEvent>& events() const { return events_; }

  engine::BreedId device_breed() const { return device_; }
  engine::BreedId query_breed() const { return query_; }

  // Multi-source frontier expansion from all goals: goals take label 0,
  // devices within sacs_radius hops take their minimum hop count, everything
  // else keeps the initial sacs_radius value.
  void establish_gradient();
  // One hop of every live walker, gradient descent when SACS is on.
  void step_queries();
  // Brownian displacement of a fraction of devices, then a gradient reset.
  void move_devices();

  double sacs_distance(engine::AgentId device) const;
  bool is_goal(engine::AgentId device) const;
  bool is_gateway(engine::AgentId device) const;
  bool is_start(engine::AgentId device) const;

 private:
  void declare_breeds();
  void setup();
  void setup_from_layout(const SacsLayout& layout);
  void hatch_queries(engine::AgentId origin);
  void publish();

  SacsParams params_;
  engine::World world_;
  bool record_events_;
  engine::BreedId device_ = 0, query_ = 0;
  int s_gateway_ = 0, s_start_ = 0, s_goal_ = 0, s_explored_ = 0,
      s_sacs_dist_ = 0;
  int s_loc_ = 0, s_ttl_ = 0, s_target_ = 0;
  SacsMetrics metrics_;
  std::int64_t live_queries_ = 0;
  std::int64_t dead_queries_ = 0;
  std::vector<QueryEvent> events_;
};

std::unique_ptr<engine::ModelInstance> make_sacs(const engine::ParamMap& params,
                                                 int width, int height,
                                                 std::uint64_t seed);

// Contract around check-goal: successes only come from dead walkers
// (nsucc <= dead) and the population is conserved (launched = live + dead).
// Success locations themselves are checked by event-log replay in tests.
vomas::Invariant success_location_invariant();

}  // namespace casim::models
