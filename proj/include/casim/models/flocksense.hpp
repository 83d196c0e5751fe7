#pragma once

#include <map>
#include <memory>
#include <vector>

#include "casim/engine/experiment.hpp"
#include "casim/engine/world.hpp"
#include "casim/vomas/vomas.hpp"

namespace casim::models {

struct FlockParams {
  int n = 1000;       // sensor nodes
  int n_boids = 50;   // boids
  bool visible = true;   // rendering-only flag, kept for config parity
  bool max_scen = false; // one sensor per patch instead of random deployment
  double vision = 3.0;
  double min_separation = 1.0;
  double max_align_turn = 5.0;
  double max_cohere_turn = 3.0;
  double max_separate_turn = 1.5;
  double sensing_radius = 1.0;
  double death_rate = 0.0;  // per-tick battery failure probability
  void validate() const;
};

struct SensedRecord {
  std::int64_t tick = 0;
  int sensed = 0;          // S(t)
  int active_sensors = 0;  // N_s(t)
};

// Sensors go inactive at the listed ticks (explicit ids), in addition to
// any death_rate in the parameters.
using DeathSchedule = std::map<std::int64_t, std::vector<engine::AgentId>>;

// Heading rules, exposed for direct testing. Headings are compass degrees.
// Turn away from the nearest neighbor's heading along the shorter arc,
// capped; equal headings turn clockwise, exact opposition does not turn.
double separate_heading(double own, double neighbor, double max_turn);
// Turn toward a target heading, capped.
double turn_toward(double own, double target, double max_turn);
// Circular mean via summed unit vectors; returns false on a zero resultant.
bool circular_mean(const std::vector<double>& headings_deg, double& mean_out);

class Flocksense : public engine::ModelInstance {
 public:
  Flocksense(const FlockParams& params, int width, int height,
             std::uint64_t seed);

  engine::World& world() override { return world_; }
  void step() override;
  double report(const std::string& name) override;

  const FlockParams& params() const { return params_; }
  SensedRecord last_record() const;
  void schedule_deaths(DeathSchedule schedule) {
    death_schedule_ = std::move(schedule);
  }

  engine::BreedId boid_breed() const { return boid_; }
  engine::BreedId node_breed() const { return node_; }

  // Reads the world only; result mirrors the sensed/active_sensors globals.
  SensedRecord sense(engine::World& w) const;

  // One boid's flocking move: refresh flockmates and nearest neighbor,
  // steer (separate, or align then cohere), advance 1 patch.
  void move_boid(engine::AgentId id);

 private:
  void setup(std::uint64_t seed);
  void apply_deaths();

  FlockParams params_;
  engine::World world_;
  engine::BreedId boid_ = 0, node_ = 0;
  int s_nearest_ = 0, s_flockmates_ = 0;        // boid slots
  int s_sensed_ = 0, s_active_ = 0, s_near_ = 0;  // node slots
  DeathSchedule death_schedule_;
  // hot-loop scratch
  std::vector<engine::AgentId> mates_scratch_;
  mutable std::vector<engine::AgentId> near_scratch_;
};

std::unique_ptr<engine::ModelInstance> make_flocksense(
    const engine::ParamMap& params, int width, int height, std::uint64_t seed);

// Contract: S(t) <= N_s(t) at every evaluation point.
vomas::Invariant sensed_bound_invariant();

}  // namespace casim::models
