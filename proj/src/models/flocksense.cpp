#include "casim/models/flocksense.hpp"

#include <algorithm>
#include <cmath>

namespace casim::models {

using engine::AgentId;
using engine::kNoAgent;
using engine::Vec2;
using engine::World;

void FlockParams::validate() const {
  if (n < 0 || n_boids < 0) throw ConfigError("flocksense: counts must be >= 0");
  if (max_align_turn < 0 || max_cohere_turn < 0 || max_separate_turn < 0)
    throw ConfigError("flocksense: turn caps must be >= 0");
  if (!(vision > min_separation))
    throw ConfigError("flocksense: vision must exceed min-separation");
  if (sensing_radius < 0) throw ConfigError("flocksense: sensing-radius < 0");
  if (death_rate < 0 || death_rate > 1)
    throw ConfigError("flocksense: death-rate must lie in [0,1]");
}

double turn_toward(double own, double target, double max_turn) {
  const double diff = engine::heading_difference(target, own);
  const double turn = std::clamp(diff, -max_turn, max_turn);
  return engine::normalize_heading(own + turn);
}

double separate_heading(double own, double neighbor, double max_turn) {
  const double diff = engine::heading_difference(own, neighbor);
  if (diff == 180.0 || diff == -180.0) return own;  // already opposed
  // widen the gap along the shorter arc; equal headings break clockwise
  const double sign = diff >= 0.0 ? 1.0 : -1.0;
  const double room = 180.0 - std::abs(diff);
  return engine::normalize_heading(own + sign * std::min(max_turn, room));
}

bool circular_mean(const std::vector<double>& headings_deg, double& mean_out) {
  double sx = 0.0, sy = 0.0;
  for (double h : headings_deg) {
    const double rad = h * M_PI / 180.0;
    sx += std::sin(rad);
    sy += std::cos(rad);
  }
  if (std::abs(sx) < 1e-12 && std::abs(sy) < 1e-12) return false;
  mean_out = engine::normalize_heading(std::atan2(sx, sy) * 180.0 / M_PI);
  return true;
}

Flocksense::Flocksense(const FlockParams& params, int width, int height,
                       std::uint64_t seed)
    : params_(params), world_(width, height, seed, /*wrap=*/true) {
  params_.validate();
  node_ = world_.declare_breed(
      "node", {{"boids-near", engine::AttrKind::IdSet},
               {"sensed?", engine::AttrKind::Number},
               {"active?", engine::AttrKind::Number}});
  boid_ = world_.declare_breed(
      "boid", {{"nearest-neighbor", engine::AttrKind::Ref},
               {"flockmates", engine::AttrKind::IdSet}});
  s_near_ = world_.attr_slot(node_, "boids-near");
  s_sensed_ = world_.attr_slot(node_, "sensed?");
  s_active_ = world_.attr_slot(node_, "active?");
  s_nearest_ = world_.attr_slot(boid_, "nearest-neighbor");
  s_flockmates_ = world_.attr_slot(boid_, "flockmates");
  setup(seed);
}

void Flocksense::setup(std::uint64_t) {
  Rng& rng = world_.rng();
  if (params_.max_scen) {
    for (int y = 0; y < world_.height(); ++y)
      for (int x = 0; x < world_.width(); ++x) {
        AgentId id = world_.spawn(node_, {x + 0.5, y + 0.5});
        world_.set_num(id, s_active_, 1.0);
      }
  } else {
    for (int i = 0; i < params_.n; ++i) {
      Vec2 p{rng.uniform(0.0, world_.width()),
             rng.uniform(0.0, world_.height())};
      AgentId id = world_.spawn(node_, p, rng.heading());
      world_.set_num(id, s_active_, 1.0);
      // make-reg-wsn overlap relaxation: nudge until not on top of another
      for (int tries = 0;
           tries < 50 && !world_
                              .agents_in_radius(world_.agent(id).pos, 0.25,
                                                node_, id)
                              .empty();
           ++tries) {
        world_.set_heading(id, rng.heading());
        world_.forward(id, 0.3);
      }
    }
  }
  for (int i = 0; i < params_.n_boids; ++i) {
    Vec2 p{rng.uniform(0.0, world_.width()),
           rng.uniform(0.0, world_.height())};
    world_.spawn(boid_, p, rng.heading());
  }
  sense(world_);
}

void Flocksense::move_boid(AgentId id) {
  const Vec2 pos = world_.agent(id).pos;
  std::vector<AgentId>& mates = mates_scratch_;
  world_.agents_in_radius(pos, params_.vision, boid_, id, mates);
  world_.idset_mut(id, s_flockmates_) = mates;
  if (mates.empty()) {
    world_.set_ref(id, s_nearest_, kNoAgent);
    world_.forward(id, 1.0);
    return;
  }
  AgentId nearest = mates.front();
  double best = world_.distance(pos, world_.agent(nearest).pos);
  for (std::size_t i = 1; i < mates.size(); ++i) {
    double d = world_.distance(pos, world_.agent(mates[i]).pos);
    if (d < best) {
      best = d;
      nearest = mates[i];
    }
  }
  world_.set_ref(id, s_nearest_, nearest);

  const double own = world_.agent(id).heading;
  if (best < params_.min_separation) {
    world_.set_heading(id, separate_heading(own,
                                            world_.agent(nearest).heading,
                                            params_.max_separate_turn));
  } else {
    // align: capped turn toward the flockmates' mean heading, computed
    // from the cached heading unit vectors (same sum as circular_mean)
    double h = own;
    double sx = 0.0, sy = 0.0;
    for (AgentId m : mates) {
      const Vec2 hv = world_.agent(m).hvec;
      sx += hv.x;
      sy += hv.y;
    }
    if (std::abs(sx) >= 1e-12 || std::abs(sy) >= 1e-12) {
      const double mean =
          engine::normalize_heading(std::atan2(sx, sy) * 180.0 / M_PI);
      h = turn_toward(h, mean, params_.max_align_turn);
    }
    // cohere: mean of the flockmate-to-self bearings plus 180 degrees,
    // which is the mean direction toward the flockmates
    sx = sy = 0.0;
    for (AgentId m : mates) {
      const Vec2 d = world_.displacement(pos, world_.agent(m).pos);
      const double len = std::sqrt(d.x * d.x + d.y * d.y);
      if (len == 0.0) continue;  // co-located: no bearing
      sx += d.x / len;
      sy += d.y / len;
    }
    if (std::abs(sx) >= 1e-12 || std::abs(sy) >= 1e-12) {
      const double mean =
          engine::normalize_heading(std::atan2(sx, sy) * 180.0 / M_PI);
      h = turn_toward(h, mean, params_.max_cohere_turn);
    }
    world_.set_heading(id, h);
  }
  world_.forward(id, 1.0);
}

SensedRecord Flocksense::sense(World& w) const {
  SensedRecord rec;
  rec.tick = w.tick();
  for (AgentId id : w.agents_of(node_)) {
    if (w.num(id, s_active_) == 0.0) {
      w.set_num(id, s_sensed_, 0.0);
      w.idset_mut(id, s_near_).clear();
      continue;
    }
    ++rec.active_sensors;
    w.agents_in_radius(w.agent(id).pos, params_.sensing_radius, boid_, id,
                       near_scratch_);
    const bool sensing = !near_scratch_.empty();
    w.idset_mut(id, s_near_) = near_scratch_;
    w.set_num(id, s_sensed_, sensing ? 1.0 : 0.0);
    if (sensing) ++rec.sensed;
  }
  w.set_global("sensed", rec.sensed);
  w.set_global("active_sensors", rec.active_sensors);
  return rec;
}

void Flocksense::apply_deaths() {
  // deaths listed for tick t take effect in the step that ends at t
  auto it = death_schedule_.find(world_.tick() + 1);
  if (it != death_schedule_.end())
    for (AgentId id : it->second)
      if (world_.alive(id)) world_.set_num(id, s_active_, 0.0);
  if (params_.death_rate > 0.0) {
    Rng& rng = world_.rng();
    for (AgentId id : world_.agents_of(node_))
      if (world_.num(id, s_active_) != 0.0 && rng.chance(params_.death_rate))
        world_.set_num(id, s_active_, 0.0);
  }
}

void Flocksense::step() {
  const engine::World::Behavior behaviors[] = {
      [this](World&) { apply_deaths(); },
      [this](World& w) {
        for (AgentId id : w.shuffled_agents(boid_, /*salt=*/1)) move_boid(id);
      },
      [this](World& w) { sense(w); },
  };
  world_.step(behaviors);
}

SensedRecord Flocksense::last_record() const {
  SensedRecord rec;
  rec.tick = world_.tick();
  rec.sensed = static_cast<int>(world_.global("sensed"));
  rec.active_sensors = static_cast<int>(world_.global("active_sensors"));
  return rec;
}

double Flocksense::report(const std::string& name) {
  return world_.global(name);
}

std::unique_ptr<engine::ModelInstance> make_flocksense(
    const engine::ParamMap& params, int width, int height,
    std::uint64_t seed) {
  FlockParams p;
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  p.n = static_cast<int>(get("n", p.n));
  p.n_boids = static_cast<int>(get("n-boids", p.n_boids));
  p.visible = get("visible?", 1.0) != 0.0;
  p.max_scen = get("max-scen?", 0.0) != 0.0;
  p.vision = get("vision", p.vision);
  p.min_separation = get("min-separation", p.min_separation);
  p.max_align_turn = get("max-align-turn", p.max_align_turn);
  p.max_cohere_turn = get("max-cohere-turn", p.max_cohere_turn);
  p.max_separate_turn = get("max-separate-turn", p.max_separate_turn);
  p.sensing_radius = get("sensing-radius", p.sensing_radius);
  p.death_rate = get("death-rate", p.death_rate);
  return std::make_unique<Flocksense>(p, width, height, seed);
}

vomas::Invariant sensed_bound_invariant() {
  vomas::Invariant inv;
  inv.name = "sensed-bound";
  inv.pre = [](const engine::World& w, const vomas::Context&) {
    return w.has_global("sensed");
  };
  inv.post = [](const engine::World& w, const vomas::Context&) {
    return w.global("sensed") <= w.global("active_sensors");
  };
  inv.snapshot = [](const engine::World& w, const vomas::Context&) {
    return "sensed=" + std::to_string(w.global("sensed")) +
           " active=" + std::to_string(w.global("active_sensors"));
  };
  return inv;
}

}  // namespace casim::models
