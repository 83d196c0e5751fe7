#include "casim/models/sacs.hpp"

#include <algorithm>

namespace casim::models {

using engine::AgentId;
using engine::Vec2;
using engine::World;

void SacsParams::validate() const {
  if (device_probability < 0.0 || device_probability > 100.0)
    throw ConfigError("sacs: device-probability must lie in [0,100]");
  if (n_gw < 0 || n_cs < 0 || n_srchs < 0 || k < 1)
    throw ConfigError("sacs: role counts must be >= 0 and k >= 1");
  if (max_ttl < 1) throw ConfigError("sacs: max-ttl must be >= 1");
  if (sacs_radius < 0) throw ConfigError("sacs: sacs-radius must be >= 0");
  if (sens_radius <= 0.0) throw ConfigError("sacs: sens-radius must be > 0");
  if (mobile_fraction < 0.0 || mobile_fraction > 1.0)
    throw ConfigError("sacs: mobile-fraction must lie in [0,1]");
}

Sacs::Sacs(const SacsParams& params, int width, int height, std::uint64_t seed,
           bool record_events)
    : params_(params),
      world_(width, height, seed, /*wrap=*/true),
      record_events_(record_events) {
  params_.validate();
  declare_breeds();
  setup();
}

Sacs::Sacs(const SacsParams& params, int width, int height, std::uint64_t seed,
           const SacsLayout& layout, bool record_events)
    : params_(params),
      world_(width, height, seed, /*wrap=*/true),
      record_events_(record_events) {
  params_.validate();
  declare_breeds();
  setup_from_layout(layout);
}

void Sacs::declare_breeds() {
  device_ = world_.declare_breed(
      "device", {{"gateway?", engine::AttrKind::Number},
                 {"start?", engine::AttrKind::Number},
                 {"goal?", engine::AttrKind::Number},
                 {"explored?", engine::AttrKind::Number},
                 {"sacs-dist", engine::AttrKind::Number}});
  query_ = world_.declare_breed("query",
                                {{"loc", engine::AttrKind::Ref},
                                 {"ttl", engine::AttrKind::Number},
                                 {"target", engine::AttrKind::Number}});
  s_gateway_ = world_.attr_slot(device_, "gateway?");
  s_start_ = world_.attr_slot(device_, "start?");
  s_goal_ = world_.attr_slot(device_, "goal?");
  s_explored_ = world_.attr_slot(device_, "explored?");
  s_sacs_dist_ = world_.attr_slot(device_, "sacs-dist");
  s_loc_ = world_.attr_slot(query_, "loc");
  s_ttl_ = world_.attr_slot(query_, "ttl");
  s_target_ = world_.attr_slot(query_, "target");
}

void Sacs::hatch_queries(AgentId origin) {
  for (int w = 0; w < params_.k; ++w) {
    AgentId q = world_.spawn(query_, world_.agent(origin).pos);
    world_.set_ref(q, s_loc_, origin);
    world_.set_num(q, s_ttl_, params_.max_ttl);
    world_.set_num(q, s_target_, 0.0);
    ++metrics_.ntot;
    ++live_queries_;
    if (record_events_) events_.push_back({q, {origin}, {}});
  }
}

void Sacs::setup_from_layout(const SacsLayout& layout) {
  std::vector<AgentId> ids;
  ids.reserve(layout.devices.size());
  for (const auto& pos : layout.devices) {
    AgentId id = world_.spawn(device_, pos);
    world_.set_num(id, s_sacs_dist_, params_.sacs_radius);
    ids.push_back(id);
  }
  for (std::size_t i : layout.gateways) world_.set_num(ids.at(i), s_gateway_, 1.0);
  for (std::size_t i : layout.starts) {
    world_.set_num(ids.at(i), s_start_, 1.0);
    hatch_queries(ids.at(i));
  }
  for (std::size_t i : layout.goals) world_.set_num(ids.at(i), s_goal_, 1.0);
  establish_gradient();
  publish();
}

double Sacs::sacs_distance(AgentId device) const {
  return world_.num(device, s_sacs_dist_);
}
bool Sacs::is_goal(AgentId device) const {
  return world_.num(device, s_goal_) != 0.0;
}
bool Sacs::is_gateway(AgentId device) const {
  return world_.num(device, s_gateway_) != 0.0;
}
bool Sacs::is_start(AgentId device) const {
  return world_.num(device, s_start_) != 0.0;
}

void Sacs::setup() {
  Rng& rng = world_.rng();
  // make-computing-agents: every patch may sprout one device
  for (int y = 0; y < world_.height(); ++y) {
    for (int x = 0; x < world_.width(); ++x) {
      if (rng.uniform(0.0, 100.0) >= params_.device_probability) continue;
      Vec2 p{x + 0.5 + rng.uniform(-0.45, 0.45),
             y + 0.5 + rng.uniform(-0.45, 0.45)};
      AgentId id = world_.spawn(device_, p, rng.heading());
      world_.set_num(id, s_sacs_dist_, params_.sacs_radius);
    }
  }
  std::vector<AgentId> devices = world_.agents_of(device_);
  if (static_cast<int>(devices.size()) <
      params_.n_gw + params_.n_cs + params_.n_srchs)
    throw ModelError("sacs setup: " + std::to_string(devices.size()) +
                     " devices cannot fill " +
                     std::to_string(params_.n_gw + params_.n_cs +
                                    params_.n_srchs) +
                     " roles");

  // gateways, then search origins among non-gateways, then goals among the rest
  std::vector<AgentId> pool = devices;
  rng.shuffle(pool);
  for (int i = 0; i < params_.n_gw; ++i) {
    world_.set_num(pool[static_cast<std::size_t>(i)], s_gateway_, 1.0);
    // adjust-locations: nudge a gateway off any device at the same spot
    AgentId id = pool[static_cast<std::size_t>(i)];
    for (int tries = 0;
         tries < 50 && !world_
                            .agents_in_radius(world_.agent(id).pos, 0.2,
                                              device_, id)
                            .empty();
         ++tries) {
      world_.set_heading(id, rng.heading());
      world_.forward(id, 0.2);
    }
  }

  std::vector<AgentId> non_gateway;
  for (AgentId id : devices)
    if (!is_gateway(id)) non_gateway.push_back(id);
  rng.shuffle(non_gateway);
  for (int i = 0; i < params_.n_srchs; ++i) {
    AgentId origin = non_gateway[static_cast<std::size_t>(i)];
    world_.set_num(origin, s_start_, 1.0);
    hatch_queries(origin);
  }

  std::vector<AgentId> candidates;
  for (AgentId id : non_gateway)
    if (!is_start(id)) candidates.push_back(id);
  rng.shuffle(candidates);
  for (int i = 0; i < params_.n_cs; ++i)
    world_.set_num(candidates[static_cast<std::size_t>(i)], s_goal_, 1.0);

  establish_gradient();
  publish();
}

void Sacs::establish_gradient() {
  std::vector<AgentId> devices = world_.agents_of(device_);
  for (AgentId id : devices) {
    world_.set_num(id, s_explored_, 0.0);
    world_.set_num(id, s_sacs_dist_, params_.sacs_radius);
  }
  std::vector<AgentId> frontier;
  for (AgentId id : devices) {
    if (!is_goal(id)) continue;
    world_.set_num(id, s_sacs_dist_, 0.0);
    world_.set_num(id, s_explored_, 1.0);
    frontier.push_back(id);
  }
  // FIFO frontier stands in for the distributed recursion; the hop argument
  // may not exceed sacs_radius, and only unexplored neighbors are visited,
  // which yields the minimum hop count over all goals' expansions.
  int depth = 0;
  while (!frontier.empty() && depth < params_.sacs_radius) {
    ++depth;
    std::vector<AgentId> next;
    for (AgentId v : frontier) {
      for (AgentId w : world_.agents_in_radius(world_.agent(v).pos,
                                               params_.sens_radius, device_,
                                               v)) {
        if (world_.num(w, s_explored_) != 0.0) continue;
        world_.set_num(w, s_explored_, 1.0);
        world_.set_num(w, s_sacs_dist_,
                       std::min<double>(depth, world_.num(w, s_sacs_dist_)));
        next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
}

void Sacs::step_queries() {
  Rng& rng = world_.rng();
  const bool sacs_on = params_.sacs_radius > 0;
  for (AgentId q : world_.shuffled_agents(query_, /*salt=*/2)) {
    if (!world_.alive(q)) continue;
    const AgentId loc = world_.ref(q, s_loc_);
    QueryEvent* ev = nullptr;
    if (record_events_) {
      for (auto& e : events_)
        if (e.query == q) ev = &e;
    }
    std::vector<AgentId> neighbors = world_.agents_in_radius(
        world_.agent(loc).pos, params_.sens_radius, device_, loc);
    if (neighbors.empty()) {
      world_.kill(q);
      --live_queries_;
      ++dead_queries_;
      if (ev) ev->outcome = QueryEvent::Outcome::Stranded;
      continue;
    }
    AgentId next;
    if (sacs_on) {
      double best = sacs_distance(neighbors.front());
      for (AgentId n : neighbors) best = std::min(best, sacs_distance(n));
      std::vector<AgentId> ties;
      for (AgentId n : neighbors)
        if (sacs_distance(n) == best) ties.push_back(n);
      next = ties[static_cast<std::size_t>(rng.below(ties.size()))];
    } else {
      next = neighbors[static_cast<std::size_t>(rng.below(neighbors.size()))];
    }
    world_.move_to(q, world_.agent(next).pos);
    world_.set_ref(q, s_loc_, next);
    world_.set_num(q, s_ttl_, world_.num(q, s_ttl_) - 1.0);
    metrics_.nhop += is_gateway(next) ? params_.gw_cost : 1.0;
    if (ev) ev->path.push_back(next);
    // check-goal
    if (is_goal(next) || is_gateway(next)) {
      ++metrics_.nsucc;
      world_.kill(q);
      --live_queries_;
      ++dead_queries_;
      if (ev) ev->outcome = QueryEvent::Outcome::Success;
    } else if (world_.num(q, s_ttl_) <= 0.0) {
      world_.kill(q);
      --live_queries_;
      ++dead_queries_;
      if (ev) ev->outcome = QueryEvent::Outcome::TtlExpired;
    }
  }
}

void Sacs::move_devices() {
  Rng& rng = world_.rng();
  for (AgentId id : world_.agents_of(device_)) {
    if (!rng.chance(params_.mobile_fraction)) continue;
    world_.set_heading(id, rng.heading());
    world_.forward(id, 1.0);
  }
  establish_gradient();
}

void Sacs::publish() {
  world_.set_global("nsucc", static_cast<double>(metrics_.nsucc));
  world_.set_global("ntot", static_cast<double>(metrics_.ntot));
  world_.set_global("nhop", metrics_.nhop);
  world_.set_global("live-queries", static_cast<double>(live_queries_));
  world_.set_global("dead-queries", static_cast<double>(dead_queries_));
}

void Sacs::step() {
  std::vector<engine::World::Behavior> behaviors;
  if (params_.mobility)
    behaviors.push_back([this](World&) { move_devices(); });
  behaviors.push_back([this](World&) { step_queries(); });
  behaviors.push_back([this](World&) { publish(); });
  world_.step(behaviors);
}

SacsMetrics Sacs::metrics() const { return metrics_; }

double Sacs::report(const std::string& name) { return world_.global(name); }

std::unique_ptr<engine::ModelInstance> make_sacs(const engine::ParamMap& params,
                                                 int width, int height,
                                                 std::uint64_t seed) {
  SacsParams p;
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  p.device_probability = get("device-probability", p.device_probability);
  p.n_gw = static_cast<int>(get("n-gw", p.n_gw));
  p.n_cs = static_cast<int>(get("n-cs", p.n_cs));
  p.n_srchs = static_cast<int>(get("n-srchs", p.n_srchs));
  p.k = static_cast<int>(get("k", p.k));
  p.max_ttl = static_cast<int>(get("max-ttl", p.max_ttl));
  p.sacs_radius = static_cast<int>(get("sacs-radius", p.sacs_radius));
  p.sens_radius = get("sens-radius", p.sens_radius);
  p.gw_cost = get("gw-cost", p.gw_cost);
  p.mobility = get("mobility", 0.0) != 0.0;
  p.mobile_fraction = get("mobile-fraction", p.mobile_fraction);
  return std::make_unique<Sacs>(p, width, height, seed);
}

vomas::Invariant success_location_invariant() {
  vomas::Invariant inv;
  inv.name = "success-location";
  inv.pre = [](const engine::World& w, const vomas::Context&) {
    return w.has_global("nsucc");
  };
  inv.post = [](const engine::World& w, const vomas::Context&) {
    const double launched = w.global("ntot");
    const double live = w.global("live-queries");
    const double dead = w.global("dead-queries");
    return w.global("nsucc") <= dead && launched == live + dead;
  };
  inv.snapshot = [](const engine::World& w, const vomas::Context&) {
    return "nsucc=" + std::to_string(w.global("nsucc")) +
           " ntot=" + std::to_string(w.global("ntot"));
  };
  return inv;
}

}  // namespace casim::models
