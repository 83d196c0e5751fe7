#include "casim/engine/world.hpp"

#include <algorithm>
#include <cmath>

namespace casim::engine {

double normalize_heading(double deg) {
  double h = std::fmod(deg, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h = 0.0;  // fmod of tiny negatives can land on 360
  return h;
}

double heading_difference(double a, double b) {
  double d = std::fmod(a - b, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

World::World(int width, int height, std::uint64_t seed, bool wrap)
    : width_(width), height_(height), wrap_(wrap), seed_(seed), rng_(seed) {
  if (width < 1 || height < 1)
    throw ConfigError("world dimensions must be positive");
}

BreedId World::declare_breed(
    const std::string& name,
    std::vector<std::pair<std::string, AttrKind>> attrs) {
  if (breed_by_name_.count(name))
    throw ConfigError("breed already declared: " + name);
  Schema s;
  s.name = name;
  s.attrs = std::move(attrs);
  for (std::size_t i = 0; i < s.attrs.size(); ++i) {
    if (s.slot_of.count(s.attrs[i].first))
      throw ConfigError("duplicate attribute '" + s.attrs[i].first +
                        "' on breed " + name);
    s.slot_of[s.attrs[i].first] = static_cast<int>(i);
  }
  BreedId id = static_cast<BreedId>(schemas_.size());
  schemas_.push_back(std::move(s));
  breed_by_name_[name] = id;
  counts_.push_back(0);
  cells_.emplace_back(static_cast<std::size_t>(width_) * height_);
  return id;
}

BreedId World::breed_id(const std::string& name) const {
  auto it = breed_by_name_.find(name);
  if (it == breed_by_name_.end()) throw ModelError("unknown breed: " + name);
  return it->second;
}

const std::string& World::breed_name(BreedId b) const {
  return schemas_.at(static_cast<std::size_t>(b)).name;
}

int World::attr_slot(BreedId b, const std::string& attr) const {
  const auto& s = schemas_.at(static_cast<std::size_t>(b));
  auto it = s.slot_of.find(attr);
  if (it == s.slot_of.end())
    throw ModelError("breed " + s.name + " has no attribute '" + attr + "'");
  return it->second;
}

namespace {
Vec2 heading_vector(double deg) {
  const double rad = deg * M_PI / 180.0;
  return {std::sin(rad), std::cos(rad)};
}
}  // namespace

AgentId World::spawn(BreedId breed, Vec2 pos, double heading) {
  const auto& schema = schemas_.at(static_cast<std::size_t>(breed));
  Agent a;
  a.id = next_id_++;
  a.breed = breed;
  a.pos = wrap_position(pos);
  a.heading = normalize_heading(heading);
  a.hvec = heading_vector(a.heading);
  a.attrs.reserve(schema.attrs.size());
  for (const auto& [name, kind] : schema.attrs) {
    switch (kind) {
      case AttrKind::Number: a.attrs.emplace_back(0.0); break;
      case AttrKind::Ref: a.attrs.emplace_back(kNoAgent); break;
      case AttrKind::IdSet: a.attrs.emplace_back(IdSet{}); break;
    }
  }
  counts_[static_cast<std::size_t>(breed)]++;
  ++live_count_;
  index_add(a);
  slots_.push_back(Slot{std::move(a), true});
  return slots_.back().agent.id;
}

void World::kill(AgentId id) {
  auto& a = checked(id);
  index_remove(a);
  counts_[static_cast<std::size_t>(a.breed)]--;
  --live_count_;
  slots_[static_cast<std::size_t>(id)].live = false;
}

bool World::alive(AgentId id) const {
  return id >= 0 && id < static_cast<AgentId>(slots_.size()) &&
         slots_[static_cast<std::size_t>(id)].live;
}

Agent& World::agent(AgentId id) { return checked(id); }
const Agent& World::agent(AgentId id) const { return checked(id); }

const Agent& World::checked(AgentId id) const {
  if (!alive(id))
    throw ModelError("no live agent with id " + std::to_string(id));
  return slots_[static_cast<std::size_t>(id)].agent;
}

Agent& World::checked(AgentId id) {
  if (!alive(id))
    throw ModelError("no live agent with id " + std::to_string(id));
  return slots_[static_cast<std::size_t>(id)].agent;
}

std::size_t World::count(BreedId breed) const {
  if (breed == kAnyBreed) return live_count_;
  return counts_.at(static_cast<std::size_t>(breed));
}

std::vector<AgentId> World::agents_of(BreedId breed) const {
  std::vector<AgentId> out;
  out.reserve(live_count_);
  for (const auto& s : slots_)
    if (s.live && (breed == kAnyBreed || s.agent.breed == breed))
      out.push_back(s.agent.id);
  // slots are in spawn order, so ids are already ascending
  return out;
}

std::vector<AgentId> World::shuffled_agents(BreedId breed,
                                            std::uint64_t salt) const {
  std::vector<AgentId> ids = agents_of(breed);
  Rng r(mix_u64(seed_, static_cast<std::uint64_t>(tick_), salt));
  r.shuffle(ids);
  return ids;
}

void World::check_slot(const Agent& a, int slot, AttrKind kind) const {
  const auto& schema = schemas_[static_cast<std::size_t>(a.breed)];
  if (slot < 0 || slot >= static_cast<int>(schema.attrs.size()))
    throw ModelError("attribute slot out of range for breed " + schema.name);
  if (schema.attrs[static_cast<std::size_t>(slot)].second != kind)
    throw ModelError("attribute kind mismatch on breed " + schema.name +
                     " slot " + std::to_string(slot));
}

double World::num(AgentId id, int slot) const {
  const Agent& a = checked(id);
  check_slot(a, slot, AttrKind::Number);
  return std::get<double>(a.attrs[static_cast<std::size_t>(slot)]);
}

void World::set_num(AgentId id, int slot, double v) {
  Agent& a = checked(id);
  check_slot(a, slot, AttrKind::Number);
  a.attrs[static_cast<std::size_t>(slot)] = v;
}

AgentId World::ref(AgentId id, int slot) const {
  const Agent& a = checked(id);
  check_slot(a, slot, AttrKind::Ref);
  return std::get<AgentId>(a.attrs[static_cast<std::size_t>(slot)]);
}

void World::set_ref(AgentId id, int slot, AgentId v) {
  Agent& a = checked(id);
  check_slot(a, slot, AttrKind::Ref);
  a.attrs[static_cast<std::size_t>(slot)] = v;
}

const IdSet& World::idset(AgentId id, int slot) const {
  const Agent& a = checked(id);
  check_slot(a, slot, AttrKind::IdSet);
  return std::get<IdSet>(a.attrs[static_cast<std::size_t>(slot)]);
}

IdSet& World::idset_mut(AgentId id, int slot) {
  Agent& a = checked(id);
  check_slot(a, slot, AttrKind::IdSet);
  return std::get<IdSet>(a.attrs[static_cast<std::size_t>(slot)]);
}

Vec2 World::displacement(Vec2 from, Vec2 to) const {
  double dx = to.x - from.x;
  double dy = to.y - from.y;
  if (wrap_) {
    const double w = width_, h = height_;
    if (dx > w / 2) dx -= w;
    if (dx < -w / 2) dx += w;
    if (dy > h / 2) dy -= h;
    if (dy < -h / 2) dy += h;
  }
  return {dx, dy};
}

double World::distance(Vec2 a, Vec2 b) const {
  Vec2 d = displacement(a, b);
  return std::sqrt(d.x * d.x + d.y * d.y);
}

double World::towards(Vec2 from, Vec2 to) const {
  Vec2 d = displacement(from, to);
  if (d.x == 0.0 && d.y == 0.0) return 0.0;
  return normalize_heading(std::atan2(d.x, d.y) * 180.0 / M_PI);
}

Vec2 World::wrap_position(Vec2 p) const {
  if (wrap_) {
    p.x = std::fmod(p.x, static_cast<double>(width_));
    if (p.x < 0.0) p.x += width_;
    if (p.x >= width_) p.x = 0.0;
    p.y = std::fmod(p.y, static_cast<double>(height_));
    if (p.y < 0.0) p.y += height_;
    if (p.y >= height_) p.y = 0.0;
  } else {
    p.x = std::clamp(p.x, 0.0, std::nexttoward(width_, 0.0));
    p.y = std::clamp(p.y, 0.0, std::nexttoward(height_, 0.0));
  }
  return p;
}

int World::cell_of(Vec2 p) const {
  int x = std::clamp(static_cast<int>(p.x), 0, width_ - 1);
  int y = std::clamp(static_cast<int>(p.y), 0, height_ - 1);
  return patch_index(x, y);
}

void World::index_add(const Agent& a) {
  cells_[static_cast<std::size_t>(a.breed)][static_cast<std::size_t>(
      cell_of(a.pos))].push_back({a.id, a.pos});
}

void World::index_remove(const Agent& a) {
  auto& bucket = cells_[static_cast<std::size_t>(a.breed)]
                       [static_cast<std::size_t>(cell_of(a.pos))];
  for (auto it = bucket.begin(); it != bucket.end(); ++it) {
    if (it->id == a.id) {
      bucket.erase(it);
      return;
    }
  }
}

void World::move_to(AgentId id, Vec2 p) {
  Agent& a = checked(id);
  index_remove(a);
  a.pos = wrap_position(p);
  index_add(a);
}

void World::forward(AgentId id, double dist) {
  Agent& a = checked(id);
  move_to(id, {a.pos.x + dist * a.hvec.x, a.pos.y + dist * a.hvec.y});
}

void World::set_heading(AgentId id, double deg) {
  Agent& a = checked(id);
  a.heading = normalize_heading(deg);
  a.hvec = heading_vector(a.heading);
}

std::vector<AgentId> World::agents_in_radius(Vec2 center, double radius,
                                             BreedId breed,
                                             AgentId exclude) const {
  std::vector<AgentId> out;
  agents_in_radius(center, radius, breed, exclude, out);
  return out;
}

void World::agents_in_radius(Vec2 center, double radius, BreedId breed,
                             AgentId exclude, std::vector<AgentId>& out) const {
  out.clear();
  if (radius < 0.0) throw ModelError("agents_in_radius: negative radius");
  const double r2 = radius * radius;
  // any point within r of the center lies within ceil(r) cells of its cell
  const int span = static_cast<int>(std::ceil(radius));
  const int cx = std::clamp(static_cast<int>(center.x), 0, width_ - 1);
  const int cy = std::clamp(static_cast<int>(center.y), 0, height_ - 1);
  const int nx = std::min(2 * span + 1, width_);
  const int ny = std::min(2 * span + 1, height_);

  auto scan_breed = [&](BreedId b) {
    const auto& grid = cells_[static_cast<std::size_t>(b)];
    for (int iy = 0; iy < ny; ++iy) {
      int y = cy - span + iy;
      if (wrap_) {
        y = ((y % height_) + height_) % height_;
      } else if (y < 0 || y >= height_) {
        continue;
      }
      for (int ix = 0; ix < nx; ++ix) {
        int x = cx - span + ix;
        if (wrap_) {
          x = ((x % width_) + width_) % width_;
        } else if (x < 0 || x >= width_) {
          continue;
        }
        for (const CellEntry& entry :
             grid[static_cast<std::size_t>(patch_index(x, y))]) {
          if (entry.id == exclude) continue;
          Vec2 d = displacement(center, entry.pos);
          if (d.x * d.x + d.y * d.y <= r2) out.push_back(entry.id);
        }
      }
    }
  };

  if (breed == kAnyBreed) {
    for (BreedId b = 0; b < static_cast<BreedId>(cells_.size()); ++b)
      scan_breed(b);
  } else {
    scan_breed(breed);
  }
  std::sort(out.begin(), out.end());
}

std::vector<double>& World::layer(const std::string& name) {
  auto it = layers_.find(name);
  if (it == layers_.end())
    it = layers_
             .emplace(name, std::vector<double>(
                                static_cast<std::size_t>(width_) * height_))
             .first;
  return it->second;
}

const std::vector<double>& World::layer(const std::string& name) const {
  auto it = layers_.find(name);
  if (it == layers_.end()) throw ModelError("no patch layer named " + name);
  return it->second;
}

bool World::has_layer(const std::string& name) const {
  return layers_.count(name) != 0;
}

double World::global(const std::string& name) const {
  auto it = globals_.find(name);
  if (it == globals_.end()) throw ModelError("no output global named " + name);
  return it->second;
}

void World::step(std::span<const Behavior> behaviors) {
  for (const auto& b : behaviors) b(*this);
  ++tick_;
}

}  // namespace casim::engine
