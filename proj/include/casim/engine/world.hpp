#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "casim/errors.hpp"
#include "casim/rng.hpp"

namespace casim::engine {

using AgentId = std::int64_t;
using BreedId = int;

inline constexpr AgentId kNoAgent = -1;
inline constexpr BreedId kAnyBreed = -1;

enum class AttrKind { Number, Ref, IdSet };

using IdSet = std::vector<AgentId>;  // kept sorted, unique
using AttrValue = std::variant<double, AgentId, IdSet>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Agent {
  AgentId id = kNoAgent;
  BreedId breed = kAnyBreed;
  Vec2 pos;
  double heading = 0.0;  // compass degrees in [0,360): 0 = +y, 90 = +x
  Vec2 hvec{0.0, 1.0};   // cached unit vector of heading
  std::vector<AttrValue> attrs;
};

// Normalizes any angle into [0,360).
double normalize_heading(double deg);

// Signed smallest difference a-b, result in (-180, 180].
double heading_difference(double a, double b);

// Discrete-time world: toroidal (or bounded) patch grid, an agent registry
// with per-breed attribute schemas, and one deterministic random stream.
// Agent ids are unique per run and never reused.
class World {
 public:
  World(int width, int height, std::uint64_t seed, bool wrap = true);

  std::int64_t tick() const { return tick_; }
  int width() const { return width_; }
  int height() const { return height_; }
  bool wrap() const { return wrap_; }
  std::uint64_t seed() const { return seed_; }
  Rng& rng() { return rng_; }

  // --- breeds & schemas -------------------------------------------------
  BreedId declare_breed(const std::string& name,
                        std::vector<std::pair<std::string, AttrKind>> attrs);
  BreedId breed_id(const std::string& name) const;
  const std::string& breed_name(BreedId b) const;
  // Slot of a declared attribute; lookup error if undeclared.
  int attr_slot(BreedId b, const std::string& attr) const;

  // --- agents -----------------------------------------------------------
  AgentId spawn(BreedId breed, Vec2 pos, double heading = 0.0);
  void kill(AgentId id);
  bool alive(AgentId id) const;
  Agent& agent(AgentId id);
  const Agent& agent(AgentId id) const;
  std::size_t count(BreedId breed = kAnyBreed) const;
  // Live agents in ascending id order.
  std::vector<AgentId> agents_of(BreedId breed = kAnyBreed) const;
  // Deterministic shuffle keyed on (seed, tick, salt); does not consume
  // the model stream, so registering extra readers cannot shift results.
  std::vector<AgentId> shuffled_agents(BreedId breed, std::uint64_t salt) const;

  // --- attribute access (schema-checked) ---------------------------------
  double num(AgentId id, int slot) const;
  void set_num(AgentId id, int slot, double v);
  AgentId ref(AgentId id, int slot) const;
  void set_ref(AgentId id, int slot, AgentId v);
  const IdSet& idset(AgentId id, int slot) const;
  IdSet& idset_mut(AgentId id, int slot);

  // --- space --------------------------------------------------------------
  // Shortest displacement from -> to (wrap-aware on a torus).
  Vec2 displacement(Vec2 from, Vec2 to) const;
  double distance(Vec2 a, Vec2 b) const;
  // Compass bearing of the shortest path from -> to.
  double towards(Vec2 from, Vec2 to) const;
  Vec2 wrap_position(Vec2 p) const;
  void move_to(AgentId id, Vec2 p);
  void forward(AgentId id, double dist);
  void set_heading(AgentId id, double deg);

  // Agents with torus distance <= radius from center; ascending id order.
  // The center agent itself is excluded when exclude is given.
  std::vector<AgentId> agents_in_radius(Vec2 center, double radius,
                                        BreedId breed = kAnyBreed,
                                        AgentId exclude = kNoAgent) const;
  // Allocation-free variant for hot loops; out is cleared and refilled.
  void agents_in_radius(Vec2 center, double radius, BreedId breed,
                        AgentId exclude, std::vector<AgentId>& out) const;

  // --- patch layers -------------------------------------------------------
  // Named per-patch scalar fields, zero-initialized on first use.
  std::vector<double>& layer(const std::string& name);
  const std::vector<double>& layer(const std::string& name) const;
  bool has_layer(const std::string& name) const;
  int patch_index(int x, int y) const { return y * width_ + x; }

  // --- output globals -------------------------------------------------------
  // Named model-level metrics, readable by reporters and observers.
  void set_global(const std::string& name, double v) { globals_[name] = v; }
  double global(const std::string& name) const;
  bool has_global(const std::string& name) const {
    return globals_.count(name) != 0;
  }

  // --- stepping -----------------------------------------------------------
  using Behavior = std::function<void(World&)>;
  // Runs every behavior once in order, then advances the tick.
  void step(std::span<const Behavior> behaviors);
  void step() { step({}); }

 private:
  struct Slot {
    Agent agent;
    bool live = false;
  };
  struct CellEntry {
    AgentId id;
    Vec2 pos;
  };

  const Agent& checked(AgentId id) const;
  Agent& checked(AgentId id);
  void check_slot(const Agent& a, int slot, AttrKind kind) const;
  int cell_of(Vec2 p) const;
  void index_add(const Agent& a);
  void index_remove(const Agent& a);

  int width_, height_;
  bool wrap_;
  std::uint64_t seed_;
  std::int64_t tick_ = 0;
  Rng rng_;

  // slots are append-only, so an agent's id doubles as its slot index
  std::vector<Slot> slots_;
  AgentId next_id_ = 0;
  std::size_t live_count_ = 0;
  std::vector<std::size_t> counts_;  // live agents per breed

  struct Schema {
    std::string name;
    std::vector<std::pair<std::string, AttrKind>> attrs;
    std::map<std::string, int> slot_of;
  };
  std::vector<Schema> schemas_;
  std::map<std::string, BreedId> breed_by_name_;

  // patch-cell buckets per breed, kept in sync with every position change
  std::vector<std::vector<std::vector<CellEntry>>> cells_;

  std::map<std::string, std::vector<double>> layers_;
  std::map<std::string, double> globals_;
};

}  // namespace casim::engine
