#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "casim/engine/experiment.hpp"
#include "casim/engine/world.hpp"

namespace casim::vomas {

// Where an invariant evaluation is anchored: a specific agent, a patch,
// or the whole world.
struct Context {
  engine::AgentId agent = engine::kNoAgent;
  int x = -1;
  int y = -1;
  bool is_global() const { return agent == engine::kNoAgent && x < 0; }
  std::string describe() const;
};

// A named contract over world snapshots: when the precondition holds at an
// evaluation point, the postcondition must hold too (after `delay` ticks).
// Both predicates must be pure reads of the snapshot.
struct Invariant {
  std::string name;
  int every_ticks = 1;
  int delay = 0;
  // Evaluate at most this many contexts per point, sampled with the
  // observer stream; 0 means all.
  int sample_cap = 0;
  std::function<std::vector<Context>(const engine::World&)> contexts;
  std::function<bool(const engine::World&, const Context&)> pre;
  std::function<bool(const engine::World&, const Context&)> post;
  std::function<std::string(const engine::World&, const Context&)> snapshot;
};

struct Violation {
  std::string invariant;
  std::int64_t tick = 0;
  Context context;
  std::string details;
};

// Scheduled read-only evaluation of registered invariants. Sampling uses a
// stream derived from (run seed, fixed salt), never the model stream, so a
// run's trace is identical with or without observers.
class Harness {
 public:
  explicit Harness(std::uint64_t run_seed);

  void register_invariant(Invariant inv);  // duplicate name -> error
  bool has_invariant(const std::string& name) const;

  // Call after every completed tick.
  void evaluate(const engine::World& w);

  const std::vector<Violation>& violations() const { return log_; }
  // Number of evaluation points where the named invariant's precondition held.
  std::size_t precondition_hits(const std::string& name) const;

 private:
  struct Pending {
    std::size_t index;
    std::int64_t due;
    Context context;
  };
  void check(const engine::World& w, std::size_t index, const Context& ctx);

  std::vector<Invariant> invariants_;
  std::vector<std::size_t> pre_hits_;
  std::vector<Violation> log_;
  std::vector<Pending> pending_;
  Rng sampler_;
};

void write_violations_csv(const std::vector<Violation>& log, std::ostream& os,
                          const std::vector<std::string>& comment_header = {});

// --- invariant toggle test ---------------------------------------------------

// Two builds of the same model differing only in the guarded mechanism.
struct ToggleSpec {
  std::function<std::unique_ptr<engine::ModelInstance>(std::uint64_t seed)>
      enabled;
  std::function<std::unique_ptr<engine::ModelInstance>(std::uint64_t seed)>
      disabled;
  // Canonical fingerprints of the two configurations; equality is a setup
  // error because the test would compare a run against itself.
  std::string enabled_fingerprint;
  std::string disabled_fingerprint;
  std::function<Invariant()> invariant;
  int reps = 10;
  std::int64_t ticks = 100;
  std::uint64_t base_seed = 0;
};

enum class ToggleOutcome { Pass, Fail, Inconclusive };

struct ToggleReport {
  std::vector<std::size_t> enabled_violations;   // per repetition
  std::vector<std::size_t> disabled_violations;  // per repetition
  std::size_t enabled_pre_hits = 0;
  std::size_t disabled_pre_hits = 0;
  ToggleOutcome outcome = ToggleOutcome::Fail;
  std::string summary() const;
  void write_csv(std::ostream& os) const;
};

// Runs both configurations over `reps` seeded runs. Passes when the enabled
// configuration yields zero violations and the disabled one yields at least
// one in at least one repetition; a disabled configuration whose
// precondition never fires cannot produce violations and is inconclusive.
ToggleReport toggle_test(const ToggleSpec& spec);

}  // namespace casim::vomas
