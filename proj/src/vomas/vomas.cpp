#include "casim/vomas/vomas.hpp"

#include <algorithm>
#include <ostream>

namespace casim::vomas {

namespace {
// salt for the observer sampling stream
constexpr std::uint64_t kObserverSalt = 0x564f4d4153ULL;
}  // namespace

std::string Context::describe() const {
  if (agent != engine::kNoAgent) return "agent:" + std::to_string(agent);
  if (x >= 0)
    return "patch:" + std::to_string(x) + ":" + std::to_string(y);
  return "global";
}

Harness::Harness(std::uint64_t run_seed)
    : sampler_(mix_u64(run_seed, kObserverSalt)) {}

void Harness::register_invariant(Invariant inv) {
  if (!inv.pre || !inv.post)
    throw ConfigError("invariant '" + inv.name +
                      "' needs both pre- and postcondition");
  if (inv.every_ticks < 1)
    throw ConfigError("invariant '" + inv.name + "': schedule must be >= 1");
  if (has_invariant(inv.name))
    throw ConfigError("invariant name already registered: " + inv.name);
  invariants_.push_back(std::move(inv));
  pre_hits_.push_back(0);
}

bool Harness::has_invariant(const std::string& name) const {
  return std::any_of(invariants_.begin(), invariants_.end(),
                     [&](const Invariant& i) { return i.name == name; });
}

std::size_t Harness::precondition_hits(const std::string& name) const {
  for (std::size_t i = 0; i < invariants_.size(); ++i)
    if (invariants_[i].name == name) return pre_hits_[i];
  throw ConfigError("no invariant named " + name);
}

void Harness::check(const engine::World& w, std::size_t index,
                    const Context& ctx) {
  const Invariant& inv = invariants_[index];
  if (!inv.post(w, ctx)) {
    Violation v;
    v.invariant = inv.name;
    v.tick = w.tick();
    v.context = ctx;
    if (inv.snapshot) v.details = inv.snapshot(w, ctx);
    log_.push_back(std::move(v));
  }
}

void Harness::evaluate(const engine::World& w) {
  const std::int64_t tick = w.tick();

  // delayed postconditions due now
  if (!pending_.empty()) {
    std::vector<Pending> keep;
    keep.reserve(pending_.size());
    for (auto& p : pending_) {
      if (p.due <= tick)
        check(w, p.index, p.context);
      else
        keep.push_back(std::move(p));
    }
    pending_ = std::move(keep);
  }

  for (std::size_t i = 0; i < invariants_.size(); ++i) {
    const Invariant& inv = invariants_[i];
    if (tick % inv.every_ticks != 0) continue;
    std::vector<Context> ctxs =
        inv.contexts ? inv.contexts(w) : std::vector<Context>{Context{}};
    if (inv.sample_cap > 0 &&
        ctxs.size() > static_cast<std::size_t>(inv.sample_cap)) {
      // partial Fisher-Yates over the observer stream
      for (int k = 0; k < inv.sample_cap; ++k) {
        std::size_t j = static_cast<std::size_t>(k) +
                        static_cast<std::size_t>(sampler_.below(
                            ctxs.size() - static_cast<std::size_t>(k)));
        std::swap(ctxs[static_cast<std::size_t>(k)], ctxs[j]);
      }
      ctxs.resize(static_cast<std::size_t>(inv.sample_cap));
    }
    for (const Context& ctx : ctxs) {
      if (!inv.pre(w, ctx)) continue;
      ++pre_hits_[i];
      if (inv.delay == 0)
        check(w, i, ctx);
      else
        pending_.push_back(Pending{i, tick + inv.delay, ctx});
    }
  }
}

void write_violations_csv(const std::vector<Violation>& log, std::ostream& os,
                          const std::vector<std::string>& comment_header) {
  for (const auto& line : comment_header) os << "# " << line << "\n";
  os << "invariant,tick,context,details\n";
  for (const auto& v : log)
    os << v.invariant << "," << v.tick << "," << v.context.describe() << ","
       << v.details << "\n";
}

std::string ToggleReport::summary() const {
  auto total = [](const std::vector<std::size_t>& v) {
    std::size_t s = 0;
    for (auto x : v) s += x;
    return s;
  };
  std::string out;
  out += "toggle test: ";
  switch (outcome) {
    case ToggleOutcome::Pass: out += "PASS"; break;
    case ToggleOutcome::Fail: out += "FAIL"; break;
    case ToggleOutcome::Inconclusive: out += "INCONCLUSIVE"; break;
  }
  out += "\n  enabled:  " + std::to_string(total(enabled_violations)) +
         " violations over " + std::to_string(enabled_violations.size()) +
         " reps (" + std::to_string(enabled_pre_hits) + " precondition hits)";
  out += "\n  disabled: " + std::to_string(total(disabled_violations)) +
         " violations over " + std::to_string(disabled_violations.size()) +
         " reps (" + std::to_string(disabled_pre_hits) +
         " precondition hits)\n";
  return out;
}

void ToggleReport::write_csv(std::ostream& os) const {
  os << "config,rep,violations\n";
  for (std::size_t r = 0; r < enabled_violations.size(); ++r)
    os << "enabled," << r + 1 << "," << enabled_violations[r] << "\n";
  for (std::size_t r = 0; r < disabled_violations.size(); ++r)
    os << "disabled," << r + 1 << "," << disabled_violations[r] << "\n";
}

ToggleReport toggle_test(const ToggleSpec& spec) {
  if (!spec.enabled || !spec.disabled || !spec.invariant)
    throw ConfigError("toggle_test: missing factory or invariant");
  if (spec.enabled_fingerprint == spec.disabled_fingerprint)
    throw ConfigError("toggle_test: configurations are identical");
  if (spec.reps < 1) throw ConfigError("toggle_test: reps must be >= 1");

  ToggleReport report;
  auto run_side =
      [&](const std::function<std::unique_ptr<engine::ModelInstance>(
              std::uint64_t)>& factory,
          std::vector<std::size_t>& counts, std::size_t& hits) {
        for (int rep = 0; rep < spec.reps; ++rep) {
          const std::uint64_t seed =
              spec.base_seed + static_cast<std::uint64_t>(rep);
          auto model = factory(seed);
          Harness harness(seed);
          harness.register_invariant(spec.invariant());
          for (std::int64_t t = 0; t < spec.ticks; ++t) {
            model->step();
            harness.evaluate(model->world());
          }
          counts.push_back(harness.violations().size());
          hits += harness.precondition_hits(spec.invariant().name);
        }
      };
  run_side(spec.enabled, report.enabled_violations, report.enabled_pre_hits);
  run_side(spec.disabled, report.disabled_violations,
           report.disabled_pre_hits);

  std::size_t enabled_total = 0, disabled_total = 0;
  for (auto v : report.enabled_violations) enabled_total += v;
  for (auto v : report.disabled_violations) disabled_total += v;

  if (disabled_total == 0 && report.disabled_pre_hits == 0)
    report.outcome = ToggleOutcome::Inconclusive;
  else if (enabled_total == 0 && disabled_total >= 1)
    report.outcome = ToggleOutcome::Pass;
  else
    report.outcome = ToggleOutcome::Fail;
  return report;
}

}  // namespace casim::vomas
