#include "casim/models/wildfire.hpp"

#include <algorithm>
#include <cmath>

namespace casim::models {

using engine::Vec2;
using engine::World;

namespace {
constexpr const char* kTree = "tree";
constexpr const char* kState = "state";
constexpr const char* kTic = "tic";
constexpr const char* kTemperature = "temperature";  // weather, deg C
constexpr const char* kHumidity = "humidity";        // percent
constexpr const char* kHeat = "heat";                // fire heating, decays
constexpr const char* kRainAccum = "rain-accum";     // mm since last FWI day

constexpr double kBurnHeat = 200.0;
constexpr double kHeatDecay = 0.5;
// Readings are disk means, so one burning cell shifts them by only a few
// degrees; jitter means stay within ~0.5 of ambient.
constexpr double kDetectionDelta = 2.0;
}  // namespace

void FireParams::validate() const {
  if (p_cov < 0 || p_cov > 100) throw ConfigError("wildfire: p-cov in [0,100]");
  if (p_fire < 0 || p_fire > 100)
    throw ConfigError("wildfire: p-fire in [0,100]");
  if (intensity < 1) throw ConfigError("wildfire: intensity must be >= 1");
  if (spread_rate < 0 || spread_rate > 1)
    throw ConfigError("wildfire: spread-rate in [0,1]");
  if (regrowth_rate < 0 || regrowth_rate > 1)
    throw ConfigError("wildfire: regrowth-rate in [0,1]");
  if (regrowth_period < 1)
    throw ConfigError("wildfire: regrowth-period must be >= 1");
  if (h_ave < 0 || h_ave > 100) throw ConfigError("wildfire: h-ave in [0,100]");
  if (month < 1 || month > 12) throw ConfigError("wildfire: month in 1..12");
  if (n_sensors < 0) throw ConfigError("wildfire: n-sensors must be >= 0");
  if (n_sensors > 0) {
    if (!(rho > 0) || rho > 1) throw ConfigError("wildfire: rho in (0,1]");
    if (p_link < 0 || p_link > 1)
      throw ConfigError("wildfire: p-link in [0,1]");
    if (r_comm <= 0 || r_sens <= 0)
      throw ConfigError("wildfire: radii must be > 0");
    if (fwi_period < 1) throw ConfigError("wildfire: fwi-period must be >= 1");
  }
  for (const auto& ev : weather)
    if (ev.magnitude < 0) throw ConfigError("wildfire: event magnitude < 0");
}

double spot_fwi(const World& w, int x, int y, const FireParams& p) {
  const int idx = w.patch_index(x, y);
  fwi::FwiInputs in;
  in.temperature = w.layer(kTemperature)[static_cast<std::size_t>(idx)];
  in.humidity =
      std::clamp(w.layer(kHumidity)[static_cast<std::size_t>(idx)], 0.0, 100.0);
  in.wind = p.wind_speed;
  in.rain = w.has_layer(kRainAccum)
                ? w.layer(kRainAccum)[static_cast<std::size_t>(idx)]
                : 0.0;
  in.month = p.month;
  return fwi::update(fwi::FwiState{}, in).fwi;
}

Wildfire::Wildfire(const FireParams& params, int width, int height,
                   std::uint64_t seed)
    : params_(params), world_(width, height, seed, /*wrap=*/false) {
  params_.validate();
  create_forest();
  if (params_.n_sensors > 0) attach_sensors();
  publish();
}

void Wildfire::create_forest() {
  Rng& rng = world_.rng();
  auto& tree = world_.layer(kTree);
  auto& temp = world_.layer(kTemperature);
  auto& hum = world_.layer(kHumidity);
  world_.layer(kState);
  world_.layer(kTic);
  world_.layer(kHeat);
  world_.layer(kRainAccum);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    tree[i] = rng.uniform(0.0, 100.0) < params_.p_cov ? 1.0 : 0.0;
    temp[i] = params_.t_ave +
              rng.uniform(-params_.weather_jitter, params_.weather_jitter);
    hum[i] = std::clamp(params_.h_ave + rng.uniform(-params_.weather_jitter,
                                                    params_.weather_jitter),
                        0.0, 100.0);
  }
}

void Wildfire::attach_sensors() {
  Rng& rng = world_.rng();
  SensorOverlay ov;
  std::vector<net::Point2> normalized;
  for (int i = 0; i < params_.n_sensors; ++i) {
    Vec2 p{rng.uniform(0.0, world_.width()), rng.uniform(0.0, world_.height())};
    ov.positions.push_back(p);
    normalized.push_back({p.x / params_.r_comm, p.y / params_.r_comm});
  }
  ov.graph = net::generate_qudg(normalized, params_.rho, params_.p_link, rng);
  ov.states.assign(static_cast<std::size_t>(params_.n_sensors),
                   fwi::FwiState{});
  ov.last_temp.assign(static_cast<std::size_t>(params_.n_sensors),
                      params_.t_ave);
  ov.last_humidity.assign(static_cast<std::size_t>(params_.n_sensors),
                          params_.h_ave);
  overlay_ = std::move(ov);
}

CellState Wildfire::state_at(int x, int y) const {
  return static_cast<CellState>(world_.layer(kState)[static_cast<std::size_t>(
      world_.patch_index(x, y))]);
}

bool Wildfire::tree_at(int x, int y) const {
  return world_.layer(kTree)[static_cast<std::size_t>(
             world_.patch_index(x, y))] != 0.0;
}

int Wildfire::burned_cells() const {
  const auto& state = world_.layer(kState);
  return static_cast<int>(std::count(state.begin(), state.end(),
                                     static_cast<double>(CellState::Burned)));
}

int Wildfire::tree_cells() const {
  const auto& tree = world_.layer(kTree);
  int n = 0;
  for (double t : tree) n += t != 0.0;
  return n;
}

bool Wildfire::ignition_allowed(int x, int y) const {
  if (!params_.fwi_gate) return true;
  return spot_fwi(world_, x, y, params_) >= 10.0;
}

void Wildfire::ignite(int x, int y) {
  const auto idx = static_cast<std::size_t>(world_.patch_index(x, y));
  world_.layer(kState)[idx] = static_cast<double>(CellState::Started);
  world_.layer(kTic)[idx] = 0.0;
}

void Wildfire::start_fire(int x, int y) {
  if (!tree_at(x, y) || state_at(x, y) != CellState::Unburned) return;
  if (ignition_allowed(x, y)) ignite(x, y);
}

void Wildfire::apply_weather() {
  Rng& rng = world_.rng();
  for (const auto& ev : params_.weather) {
    // an event at tick t lands in the step that ends at t
    if (ev.tick != world_.tick() + 1) continue;
    const int x1 = ev.x1 < 0 ? world_.width() - 1 : std::min(ev.x1, world_.width() - 1);
    const int y1 = ev.y1 < 0 ? world_.height() - 1 : std::min(ev.y1, world_.height() - 1);
    auto& hum = world_.layer(kHumidity);
    auto& temp = world_.layer(kTemperature);
    auto& rain = world_.layer(kRainAccum);
    for (int y = std::max(0, ev.y0); y <= y1; ++y) {
      for (int x = std::max(0, ev.x0); x <= x1; ++x) {
        const auto idx = static_cast<std::size_t>(world_.patch_index(x, y));
        const double amount = ev.magnitude * (0.1 + 0.9 * rng.uniform());
        hum[idx] = std::min(100.0, hum[idx] + amount);
        if (ev.kind == WeatherEvent::Kind::Rain) {
          rain[idx] += amount;
        } else {
          temp[idx] -= amount;
        }
      }
    }
  }
}

void Wildfire::step_fire() {
  Rng& rng = world_.rng();
  const int w = world_.width(), h = world_.height();
  auto& tree = world_.layer(kTree);
  auto& state = world_.layer(kState);
  auto& tic = world_.layer(kTic);
  auto& heat = world_.layer(kHeat);
  const std::vector<double> before = state;  // transitions read tick-start state

  auto at = [&](int x, int y) {
    return static_cast<std::size_t>(world_.patch_index(x, y));
  };

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto idx = at(x, y);
      switch (static_cast<CellState>(before[idx])) {
        case CellState::Started:
          state[idx] = static_cast<double>(CellState::Spreading);
          tic[idx] = 1.0;
          if (tic[idx] >= params_.intensity)
            state[idx] = static_cast<double>(CellState::Dying);
          break;
        case CellState::Spreading: {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0) continue;
              const int nx = x + dx, ny = y + dy;
              if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
              const auto nidx = at(nx, ny);
              if (tree[nidx] == 0.0) continue;
              if (static_cast<CellState>(state[nidx]) != CellState::Unburned ||
                  static_cast<CellState>(before[nidx]) != CellState::Unburned)
                continue;
              const double bearing = world_.towards(
                  {x + 0.5, y + 0.5}, {nx + 0.5, ny + 0.5});
              const double off = std::abs(
                  engine::heading_difference(bearing, params_.wind_direction));
              // 120-degree downwind cone so the diagonals take part
              double factor = 1.0;
              if (off <= 60.0)
                factor = params_.downwind_factor;
              else if (off >= 120.0)
                factor = params_.upwind_factor;
              const double p = std::min(1.0, params_.spread_rate * factor);
              if (rng.chance(p) && ignition_allowed(nx, ny)) ignite(nx, ny);
            }
          }
          tic[idx] += 1.0;
          if (tic[idx] >= params_.intensity)
            state[idx] = static_cast<double>(CellState::Dying);
          break;
        }
        case CellState::Dying:
          state[idx] = static_cast<double>(CellState::Burned);
          tree[idx] = 0.0;
          tic[idx] = 0.0;
          break;
        default:
          break;
      }
    }
  }

  // a fresh ignition may start anywhere with probability p_fire
  if (rng.uniform(0.0, 100.0) < params_.p_fire) {
    const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(w)));
    const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(h)));
    const auto idx = at(x, y);
    if (tree[idx] != 0.0 &&
        static_cast<CellState>(state[idx]) == CellState::Unburned &&
        ignition_allowed(x, y))
      ignite(x, y);
  }

  // burning cells run hot; heat relaxes back toward ambient afterwards
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto s = static_cast<CellState>(state[i]);
    if (s == CellState::Started || s == CellState::Spreading ||
        s == CellState::Dying)
      heat[i] = kBurnHeat;
    else
      heat[i] *= kHeatDecay;
  }
}

void Wildfire::step_regrowth() {
  if (params_.regrowth_rate <= 0.0) return;
  // fires during step t take the world from tick t to t+1
  if ((world_.tick() + 1) % params_.regrowth_period != 0) return;
  Rng& rng = world_.rng();
  auto& tree = world_.layer(kTree);
  auto& state = world_.layer(kState);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (tree[i] != 0.0) continue;
    const auto s = static_cast<CellState>(state[i]);
    if (s != CellState::Unburned && s != CellState::Burned) continue;
    if (rng.chance(params_.regrowth_rate)) {
      tree[i] = 1.0;
      state[i] = static_cast<double>(CellState::Unburned);
    }
  }
}

void Wildfire::sensor_sample() {
  if (!overlay_) return;
  auto& ov = *overlay_;
  const auto& temp = world_.layer(kTemperature);
  const auto& hum = world_.layer(kHumidity);
  const auto& heat = world_.layer(kHeat);
  auto& rain = world_.layer(kRainAccum);
  const bool fwi_day =
      world_.tick() > 0 && world_.tick() % params_.fwi_period == 0;

  for (std::size_t s = 0; s < ov.positions.size(); ++s) {
    const Vec2 pos = ov.positions[s];
    const int x0 = std::max(0, static_cast<int>(pos.x - params_.r_sens));
    const int x1 = std::min(world_.width() - 1,
                            static_cast<int>(pos.x + params_.r_sens));
    const int y0 = std::max(0, static_cast<int>(pos.y - params_.r_sens));
    const int y1 = std::min(world_.height() - 1,
                            static_cast<int>(pos.y + params_.r_sens));
    double t_sum = 0.0, h_sum = 0.0, r_sum = 0.0;
    int cells = 0;
    const double r2 = params_.r_sens * params_.r_sens;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x + 0.5 - pos.x, dy = y + 0.5 - pos.y;
        if (dx * dx + dy * dy > r2) continue;
        const auto idx = static_cast<std::size_t>(world_.patch_index(x, y));
        t_sum += temp[idx] + heat[idx];
        h_sum += hum[idx];
        r_sum += rain[idx];
        ++cells;
      }
    }
    if (cells == 0) continue;
    ov.last_temp[s] = t_sum / cells;
    ov.last_humidity[s] = std::clamp(h_sum / cells, 0.0, 100.0);
    if (first_detection_tick_ < 0 &&
        ov.last_temp[s] >= params_.t_ave + kDetectionDelta)
      first_detection_tick_ = world_.tick();
    if (fwi_day) {
      fwi::FwiInputs in;
      in.temperature = ov.last_temp[s];
      in.humidity = ov.last_humidity[s];
      in.wind = params_.wind_speed;
      in.rain = r_sum / cells;
      in.month = params_.month;
      ov.states[s] = fwi::update(ov.states[s], in);
    }
  }
  if (fwi_day) std::fill(rain.begin(), rain.end(), 0.0);
}

void Wildfire::publish() {
  world_.set_global("burned_area", burned_cells());
  world_.set_global("tree_cells", tree_cells());
  double max_fwi = 0.0;
  if (overlay_)
    for (const auto& st : overlay_->states) max_fwi = std::max(max_fwi, st.fwi);
  world_.set_global("max_detected_fwi", max_fwi);
  world_.set_global("first_detection_tick",
                    static_cast<double>(first_detection_tick_));
}

void Wildfire::step() {
  const engine::World::Behavior behaviors[] = {
      [this](World&) { apply_weather(); },
      [this](World&) { step_fire(); },
      [this](World&) { step_regrowth(); },
      [this](World&) { sensor_sample(); },
      [this](World&) { publish(); },
  };
  world_.step(behaviors);
}

double Wildfire::report(const std::string& name) {
  return world_.global(name);
}

FireParams fire_params_from(const engine::ParamMap& params,
                            std::vector<WeatherEvent> weather) {
  FireParams p;
  auto get = [&](const char* key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  p.p_cov = get("p-cov", p.p_cov);
  p.p_fire = get("p-fire", p.p_fire);
  p.intensity = static_cast<int>(get("intensity", p.intensity));
  p.wind_direction = get("wind-direction", p.wind_direction);
  p.wind_speed = get("wind-speed", p.wind_speed);
  p.spread_rate = get("spread-rate", p.spread_rate);
  p.downwind_factor = get("downwind-factor", p.downwind_factor);
  p.upwind_factor = get("upwind-factor", p.upwind_factor);
  p.regrowth_rate = get("regrowth-rate", p.regrowth_rate);
  p.regrowth_period = static_cast<int>(get("regrowth-period", p.regrowth_period));
  p.t_ave = get("t-ave", p.t_ave);
  p.h_ave = get("h-ave", p.h_ave);
  p.weather_jitter = get("jitter", p.weather_jitter);
  p.month = static_cast<int>(get("month", p.month));
  p.fwi_gate = get("fwi-gate", 0.0) != 0.0;
  p.n_sensors = static_cast<int>(get("n-sensors", p.n_sensors));
  p.rho = get("rho", p.rho);
  p.p_link = get("p-link", p.p_link);
  p.r_comm = get("r-comm", p.r_comm);
  p.r_sens = get("r-sens", p.r_sens);
  p.fwi_period = static_cast<int>(get("fwi-period", p.fwi_period));
  p.weather = std::move(weather);
  return p;
}

std::unique_ptr<engine::ModelInstance> make_wildfire(
    const engine::ParamMap& params, int width, int height, std::uint64_t seed,
    std::vector<WeatherEvent> weather) {
  return std::make_unique<Wildfire>(
      fire_params_from(params, std::move(weather)), width, height, seed);
}

vomas::Invariant fire_danger_invariant(const FireParams& params,
                                       int sample_cap) {
  vomas::Invariant inv;
  inv.name = "fire-danger";
  inv.sample_cap = sample_cap;
  inv.contexts = [](const engine::World& w) {
    std::vector<vomas::Context> out;
    const auto& state = w.layer(kState);
    for (int y = 0; y < w.height(); ++y) {
      for (int x = 0; x < w.width(); ++x) {
        const auto idx = static_cast<std::size_t>(w.patch_index(x, y));
        const auto s = static_cast<CellState>(state[idx]);
        if (s == CellState::Started || s == CellState::Spreading ||
            s == CellState::Dying) {
          vomas::Context ctx;
          ctx.x = x;
          ctx.y = y;
          out.push_back(ctx);
        }
      }
    }
    return out;
  };
  inv.pre = [](const engine::World& w, const vomas::Context& ctx) {
    const auto idx = static_cast<std::size_t>(w.patch_index(ctx.x, ctx.y));
    const auto s = static_cast<CellState>(w.layer(kState)[idx]);
    return s == CellState::Started || s == CellState::Spreading ||
           s == CellState::Dying;
  };
  inv.post = [params](const engine::World& w, const vomas::Context& ctx) {
    return fwi::classify_danger(spot_fwi(w, ctx.x, ctx.y, params)) >=
           fwi::Danger::High;
  };
  inv.snapshot = [params](const engine::World& w, const vomas::Context& ctx) {
    return "fwi=" + std::to_string(spot_fwi(w, ctx.x, ctx.y, params));
  };
  return inv;
}

}  // namespace casim::models
