#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "casim/engine/experiment.hpp"
#include "casim/engine/world.hpp"
#include "casim/models/fwi.hpp"
#include "casim/net/graph.hpp"
#include "casim/vomas/vomas.hpp"

namespace casim::models {

enum class CellState { Unburned = 0, Started, Spreading, Dying, Burned };

struct WeatherEvent {
  std::int64_t tick = 0;
  enum class Kind { Rain, Snow } kind = Kind::Rain;
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive region
  double magnitude = 1.0;                 // mm of rain / strength of snow
};

struct FireParams {
  double p_cov = 68.0;        // percent tree coverage
  double p_fire = 10.0;       // percent chance of a new ignition per tick
  int intensity = 5;          // tic threshold before a fire starts dying
  double wind_direction = 0.0;
  double wind_speed = 15.0;   // km/h, feeds the FWI blocks
  double spread_rate = 0.35;  // crosswind neighbor ignition probability
  double downwind_factor = 2.0;
  double upwind_factor = 0.5;
  double regrowth_rate = 0.0;   // new-tree probability per eligible cell
  int regrowth_period = 100;    // ticks between regrowth sweeps
  double t_ave = 25.0;          // deg C
  double h_ave = 30.0;          // percent
  double weather_jitter = 2.0;  // per-cell +- jitter at forest creation
  int month = 7;
  bool fwi_gate = false;  // ignition allowed only where spot FWI >= 10
  std::vector<WeatherEvent> weather;
  // sensor overlay (0 sensors = no overlay)
  int n_sensors = 0;
  double rho = 0.6;
  double p_link = 0.5;
  double r_comm = 20.0;  // patch units = 1 normalized QUDG unit
  double r_sens = 5.0;
  int fwi_period = 50;   // ticks per FWI "day"
  void validate() const;
};

// Sensor overlay over the forest: QUDG topology fixed at deployment,
// periodic FWI updates from locally sensed weather.
struct SensorOverlay {
  std::vector<engine::Vec2> positions;
  net::Graph graph;
  std::vector<fwi::FwiState> states;
  std::vector<double> last_temp;
  std::vector<double> last_humidity;
};

// FWI of a cell's current weather, evaluated from standard start-up codes.
// This is the "spot" reading the ignition gate and validation agents share.
double spot_fwi(const engine::World& w, int x, int y, const FireParams& p);

class Wildfire : public engine::ModelInstance {
 public:
  Wildfire(const FireParams& params, int width, int height,
           std::uint64_t seed);

  engine::World& world() override { return world_; }
  void step() override;
  double report(const std::string& name) override;

  const FireParams& params() const { return params_; }
  const SensorOverlay* overlay() const {
    return overlay_ ? &*overlay_ : nullptr;
  }

  CellState state_at(int x, int y) const;
  bool tree_at(int x, int y) const;
  int burned_cells() const;
  int tree_cells() const;

  // Puts a tree cell into the Started state (no-op on non-trees);
  // bypasses p_fire but not the FWI gate.
  void start_fire(int x, int y);

  // forest dynamics, one tick each
  void apply_weather();
  void step_fire();
  void step_regrowth();
  void sensor_sample();

 private:
  void create_forest();
  void attach_sensors();
  bool ignition_allowed(int x, int y) const;
  void ignite(int x, int y);
  void publish();

  FireParams params_;
  engine::World world_;
  std::optional<SensorOverlay> overlay_;
  std::int64_t first_detection_tick_ = -1;
};

FireParams fire_params_from(const engine::ParamMap& params,
                            std::vector<WeatherEvent> weather = {});

std::unique_ptr<engine::ModelInstance> make_wildfire(
    const engine::ParamMap& params, int width, int height, std::uint64_t seed,
    std::vector<WeatherEvent> weather = {});

// Case-study contract: a burning tree sits where the spot FWI classifies
// at least High. Contexts are burning cells, subsampled by the observer.
vomas::Invariant fire_danger_invariant(const FireParams& params,
                                       int sample_cap = 64);

}  // namespace casim::models
