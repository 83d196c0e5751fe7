#include "casim/cli/presets.hpp"

#include "casim/errors.hpp"

namespace casim::cli {

namespace {

constexpr const char* kSacsExp1 = R"(# SACS varying with constant TTL
[run]
model = sacs
seed = 42

[experiment]
name = sacs-exp1
repetitions = 50
stop-tick = 100
record = run
vary sacs-radius = 0:5:20

[sacs]
gw-cost = 10
n-srchs = 100
sens-radius = 2
n-gw = 10
n-cs = 10
max-ttl = 10
k = 5
mobility = false
)";

constexpr const char* kSacsExp2 = R"(# SACS and TTL varying
[run]
model = sacs
seed = 42

[experiment]
name = sacs-exp2
repetitions = 50
stop-tick = 200
record = run
vary max-ttl = 5:5:20
vary sacs-radius = 0:5:20

[sacs]
gw-cost = 10
n-srchs = 100
sens-radius = 2
n-gw = 10
n-cs = 10
k = 5
mobility = false
)";

constexpr const char* kSacsExp3 = R"(# SACS varying with constant TTL, mobile devices
[run]
model = sacs
seed = 42

[experiment]
name = sacs-exp3
repetitions = 50
stop-tick = 100
record = run
vary sacs-radius = 0:5:20

[sacs]
gw-cost = 10
n-srchs = 100
sens-radius = 2
n-gw = 10
n-cs = 10
max-ttl = 10
k = 5
mobility = true
mobile-fraction = 0.05
)";

constexpr const char* kSacsExp4 = R"(# SACS and TTL varying, mobile devices
[run]
model = sacs
seed = 42

[experiment]
name = sacs-exp4
repetitions = 50
stop-tick = 200
record = run
vary max-ttl = 5:5:20
vary sacs-radius = 0:5:20

[sacs]
gw-cost = 10
n-srchs = 100
sens-radius = 2
n-gw = 10
n-cs = 10
k = 5
mobility = true
mobile-fraction = 0.05
)";

constexpr const char* kVarySensors = R"(# sensing vs. number of sensor nodes
[run]
model = flocksense
seed = 42

[experiment]
name = vary-sensors
repetitions = 50
stop-tick = 1000
record = tick
vary n = 100:100:1000

[flocksense]
n-boids = 50
visible? = true
max-scen? = false
)";

constexpr const char* kVaryBoids = R"(# sensing vs. number of boids
[run]
model = flocksense
seed = 42

[experiment]
name = vary-boids
repetitions = 50
stop-tick = 1000
record = tick
vary n-boids = 100:100:1000

[flocksense]
n = 1000
visible? = true
max-scen? = false
)";

constexpr const char* kWildfireCase1 = R"(# forest fire spread with regrowth and weather
[run]
model = wildfire
seed = 42

[world]
width = 100
height = 100

[experiment]
name = wildfire-case1
repetitions = 5
stop-tick = 200
record = tick

[wildfire]
p-cov = 68
p-fire = 10
intensity = 5
wind-direction = 90
spread-rate = 0.35
regrowth-rate = 0.005
regrowth-period = 50
t-ave = 30
h-ave = 20
month = 7
event = 120 rain 0 0 49 99 6
event = 160 snow 50 0 99 99 4

[vomas]
invariants = fire-danger
)";

constexpr const char* kWildfireCase2 = R"(# forest fire monitored by a QUDG sensor network
[run]
model = wildfire
seed = 42

[world]
width = 100
height = 100

[experiment]
name = wildfire-case2
repetitions = 5
stop-tick = 200
record = tick

[wildfire]
p-cov = 68
p-fire = 10
intensity = 5
wind-direction = 90
spread-rate = 0.35
regrowth-rate = 0.005
regrowth-period = 50
t-ave = 30
h-ave = 20
month = 7
n-sensors = 200
rho = 0.6
p-link = 0.5
r-comm = 20
r-sens = 5
fwi-period = 50
)";

constexpr const char* kScholars = R"(# random researcher population with citation accrual
[run]
model = scholars
seed = 42

[experiment]
name = scholars-random
repetitions = 1
stop-tick = 100
record = tick

[scholars]
n-res = 60
max-init-papers = 10
rate = 0.2
)";

}  // namespace

std::vector<std::string> preset_names() {
  return {"sacs-exp1",  "sacs-exp2",     "sacs-exp3",
          "sacs-exp4",  "vary-sensors",  "vary-boids",
          "wildfire-case1", "wildfire-case2", "scholars-random"};
}

std::string preset_text(const std::string& name) {
  if (name == "sacs-exp1") return kSacsExp1;
  if (name == "sacs-exp2") return kSacsExp2;
  if (name == "sacs-exp3") return kSacsExp3;
  if (name == "sacs-exp4") return kSacsExp4;
  if (name == "vary-sensors") return kVarySensors;
  if (name == "vary-boids") return kVaryBoids;
  if (name == "wildfire-case1") return kWildfireCase1;
  if (name == "wildfire-case2") return kWildfireCase2;
  if (name == "scholars-random") return kScholars;
  throw ConfigError("unknown preset: " + name);
}

}  // namespace casim::cli
