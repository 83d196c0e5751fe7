#include "casim/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace casim::cli {

namespace {

const std::map<std::string, double> kSacsParams = {
    {"device-probability", 100.0}, {"n-gw", 10},  {"n-cs", 10},
    {"n-srchs", 100},              {"k", 5},      {"max-ttl", 10},
    {"sacs-radius", 5},            {"sens-radius", 2.0},
    {"gw-cost", 10.0},             {"mobility", 0.0},
    {"mobile-fraction", 0.05}};

const std::map<std::string, double> kFlockParams = {
    {"n", 1000},          {"n-boids", 50},          {"visible?", 1.0},
    {"max-scen?", 0.0},   {"vision", 3.0},          {"min-separation", 1.0},
    {"max-align-turn", 5.0}, {"max-cohere-turn", 3.0},
    {"max-separate-turn", 1.5}, {"sensing-radius", 1.0}, {"death-rate", 0.0}};

const std::map<std::string, double> kWildfireParams = {
    {"p-cov", 68.0},       {"p-fire", 10.0},      {"intensity", 5},
    {"wind-direction", 0.0}, {"wind-speed", 15.0}, {"spread-rate", 0.35},
    {"downwind-factor", 2.0}, {"upwind-factor", 0.5}, {"regrowth-rate", 0.0},
    {"regrowth-period", 100}, {"t-ave", 25.0},     {"h-ave", 30.0},
    {"jitter", 2.0},       {"month", 7},          {"fwi-gate", 0.0},
    {"n-sensors", 0},      {"rho", 0.6},          {"p-link", 0.5},
    {"r-comm", 20.0},      {"r-sens", 5.0},       {"fwi-period", 50}};

const std::map<std::string, double> kScholarParams = {
    {"n-res", 60}, {"max-init-papers", 10}, {"rate", 0.2}};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, double& out) {
  if (v == "true" || v == "yes" || v == "on") {
    out = 1.0;
    return true;
  }
  if (v == "false" || v == "no" || v == "off") {
    out = 0.0;
    return true;
  }
  return false;
}

double parse_number(const std::string& v, int lineno) {
  double boolean;
  if (parse_bool(v, boolean)) return boolean;
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + v + "'", lineno);
  }
}

std::vector<double> parse_values(const std::string& v, int lineno) {
  // start:increment:final range, comma list, or single constant
  if (v.find(':') != std::string::npos) {
    std::stringstream ss(v);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
        !std::getline(ss, c) || c.find(':') != std::string::npos)
      throw ParseError("range must be start:increment:final", lineno);
    const double start = parse_number(trim(a), lineno);
    const double inc = parse_number(trim(b), lineno);
    const double final_v = parse_number(trim(c), lineno);
    if (inc <= 0 || final_v < start)
      throw ParseError("range must increase", lineno);
    std::vector<double> out;
    for (double x = start; x <= final_v + 1e-9; x += inc) out.push_back(x);
    return out;
  }
  if (v.find(',') != std::string::npos) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
      out.push_back(parse_number(trim(item), lineno));
    return out;
  }
  return {parse_number(v, lineno)};
}

models::WeatherEvent parse_event(const std::string& v, int lineno) {
  std::stringstream ss(v);
  models::WeatherEvent ev;
  std::string kind;
  long long tick;
  if (!(ss >> tick >> kind >> ev.x0 >> ev.y0 >> ev.x1 >> ev.y1 >>
        ev.magnitude))
    throw ParseError("event must be 'tick kind x0 y0 x1 y1 magnitude'",
                     lineno);
  ev.tick = tick;
  if (kind == "rain")
    ev.kind = models::WeatherEvent::Kind::Rain;
  else if (kind == "snow")
    ev.kind = models::WeatherEvent::Kind::Snow;
  else
    throw ParseError("event kind must be rain or snow", lineno);
  std::string rest;
  if (ss >> rest) throw ParseError("trailing text after event", lineno);
  return ev;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> default_reporters(const std::string& model) {
  if (model == "sacs") return {"nsucc", "ntot", "nhop"};
  if (model == "flocksense") return {"sensed", "active_sensors"};
  if (model == "wildfire")
    return {"burned_area", "max_detected_fwi", "first_detection_tick"};
  if (model == "scholars") return {"max_h", "total_citations", "papers"};
  throw ConfigError("unknown model: " + model);
}

}  // namespace

const std::map<std::string, double>& model_parameter_schema(
    const std::string& model) {
  if (model == "sacs") return kSacsParams;
  if (model == "flocksense") return kFlockParams;
  if (model == "wildfire") return kWildfireParams;
  if (model == "scholars") return kScholarParams;
  throw ConfigError("unknown model: " + model);
}

std::pair<int, int> model_default_dims(const std::string& model) {
  if (model == "sacs") return {50, 50};
  if (model == "flocksense") return {35, 35};
  if (model == "wildfire") return {100, 100};
  if (model == "scholars") return {40, 40};
  throw ConfigError("unknown model: " + model);
}

std::vector<std::string> model_invariant_names(const std::string& model) {
  if (model == "sacs") return {"success-location"};
  if (model == "flocksense") return {"sensed-bound"};
  if (model == "wildfire") return {"fire-danger"};
  if (model == "scholars") return {"h-consistency"};
  throw ConfigError("unknown model: " + model);
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool model_seen = false;
  std::vector<std::tuple<std::string, std::string, int>> vary_pending;
  std::vector<std::tuple<std::string, std::string, std::string, int>>
      pending;  // (section, key, value, line)

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "world" && section != "experiment" &&
          section != "vomas" && section != "sacs" &&
          section != "flocksense" && section != "wildfire" &&
          section != "scholars")
        throw ParseError("unknown section [" + section + "]", lineno);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", lineno);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError("expected 'key = value'", lineno);
    if (section.empty())
      throw ParseError("key '" + key + "' outside any section", lineno);

    if (section == "run") {
      if (key == "model") {
        c.model = value;
        model_seen = true;
        model_parameter_schema(value);  // validates the name
      } else if (key == "seed") {
        try {
          c.seed = std::stoull(value);
        } catch (const std::exception&) {
          throw ParseError("seed must be a 64-bit unsigned integer", lineno);
        }
      } else if (key == "jobs") {
        c.jobs = static_cast<int>(parse_number(value, lineno));
        if (c.jobs < 1) throw ParseError("jobs must be >= 1", lineno);
      } else if (key == "out") {
        c.out_dir = value;
      } else if (key == "summarize") {
        double b;
        if (!parse_bool(value, b))
          throw ParseError("summarize must be true/false", lineno);
        c.summarize = b != 0.0;
      } else {
        throw ParseError("unknown key '" + key + "' in [run]", lineno);
      }
    } else if (section == "world") {
      if (key == "width")
        c.width = static_cast<int>(parse_number(value, lineno));
      else if (key == "height")
        c.height = static_cast<int>(parse_number(value, lineno));
      else
        throw ParseError("unknown key '" + key + "' in [world]", lineno);
    } else if (section == "experiment") {
      if (key == "name") {
        c.experiment.name = value;
      } else if (key == "repetitions") {
        c.experiment.repetitions =
            static_cast<int>(parse_number(value, lineno));
      } else if (key == "stop-tick") {
        c.experiment.stop_tick =
            static_cast<std::int64_t>(parse_number(value, lineno));
      } else if (key == "record") {
        if (value == "tick")
          c.experiment.record = engine::RecordMode::EveryTick;
        else if (value == "run")
          c.experiment.record = engine::RecordMode::EndOfRun;
        else
          throw ParseError("record must be tick or run", lineno);
      } else if (key.rfind("vary ", 0) == 0) {
        vary_pending.emplace_back(trim(key.substr(5)), value, lineno);
      } else {
        throw ParseError("unknown key '" + key + "' in [experiment]", lineno);
      }
    } else if (section == "vomas") {
      if (key == "invariants")
        c.invariants = split_list(value);
      else if (key == "every")
        c.vomas_every = static_cast<int>(parse_number(value, lineno));
      else if (key == "sample-cap")
        c.vomas_sample_cap = static_cast<int>(parse_number(value, lineno));
      else
        throw ParseError("unknown key '" + key + "' in [vomas]", lineno);
    } else {
      // model parameter section; defer checks until the model is known
      pending.emplace_back(section, key, value, lineno);
    }
  }

  if (!model_seen) throw ParseError("missing required key model in [run]", 1);

  const auto& schema = model_parameter_schema(c.model);
  c.params = schema;  // defaults
  for (const auto& [sec, key, value, ln] : pending) {
    if (sec != c.model)
      throw ParseError("section [" + sec + "] does not match model '" +
                           c.model + "'",
                       ln);
    if (sec == "wildfire" && key == "event") {
      c.weather.push_back(parse_event(value, ln));
      continue;
    }
    if (sec == "scholars" && key == "history") {
      c.history_csv = value;
      continue;
    }
    auto it = schema.find(key);
    if (it == schema.end())
      throw ParseError("unknown parameter '" + key + "' for model " + c.model,
                       ln);
    c.params[key] = parse_number(value, ln);
  }

  for (const auto& [name, value, ln] : vary_pending) {
    if (!schema.count(name))
      throw ParseError("vary: unknown parameter '" + name + "' for model " +
                           c.model,
                       ln);
    c.experiment.inputs.emplace_back(name, parse_values(value, ln));
  }

  for (const auto& inv : c.invariants) {
    const auto known = model_invariant_names(c.model);
    if (std::find(known.begin(), known.end(), inv) == known.end())
      throw ConfigError("unknown invariant '" + inv + "' for model " +
                        c.model);
  }

  if (c.experiment.name.empty()) c.experiment.name = c.model;
  c.experiment.reporters = default_reporters(c.model);
  c.experiment.base_seed = c.seed;
  if (c.width == 0 || c.height == 0) {
    auto [w, h] = model_default_dims(c.model);
    if (c.width == 0) c.width = w;
    if (c.height == 0) c.height = h;
  }
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[run]\n";
  os << "model = " << c.model << "\n";
  os << "seed = " << c.seed << "\n";
  os << "jobs = " << c.jobs << "\n";
  os << "out = " << c.out_dir << "\n";
  os << "summarize = " << (c.summarize ? "true" : "false") << "\n";
  os << "\n[world]\n";
  os << "width = " << c.width << "\n";
  os << "height = " << c.height << "\n";
  os << "\n[experiment]\n";
  os << "name = " << c.experiment.name << "\n";
  os << "repetitions = " << c.experiment.repetitions << "\n";
  os << "stop-tick = " << c.experiment.stop_tick << "\n";
  os << "record = "
     << (c.experiment.record == engine::RecordMode::EveryTick ? "tick" : "run")
     << "\n";
  for (const auto& [name, values] : c.experiment.inputs) {
    os << "vary " << name << " = ";
    for (std::size_t i = 0; i < values.size(); ++i)
      os << (i ? "," : "") << engine::format_number(values[i]);
    os << "\n";
  }
  os << "\n[" << c.model << "]\n";
  for (const auto& [key, value] : c.params)
    os << key << " = " << engine::format_number(value) << "\n";
  for (const auto& ev : c.weather)
    os << "event = " << ev.tick << " "
       << (ev.kind == models::WeatherEvent::Kind::Rain ? "rain" : "snow")
       << " " << ev.x0 << " " << ev.y0 << " " << ev.x1 << " " << ev.y1 << " "
       << engine::format_number(ev.magnitude) << "\n";
  if (!c.history_csv.empty()) os << "history = " << c.history_csv << "\n";
  if (!c.invariants.empty() || c.vomas_every != 1 ||
      c.vomas_sample_cap != 64) {
    os << "\n[vomas]\n";
    if (!c.invariants.empty()) {
      os << "invariants = ";
      for (std::size_t i = 0; i < c.invariants.size(); ++i)
        os << (i ? "," : "") << c.invariants[i];
      os << "\n";
    }
    os << "every = " << c.vomas_every << "\n";
    os << "sample-cap = " << c.vomas_sample_cap << "\n";
  }
  return os.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.model == b.model && a.width == b.width && a.height == b.height &&
         a.seed == b.seed && a.jobs == b.jobs && a.out_dir == b.out_dir &&
         a.summarize == b.summarize && a.params == b.params &&
         a.history_csv == b.history_csv &&
         a.experiment.name == b.experiment.name &&
         a.experiment.inputs == b.experiment.inputs &&
         a.experiment.repetitions == b.experiment.repetitions &&
         a.experiment.stop_tick == b.experiment.stop_tick &&
         a.experiment.record == b.experiment.record &&
         a.invariants == b.invariants && a.vomas_every == b.vomas_every &&
         a.vomas_sample_cap == b.vomas_sample_cap &&
         a.weather.size() == b.weather.size();
}

std::uint64_t config_hash(const RunConfig& c) {
  RunConfig stripped = c;
  stripped.invariants.clear();
  stripped.vomas_every = 1;
  stripped.vomas_sample_cap = 64;
  stripped.out_dir.clear();
  stripped.jobs = 1;
  stripped.summarize = false;
  const std::string canon = emit_config(stripped);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void apply_env_overrides(RunConfig& c,
                         const std::map<std::string, std::string>& env) {
  std::string prefix = c.model;
  std::transform(prefix.begin(), prefix.end(), prefix.begin(), ::toupper);
  prefix += "__";
  for (const auto& [name, value] : env) {
    if (name.rfind(prefix, 0) != 0) continue;
    std::string rest = name.substr(prefix.size());
    std::size_t sep = rest.find("__");
    if (sep == std::string::npos) continue;
    std::string section = rest.substr(0, sep);
    std::string key = rest.substr(sep + 2);
    std::transform(section.begin(), section.end(), section.begin(),
                   ::tolower);
    std::transform(key.begin(), key.end(), key.begin(), ::tolower);
    std::replace(key.begin(), key.end(), '_', '-');
    if (section == "run") {
      if (key == "seed") c.seed = std::stoull(value);
      if (key == "jobs") c.jobs = std::stoi(value);
    } else if (section == "experiment") {
      if (key == "repetitions") c.experiment.repetitions = std::stoi(value);
      if (key == "stop-tick") c.experiment.stop_tick = std::stoll(value);
    } else if (section == "model" || section == c.model) {
      if (c.params.count(key)) c.params[key] = parse_number(value, 0);
    }
  }
  c.experiment.base_seed = c.seed;
}

}  // namespace casim::cli
