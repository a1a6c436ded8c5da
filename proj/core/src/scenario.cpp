#include "covanet/scenario.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace covanet {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double toDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

long toLong(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

bool toBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<std::uint64_t> toSeeds(const std::string& key,
                                   const std::string& value) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<std::uint64_t>(toLong(key, item)));
  }
  if (out.empty()) throw ConfigError(key + ": expected a seed list");
  return out;
}

Activation toActivation(const std::string& key, const std::string& value) {
  if (value == "relu") return Activation::Relu;
  if (value == "tanh") return Activation::Tanh;
  if (value == "sigmoid") return Activation::Sigmoid;
  throw ConfigError(key + ": expected relu|tanh|sigmoid, got '" + value + "'");
}

OptimizerKind toOptimizer(const std::string& key, const std::string& value) {
  if (value == "sgd") return OptimizerKind::Sgd;
  if (value == "adam") return OptimizerKind::Adam;
  throw ConfigError(key + ": expected sgd|adam, got '" + value + "'");
}

TrackShape toShape(const std::string& key, const std::string& value) {
  if (value == "circle") return TrackShape::Circle;
  if (value == "stadium") return TrackShape::Stadium;
  throw ConfigError(key + ": expected circle|stadium, got '" + value + "'");
}

struct KeyEntry {
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
  const char* defaultText;
  const char* description;
};

const std::map<std::string, KeyEntry>& keyTable() {
  static const std::map<std::string, KeyEntry> table = {
      {"vehicles.num_adv",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.numAdv = static_cast<int>(toLong(k, v));
        },
        "2", "number of learning vehicles"}},
      {"vehicles.num_ndv",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.numNdv = static_cast<int>(toLong(k, v));
        },
        "3", "number of scripted traffic vehicles"}},
      {"track.shape",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.track.shape = toShape(k, v);
        },
        "stadium", "centerline shape: circle or stadium"}},
      {"track.length_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.track.lengthM = toDouble(k, v);
        },
        "800", "total centerline length, m"}},
      {"track.width_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.track.widthM = toDouble(k, v);
        },
        "12", "constant track width, m"}},
      {"track.straight_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.track.straightM = toDouble(k, v);
        },
        "150", "stadium straight length, m"}},
      {"dyn.dt_s",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.dynamics.dt = toDouble(k, v);
        },
        "0.1", "integration step, s"}},
      {"dyn.accel_gain",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.dynamics.accelGain = toDouble(k, v);
        },
        "3", "full-throttle acceleration, m/s^2"}},
      {"dyn.brake_gain",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.dynamics.brakeGain = toDouble(k, v);
        },
        "8", "full-brake deceleration, m/s^2"}},
      {"dyn.drag",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.dynamics.dragCoeff = toDouble(k, v);
        },
        "0.0005", "quadratic drag coefficient, 1/m"}},
      {"dyn.wheelbase_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.dynamics.wheelbase = toDouble(k, v);
        },
        "2.6", "wheelbase, m"}},
      {"dyn.max_steer_rad",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.dynamics.maxWheelAngle = toDouble(k, v);
        },
        "0.366519", "wheel angle at full steering, rad"}},
      {"dyn.footprint_radius_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.dynamics.footprintRadius = toDouble(k, v);
        },
        "2", "collision circle radius, m"}},
      {"grid.start_s_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.grid.startS = toDouble(k, v);
        },
        "5", "arclength of the first grid slot, m"}},
      {"grid.spacing_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.grid.spacing = toDouble(k, v);
        },
        "25", "same-lane grid spacing, m"}},
      {"grid.lane_offset_frac",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.grid.laneOffsetFrac = toDouble(k, v);
        },
        "0.5", "lane offset as a fraction of the half width"}},
      {"grid.speed_min_kmh",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.grid.speedMinKmh = toDouble(k, v);
        },
        "40", "minimum initial speed, km/h"}},
      {"grid.speed_max_kmh",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.grid.speedMaxKmh = toDouble(k, v);
        },
        "60", "maximum initial speed, km/h"}},
      {"term.max_steps",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.termination.maxSteps = static_cast<int>(toLong(k, v));
        },
        "1000", "episode step cap T"}},
      {"term.reversal_steps",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.termination.reversalSteps = static_cast<int>(toLong(k, v));
        },
        "10", "consecutive reversed-heading steps before termination"}},
      {"term.offtrack_grace",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.termination.offTrackGrace = static_cast<int>(toLong(k, v));
        },
        "50", "off-track steps tolerated before termination"}},
      {"run.episodes",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.episodes = static_cast<int>(toLong(k, v));
        },
        "300", "episodes per seed (M)"}},
      {"run.seeds",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.seeds = toSeeds(k, v);
        },
        "1,2,3,4,5", "comma-separated seed list"}},
      {"vanet.radius_m",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.vanet.radius = toDouble(k, v);
        },
        "200", "network join radius, m (at most the 200 m sensing range)"}},
      {"vanet.budget",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.vanetBudget = toDouble(k, v);
        },
        "1e9", "resource units per agent at each episode start"}},
      {"vanet.topology_dump",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.topologyDump = toBool(k, v);
        },
        "false", "write per-step topology edges to topology.csv"}},
      {"reward.w_collision",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.wCollision = toDouble(k, v);
        },
        "0.6", "collision term weight"}},
      {"reward.w_time",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.wTime = toDouble(k, v);
        },
        "0.2", "time term weight"}},
      {"reward.w_onroad",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.wOnRoad = toDouble(k, v);
        },
        "0.2", "on-road term weight"}},
      {"reward.w_penalty",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.wPenalty = toDouble(k, v);
        },
        "1000", "penalty/reward value per meter"}},
      {"reward.t_sense_s",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.tSense = toDouble(k, v);
        },
        "0.5", "emergency detection delay, s"}},
      {"reward.a_cur",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.aCur = toDouble(k, v);
        },
        "3", "current deceleration magnitude, m/s^2"}},
      {"reward.a_max",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.aMax = toDouble(k, v);
        },
        "6", "maximum deceleration magnitude, m/s^2"}},
      {"reward.o_sign_trackpos",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.oSignTrackPos = toDouble(k, v);
        },
        "1", "sign multiplier of the v*|trackPos| piece"}},
      {"reward.o_sign_transverse",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.oSignTransverse = toDouble(k, v);
        },
        "1", "sign multiplier of the |v sin(angle)| piece"}},
      {"reward.o_sign_longitudinal",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.reward.oSignLongitudinal = toDouble(k, v);
        },
        "-1", "sign multiplier of the v cos(angle) piece"}},
      {"train.gamma",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.gamma = toDouble(k, v);
        },
        "0.99", "discount factor"}},
      {"train.tau",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.tau = toDouble(k, v);
        },
        "0.001", "target soft-update rate"}},
      {"train.actor_lr",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.actorLr = toDouble(k, v);
        },
        "1e-4", "actor learning rate"}},
      {"train.critic_lr",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.criticLr = toDouble(k, v);
        },
        "1e-4", "critic learning rate"}},
      {"train.batch_size",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.batchSize = static_cast<int>(toLong(k, v));
        },
        "32", "minibatch size"}},
      {"train.buffer_capacity",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.bufferCapacity = static_cast<std::size_t>(toLong(k, v));
        },
        "100000", "replay buffer capacity"}},
      {"train.hidden1",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.hidden1 = static_cast<int>(toLong(k, v));
        },
        "300", "first hidden layer width"}},
      {"train.hidden2",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.hidden2 = static_cast<int>(toLong(k, v));
        },
        "400", "second hidden layer width"}},
      {"train.hidden_activation",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.hiddenActivation = toActivation(k, v);
        },
        "relu", "hidden activation: relu|tanh|sigmoid"}},
      {"train.optimizer",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.optimizer = toOptimizer(k, v);
        },
        "sgd", "optimizer: sgd|adam"}},
      {"train.ou_theta",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.ouTheta = toDouble(k, v);
        },
        "0.15", "exploration noise mean reversion"}},
      {"train.ou_sigma",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.ouSigma = toDouble(k, v);
        },
        "0.2", "initial exploration noise scale"}},
      {"train.ou_sigma_final",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.ouSigmaFinal = toDouble(k, v);
        },
        "0.05", "noise scale reached in the final episode"}},
      {"train.reward_scale",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.rewardScale = toDouble(k, v);
        },
        "1", "scale on rewards entering the replay buffer"}},
      {"train.update_every",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.training.updateEvery = static_cast<int>(toLong(k, v));
        },
        "1", "gradient update cadence in steps"}},
      {"dist.trigger_step",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.distribution.triggerStep = static_cast<int>(toLong(k, v));
        },
        "100", "steps between parameter exchanges"}},
      {"dist.budget_threshold",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.distribution.budgetThreshold = toDouble(k, v);
        },
        "1", "followers below this budget wait instead of learning"}},
      {"dist.enabled",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.distribution.enabled = toBool(k, v);
        },
        "true", "enable cooperative parameter distribution"}},
      {"dist.forwarding",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.distribution.forwarding = toBool(k, v);
        },
        "true", "followers counter-offer superior parameters"}},
      {"ndv.steer_trackpos_gain",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.ndv.steerTrackPosGain = toDouble(k, v);
        },
        "0.4", "scripted steering gain on trackPos"}},
      {"ndv.steer_angle_gain",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.ndv.steerAngleGain = toDouble(k, v);
        },
        "1.2", "scripted steering gain on angle"}},
      {"ndv.speed_gain",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.ndv.speedGain = toDouble(k, v);
        },
        "0.1", "scripted pedal gain per km/h of speed error"}},
      {"ndv.target_speed_min_kmh",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.ndv.targetSpeedMinKmh = toDouble(k, v);
        },
        "40", "lower bound of scripted cruise targets"}},
      {"ndv.target_speed_max_kmh",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          c.ndv.targetSpeedMaxKmh = toDouble(k, v);
        },
        "60", "upper bound of scripted cruise targets"}},
  };
  return table;
}

}  // namespace

Track TrackConfig::build() const {
  switch (shape) {
    case TrackShape::Circle:
      return Track::circle(lengthM, widthM);
    case TrackShape::Stadium:
      return Track::stadiumWithLength(lengthM, straightM, widthM);
  }
  throw ConfigError("unknown track shape");
}

void ScenarioConfig::validate(bool trainingRun) const {
  if (numAdv < 0 || numNdv < 0) throw ConfigError("vehicle counts must be nonnegative");
  if (trainingRun && numAdv < 1) {
    throw ConfigError("training runs need at least one learning vehicle");
  }
  if (episodes < 0) throw ConfigError("episodes must be nonnegative");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (termination.maxSteps < 1) throw ConfigError("term.max_steps must be >= 1");
  if (grid.speedMinKmh > grid.speedMaxKmh) {
    throw ConfigError("grid speed range is inverted");
  }
  if (ndv.targetSpeedMinKmh > ndv.targetSpeedMaxKmh) {
    throw ConfigError("scripted target speed range is inverted");
  }
  if (vanetBudget < 0.0) throw ConfigError("vanet.budget must be nonnegative");
  track.build();  // validates geometry
  reward.validate();
  training.validate();
  vanet.validate();
  distribution.validate();
}

ScenarioConfig parseScenario(std::istream& in) {
  ScenarioConfig cfg;
  const auto& table = keyTable();
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("scenario line " + std::to_string(lineNo) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError("unknown scenario key '" + key + "' (line " +
                        std::to_string(lineNo) + ")");
    }
    it->second.set(cfg, key, value);
  }
  return cfg;
}

ScenarioConfig loadScenarioFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  return parseScenario(in);
}

std::string scenarioKeyTable() {
  std::string out;
  for (const auto& [key, entry] : keyTable()) {
    out += key;
    out += '\t';
    out += entry.defaultText;
    out += '\t';
    out += entry.description;
    out += '\n';
  }
  return out;
}

}  // namespace covanet
