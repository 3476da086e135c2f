#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "avkg/reasoner.hpp"

namespace avkg {

struct LaneWorld {
  int lane_count = 3;
  double lane_width = 3.5;            // meters
  double road_length = 200.0;         // meters
  double obstacle_position = 100.0;   // meters along the ego lane
};

/// Point-mass ego vehicle. lateral_offset tracks progress through a
/// lane-change maneuver; the lane index switches once a full lane width has
/// been covered.
struct EgoState {
  double position = 0.0;       // meters
  int lane = 1;                // center lane of three
  double speed = 0.0;          // m/s
  double lateral_offset = 0.0; // meters within the current maneuver
};

enum class ScenarioKind { LaneChangeRestricted, LaneChangeUnrestricted };
enum class ControllerKind { Baseline, KG };
enum class BaselineAction { Continue, LaneChange };
enum class DriveAction { Continue, SuddenBrake, LaneChange };
enum class Outcome { LaneChanged, StoppedBeforeObstacle, DroveThrough, Collided };

std::string_view scenario_token(ScenarioKind s);      // "restricted" / "unrestricted"
std::string_view controller_token(ControllerKind c);  // "baseline" / "kg"
std::string_view action_token(DriveAction a);         // "continue" / "sudden_brake" / "lane_change"
std::string_view outcome_token(Outcome o);

/// Frontal-area gate of the stock autopilot emulation, m^2. Calibrated so
/// that exactly the seven control-group lane-change obstacles exceed it.
inline constexpr double kBaselineAreaThreshold = 0.40;

/// A lane change covers one full lane width in this many seconds.
inline constexpr double kLaneChangeDuration = 2.0;

/// Tallest obstacle the vehicle body physically clears, meters. Drive-through
/// outcomes depend on this and on malleability, not on the cataloged
/// pass-under belief, which may be wrong (the gnome is the canonical case).
inline constexpr double kUnderbodyClearance = 0.20;

struct TrialConfig {
  std::string obstacle_id;
  ScenarioKind scenario = ScenarioKind::LaneChangeRestricted;
  ControllerKind controller = ControllerKind::KG;
  double initial_speed = 10.0;       // m/s
  double detection_distance = 30.0;  // meters
  double max_deceleration = 6.0;     // m/s^2
  double timestep = 0.05;            // seconds
  LaneWorld world;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message);
};

struct TrialResult {
  std::string obstacle_id;
  ScenarioKind scenario;
  ControllerKind controller;
  DriveAction action = DriveAction::Continue;  // maneuver commanded at detection
  std::optional<Decision> decision;            // KG controller only
  std::optional<DecisionTrace> trace;          // KG controller only
  Outcome outcome = Outcome::DroveThrough;
  std::string reported_category;               // "Lane Change" | "Sudden Braking" | "Collide/Stop"
  std::vector<std::string> tick_log;           // one line per tick
};

/// Stock autopilot emulation: never reacts when boxed in; otherwise changes
/// lanes for anything with frontal area >= area_threshold.
BaselineAction baseline_controller(const ObstacleClass& obstacle, ScenarioKind scenario,
                                   double area_threshold = kBaselineAreaThreshold);

/// Knowledge-graph controller: delegates to decide() with lane feasibility
/// taken from the scenario.
Verdict kg_controller(const ObstacleClass& obstacle, ScenarioKind scenario);

/// One explicit-Euler tick. Continue holds speed and heading; SuddenBrake
/// decelerates at max_deceleration until standstill; LaneChange holds speed
/// while ramping laterally, switching lanes once a full width is covered
/// (the caller holds course afterwards by commanding Continue).
EgoState step(const LaneWorld& world, const EgoState& ego, DriveAction action,
              double dt, double max_deceleration);

/// Maps a physical outcome to the results-table vocabulary.
std::string reported_category_for(Outcome outcome, std::optional<Decision> decision);

/// Runs one deterministic encounter: cruise, detect, decide once, act until
/// the ego passes the obstacle by 10 m or stops. Throws ConfigError when the
/// config cannot guarantee a stop inside the detection window, and
/// UnknownObstacleError for ids outside the catalog.
TrialResult run_trial(const Catalog& catalog, const TrialConfig& config);

}  // namespace avkg
