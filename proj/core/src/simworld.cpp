#include "avkg/simworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace avkg {

ConfigError::ConfigError(const std::string& message) : std::runtime_error(message) {}

std::string_view scenario_token(ScenarioKind s) {
  return s == ScenarioKind::LaneChangeRestricted ? "restricted" : "unrestricted";
}

std::string_view controller_token(ControllerKind c) {
  return c == ControllerKind::Baseline ? "baseline" : "kg";
}

std::string_view action_token(DriveAction a) {
  switch (a) {
    case DriveAction::Continue: return "continue";
    case DriveAction::SuddenBrake: return "sudden_brake";
    case DriveAction::LaneChange: return "lane_change";
  }
  return "?";
}

std::string_view outcome_token(Outcome o) {
  switch (o) {
    case Outcome::LaneChanged: return "lane_changed";
    case Outcome::StoppedBeforeObstacle: return "stopped_before_obstacle";
    case Outcome::DroveThrough: return "drove_through";
    case Outcome::Collided: return "collided";
  }
  return "?";
}

BaselineAction baseline_controller(const ObstacleClass& obstacle, ScenarioKind scenario,
                                   double area_threshold) {
  if (scenario == ScenarioKind::LaneChangeRestricted) return BaselineAction::Continue;
  return obstacle.dimensions.frontal_area() >= area_threshold ? BaselineAction::LaneChange
                                                              : BaselineAction::Continue;
}

Verdict kg_controller(const ObstacleClass& obstacle, ScenarioKind scenario) {
  return decide(obstacle, scenario == ScenarioKind::LaneChangeUnrestricted);
}

EgoState step(const LaneWorld& world, const EgoState& ego, DriveAction action, double dt,
              double max_deceleration) {
  EgoState next = ego;
  switch (action) {
    case DriveAction::Continue:
      next.position += ego.speed * dt;
      break;
    case DriveAction::SuddenBrake:
      next.position += ego.speed * dt;
      next.speed = std::max(0.0, ego.speed - max_deceleration * dt);
      break;
    case DriveAction::LaneChange: {
      next.position += ego.speed * dt;
      const double rate = world.lane_width / kLaneChangeDuration;
      next.lateral_offset = ego.lateral_offset + rate * dt;
      if (next.lateral_offset >= world.lane_width) {
        next.lane = ego.lane > 0 ? ego.lane - 1 : ego.lane + 1;
        next.lateral_offset = 0.0;
      }
      break;
    }
  }
  return next;
}

std::string reported_category_for(Outcome outcome, std::optional<Decision> decision) {
  if (outcome == Outcome::LaneChanged) return "Lane Change";
  if (outcome == Outcome::StoppedBeforeObstacle && decision == Decision::SuddenBrake) {
    return "Sudden Braking";
  }
  return "Collide/Stop";
}

namespace {

void validate_config(const TrialConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (cfg.timestep <= 0.0) fail("timestep must be positive");
  if (cfg.initial_speed <= 0.0) fail("initial speed must be positive");
  if (cfg.max_deceleration <= 0.0) fail("max deceleration must be positive");
  if (cfg.detection_distance <= 0.0) fail("detection distance must be positive");
  if (cfg.world.lane_count != 3) fail("world must have exactly 3 lanes");
  if (cfg.world.lane_width <= 0.0) fail("lane width must be positive");
  if (cfg.world.obstacle_position <= cfg.detection_distance) {
    fail("obstacle must sit beyond the detection distance");
  }
  if (cfg.world.road_length < cfg.world.obstacle_position + 10.0) {
    fail("road must extend at least 10 m past the obstacle");
  }
  const double stopping = cfg.initial_speed * cfg.initial_speed / (2.0 * cfg.max_deceleration);
  if (stopping >= cfg.detection_distance) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "stopping distance %.3f m does not fit inside the %.3f m detection window",
                  stopping, cfg.detection_distance);
    fail(buf);
  }
}

std::string tick_line(double t, const EgoState& ego, DriveAction action) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "t=%.2f s=%.3f lane=%d v=%.3f action=%s", t, ego.position,
                ego.lane, ego.speed, std::string(action_token(action)).c_str());
  return buf;
}

DriveAction drive_action_for(Decision decision) {
  switch (decision) {
    case Decision::LaneChange: return DriveAction::LaneChange;
    case Decision::SuddenBrake: return DriveAction::SuddenBrake;
    case Decision::Proceed: return DriveAction::Continue;
  }
  return DriveAction::Continue;
}

}  // namespace

TrialResult run_trial(const Catalog& catalog, const TrialConfig& config) {
  validate_config(config);
  const ObstacleClass& obstacle = catalog.at(config.obstacle_id);
  const LaneWorld& world = config.world;

  TrialResult result;
  result.obstacle_id = config.obstacle_id;
  result.scenario = config.scenario;
  result.controller = config.controller;

  EgoState ego;
  ego.speed = config.initial_speed;
  const int initial_lane = ego.lane;
  const double horizon = world.obstacle_position + 10.0;

  bool decided = false;
  DriveAction commanded = DriveAction::Continue;

  bool crossed = false;
  int crossing_lane = initial_lane;
  double crossing_lateral = 0.0;

  double t = 0.0;
  const std::size_t tick_cap = 4'000'000;
  for (std::size_t tick = 0;; ++tick) {
    if (tick > tick_cap) throw ConfigError("trial failed to terminate");

    if (!decided && world.obstacle_position - ego.position <= config.detection_distance) {
      // Autopilot override: cruise hands control to the trial's controller,
      // exactly once, at detection.
      decided = true;
      if (config.controller == ControllerKind::Baseline) {
        BaselineAction action = baseline_controller(obstacle, config.scenario);
        commanded = action == BaselineAction::LaneChange ? DriveAction::LaneChange
                                                         : DriveAction::Continue;
      } else {
        Verdict verdict = kg_controller(obstacle, config.scenario);
        result.decision = verdict.decision;
        result.trace = verdict.trace;
        commanded = drive_action_for(verdict.decision);
      }
      result.action = commanded;
    }

    if (commanded == DriveAction::LaneChange && ego.lane != initial_lane) {
      commanded = DriveAction::Continue;  // maneuver complete, hold the new lane
    }

    result.tick_log.push_back(tick_line(t, ego, commanded));

    if (ego.speed <= 0.0) break;
    if (ego.position > horizon) break;

    EgoState next = step(world, ego, commanded, config.timestep, config.max_deceleration);
    if (!crossed && next.position >= world.obstacle_position) {
      crossed = true;
      crossing_lane = next.lane;
      crossing_lateral = std::max(std::abs(ego.lateral_offset), std::abs(next.lateral_offset));
    }
    ego = next;
    t += config.timestep;
  }

  if (ego.speed <= 0.0) {
    result.outcome = ego.position < world.obstacle_position ? Outcome::StoppedBeforeObstacle
                                                            : Outcome::Collided;
  } else if (crossing_lane != initial_lane ||
             crossing_lateral >= world.lane_width / 2.0) {
    result.outcome = Outcome::LaneChanged;
  } else if (obstacle.valuation.malleability == MalleabilityClass::High ||
             obstacle.dimensions.height <= kUnderbodyClearance) {
    // Physical pass/deform check, independent of the cataloged belief: a
    // hard object taller than the body clearance is hit, whatever the
    // ontology expected (the gnome being the canonical mismatch).
    result.outcome = Outcome::DroveThrough;
  } else {
    result.outcome = Outcome::Collided;
  }

  result.reported_category = reported_category_for(result.outcome, result.decision);
  return result;
}

}  // namespace avkg
