#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "avkg/ontology.hpp"

namespace avkg {

enum class Decision { LaneChange, SuddenBrake, Proceed };

/// Wire / CLI token: "LANE_CHANGE", "SUDDEN_BRAKE", "PROCEED".
std::string_view decision_token(Decision d);

/// Results-table label: "Lane Change", "Sudden Braking"; Proceed maps to
/// "Collide/Stop".
std::string_view decision_category(Decision d);

struct DerivedAssessment {
  ImpulseClass impulse;
  bool consistent;  // malleability signal agrees with the impulse verdict
};

/// Impulse is high iff the obstacle is heavy or dense. The malleability
/// signal cross-validates the verdict; disagreement is flagged, not fatal.
DerivedAssessment derive_impulse(const PropertyValuation& v);

/// hazard = (cannot pass under AND low malleability) OR high underside risk
///          OR high derived impulse.
bool assess_hazard(const PropertyValuation& v, const DerivedAssessment& d);

/// Emergency-stop trigger: the obstacle cannot be cleared and threatens the
/// underside or tires.
bool sudden_brake_condition(const PropertyValuation& v);

/// Path through the knowledge graph that justifies a decision. Starts at the
/// obstacle's input node, ends at the chosen output node, and every
/// consecutive pair is connected by a graph edge; relations[i] labels the
/// step from node_ids[i] to node_ids[i+1].
struct DecisionTrace {
  std::vector<std::string> node_ids;
  std::vector<std::string> relations;

  std::string joined_ids() const;  // comma-joined, wire format
};

struct Verdict {
  Decision decision;
  DecisionTrace trace;
  DerivedAssessment assessment;
};

/// Decision policy, evaluated in fixed order:
///   1. lane feasible and hazardous        -> LaneChange
///   2. lane restricted and brake trigger  -> SuddenBrake
///   3. otherwise                          -> Proceed
Verdict decide(const ObstacleClass& obstacle, bool lane_feasible);

/// Catalog-lookup variant; throws UnknownObstacleError on a miss.
Verdict decide(const Catalog& catalog, std::string_view obstacle_id, bool lane_feasible);

}  // namespace avkg
