#include "avkg/reasoner.hpp"

namespace avkg {

std::string_view decision_token(Decision d) {
  switch (d) {
    case Decision::LaneChange: return "LANE_CHANGE";
    case Decision::SuddenBrake: return "SUDDEN_BRAKE";
    case Decision::Proceed: return "PROCEED";
  }
  return "?";
}

std::string_view decision_category(Decision d) {
  switch (d) {
    case Decision::LaneChange: return "Lane Change";
    case Decision::SuddenBrake: return "Sudden Braking";
    case Decision::Proceed: return "Collide/Stop";
  }
  return "?";
}

DerivedAssessment derive_impulse(const PropertyValuation& v) {
  const ImpulseClass impulse =
      (v.mass == MassClass::Heavy || v.density == DensityClass::High) ? ImpulseClass::High
                                                                      : ImpulseClass::Low;
  const bool consistent =
      (v.malleability == MalleabilityClass::High) == (impulse == ImpulseClass::Low);
  return {impulse, consistent};
}

bool assess_hazard(const PropertyValuation& v, const DerivedAssessment& d) {
  return (v.pass_under == PassUnderClass::CannotPass && v.malleability == MalleabilityClass::Low) ||
         v.underside_risk == UndersideRiskClass::High || d.impulse == ImpulseClass::High;
}

bool sudden_brake_condition(const PropertyValuation& v) {
  return v.pass_under == PassUnderClass::CannotPass &&
         v.underside_risk == UndersideRiskClass::High;
}

std::string DecisionTrace::joined_ids() const {
  std::string out;
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    if (i) out += ',';
    out += node_ids[i];
  }
  return out;
}

namespace {

void extend(DecisionTrace& trace, std::string_view relation, std::string node_id) {
  trace.relations.emplace_back(relation);
  trace.node_ids.push_back(std::move(node_id));
}

// The trace follows the rule's own evidence order, so each hop is an edge of
// the built graph.
DecisionTrace make_trace(const ObstacleClass& ob, Decision decision,
                         const DerivedAssessment& assessment) {
  using namespace kg_ids;
  using namespace kg_relations;
  const PropertyValuation& v = ob.valuation;

  DecisionTrace trace;
  trace.node_ids.push_back(obstacle_input(ob.id));

  switch (decision) {
    case Decision::LaneChange: {
      if (v.pass_under == PassUnderClass::CannotPass &&
          v.malleability == MalleabilityClass::Low) {
        extend(trace, kHasProperty, pass_under_node(PassUnderClass::CannotPass));
        extend(trace, kContributes, std::string(kHazardRisk));
      } else if (v.underside_risk == UndersideRiskClass::High) {
        extend(trace, kHasProperty, underside_risk_node(UndersideRiskClass::High));
        extend(trace, kImplies, std::string(kHazardRisk));
      } else {
        // Hazard fired on derived impulse; cite the evidence behind it.
        extend(trace, kHasProperty,
               v.mass == MassClass::Heavy ? mass_node(MassClass::Heavy)
                                          : density_node(DensityClass::High));
        extend(trace, kImplies, impulse_node(ImpulseClass::High));
        extend(trace, kImplies, std::string(kHazardRisk));
      }
      extend(trace, kSelects, std::string(kLaneChangeOutput));
      break;
    }
    case Decision::SuddenBrake: {
      extend(trace, kHasProperty, underside_risk_node(UndersideRiskClass::High));
      extend(trace, kContributes, std::string(kSuddenBrakeRisk));
      extend(trace, kSelects, std::string(kSuddenBrakingOutput));
      break;
    }
    case Decision::Proceed: {
      if (v.malleability == MalleabilityClass::High) {
        extend(trace, kHasProperty, malleability_node(MalleabilityClass::High));
        extend(trace, kSupports, std::string(kDriveThroughOutput));
      } else if (assessment.impulse == ImpulseClass::Low) {
        extend(trace, kHasProperty, mass_node(MassClass::Light));
        extend(trace, kImplies, impulse_node(ImpulseClass::Low));
        extend(trace, kSupports, std::string(kDriveThroughOutput));
      } else if (v.pass_under == PassUnderClass::CanPass) {
        extend(trace, kHasProperty, pass_under_node(PassUnderClass::CanPass));
        extend(trace, kSupports, std::string(kDriveThroughOutput));
      } else {
        // Hazardous but neither evasion nor braking applies.
        extend(trace, kHasProperty, pass_under_node(PassUnderClass::CannotPass));
        extend(trace, kContributes, std::string(kHazardRisk));
        extend(trace, kDefaultsTo, std::string(kDriveThroughOutput));
      }
      break;
    }
  }
  return trace;
}

}  // namespace

Verdict decide(const ObstacleClass& obstacle, bool lane_feasible) {
  const PropertyValuation& v = obstacle.valuation;
  const DerivedAssessment assessment = derive_impulse(v);
  const bool hazard = assess_hazard(v, assessment);
  const bool brake = sudden_brake_condition(v);

  Decision decision;
  if (lane_feasible && hazard) {
    decision = Decision::LaneChange;
  } else if (!lane_feasible && brake) {
    decision = Decision::SuddenBrake;
  } else {
    decision = Decision::Proceed;
  }

  return {decision, make_trace(obstacle, decision, assessment), assessment};
}

Verdict decide(const Catalog& catalog, std::string_view obstacle_id, bool lane_feasible) {
  return decide(catalog.at(obstacle_id), lane_feasible);
}

}  // namespace avkg
