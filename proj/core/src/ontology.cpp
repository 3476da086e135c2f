#include "avkg/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace avkg {

UnknownObstacleError::UnknownObstacleError(std::string_view id)
    : std::runtime_error("unknown obstacle id '" + std::string(id) + "'"), id_(id) {}

Catalog::Catalog(std::vector<ObstacleClass> entries) : entries_(std::move(entries)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& ob : entries_) {
    if (!seen.insert(ob.id).second) {
      throw std::invalid_argument("duplicate obstacle id '" + ob.id + "'");
    }
    const auto& d = ob.dimensions;
    if (d.length <= 0.0 || d.width <= 0.0 || d.height <= 0.0) {
      throw std::invalid_argument("non-positive dimensions for obstacle '" + ob.id + "'");
    }
  }
}

const ObstacleClass* Catalog::find(std::string_view id) const noexcept {
  for (const auto& ob : entries_) {
    if (ob.id == id) return &ob;
  }
  return nullptr;
}

const ObstacleClass& Catalog::at(std::string_view id) const {
  if (const ObstacleClass* ob = find(id)) return *ob;
  throw UnknownObstacleError(id);
}

namespace {

ObstacleClass row(const char* id, double length, double width, double height,
                  MassClass mass, MalleabilityClass malleability, PassUnderClass pass_under,
                  DensityClass density, ElasticityClass elasticity, UndersideRiskClass risk) {
  return ObstacleClass{id, {length, width, height},
                       {mass, malleability, pass_under, density, elasticity, risk}};
}

std::vector<ObstacleClass> standard_rows() {
  using enum MassClass;
  using M = MalleabilityClass;
  using P = PassUnderClass;
  using D = DensityClass;
  using E = ElasticityClass;
  using R = UndersideRiskClass;

  // Dimensions are calibrated against the baseline frontal-area gate: the
  // seven obstacles the stock autopilot swerves for all present >= 0.40 m^2,
  // the rest stay below it.
  return {
      row("construction_cone", 0.45, 0.45, 1.00, Light, M::Low, P::CanPass, D::Low, E::High, R::High),
      row("box_01", 0.60, 0.60, 0.70, Light, M::Low, P::CannotPass, D::Low, E::Low, R::Low),
      row("creased_box_02", 0.60, 0.50, 0.30, Light, M::High, P::CanPass, D::Low, E::Low, R::Low),
      row("cola_can", 0.07, 0.07, 0.12, Light, M::High, P::CanPass, D::Low, E::Low, R::Low),
      row("garbage_01", 0.40, 0.40, 0.50, Light, M::High, P::CanPass, D::Low, E::Low, R::Low),
      row("garbage_05", 0.35, 0.35, 0.45, Light, M::High, P::CanPass, D::Low, E::Low, R::Low),
      row("garbage_06", 0.30, 0.30, 0.40, Light, M::High, P::CanPass, D::Low, E::Low, R::Low),
      row("trash_can_03", 0.45, 0.45, 0.70, Light, M::Low, P::CannotPass, D::Low, E::Low, R::Low),
      row("plastic_chair", 0.55, 0.55, 0.85, Light, M::High, P::CannotPass, D::Low, E::Low, R::High),
      row("gnome", 0.25, 0.20, 0.45, Light, M::Low, P::CanPass, D::Low, E::Low, R::Low),
      row("watering_can", 0.35, 0.20, 0.40, Light, M::Low, P::CannotPass, D::Low, E::Low, R::Low),
      row("plastic_bag", 0.75, 0.65, 0.65, Light, M::High, P::CanPass, D::Low, E::Low, R::Low),
      row("shopping_bag", 0.45, 0.50, 0.85, Light, M::Low, P::CannotPass, D::Low, E::Low, R::Low),
      row("shopping_cart", 0.95, 0.60, 1.00, Light, M::Low, P::CannotPass, D::High, E::High, R::High),
      row("shopping_trolley", 0.50, 0.55, 1.00, Light, M::Low, P::CannotPass, D::Low, E::Low, R::Low),
  };
}

}  // namespace

const Catalog& catalog() {
  static const Catalog instance{standard_rows()};
  return instance;
}

std::string display_name(std::string_view obstacle_id) {
  std::string name(obstacle_id);
  std::replace(name.begin(), name.end(), '_', ' ');
  if (!name.empty()) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

int layer_rank(Layer layer) { return static_cast<int>(layer); }

std::string_view layer_name(Layer layer) {
  switch (layer) {
    case Layer::Input: return "Input";
    case Layer::Property: return "Property";
    case Layer::Risk: return "Risk";
    case Layer::Output: return "Output";
  }
  return "?";
}

std::optional<Layer> layer_from_name(std::string_view name) {
  if (name == "Input") return Layer::Input;
  if (name == "Property") return Layer::Property;
  if (name == "Risk") return Layer::Risk;
  if (name == "Output") return Layer::Output;
  return std::nullopt;
}

const KGNode* KnowledgeGraph::find_node(std::string_view id) const noexcept {
  for (const auto& n : nodes_) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const KGEdge* KnowledgeGraph::find_edge(std::string_view src, std::string_view dst) const noexcept {
  for (const auto& e : edges_) {
    if (e.src == src && e.dst == dst) return &e;
  }
  return nullptr;
}

std::size_t KnowledgeGraph::count_nodes_in_layer(Layer layer) const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [layer](const KGNode& n) { return n.layer == layer; }));
}

namespace kg_ids {

std::string obstacle_input(std::string_view obstacle_id) {
  return "in:" + std::string(obstacle_id);
}

std::string mass_node(MassClass level) {
  return level == MassClass::Heavy ? "prop:mass:heavy" : "prop:mass:light";
}

std::string malleability_node(MalleabilityClass level) {
  return level == MalleabilityClass::High ? "prop:malleability:high" : "prop:malleability:low";
}

std::string pass_under_node(PassUnderClass level) {
  return level == PassUnderClass::CanPass ? "prop:pass_under:can_pass"
                                          : "prop:pass_under:cannot_pass";
}

std::string density_node(DensityClass level) {
  return level == DensityClass::High ? "prop:density:high" : "prop:density:low";
}

std::string elasticity_node(ElasticityClass level) {
  return level == ElasticityClass::High ? "prop:elasticity:high" : "prop:elasticity:low";
}

std::string underside_risk_node(UndersideRiskClass level) {
  return level == UndersideRiskClass::High ? "prop:underside_risk:high"
                                           : "prop:underside_risk:low";
}

std::string lane_feasible_node(bool feasible) {
  return feasible ? "prop:lane_feasible:yes" : "prop:lane_feasible:no";
}

std::string impulse_node(ImpulseClass level) {
  return level == ImpulseClass::High ? "risk:impulse_high" : "risk:impulse_low";
}

}  // namespace kg_ids

KnowledgeGraph build_graph(const Catalog& catalog) {
  using namespace kg_ids;
  using namespace kg_relations;

  KnowledgeGraph g;
  auto node = [&g](std::string id, Layer layer, std::string label) {
    g.add_node({std::move(id), layer, std::move(label)});
  };
  auto edge = [&g](std::string_view src, std::string_view dst, std::string_view relation) {
    g.add_edge({std::string(src), std::string(dst), std::string(relation)});
  };

  // Input layer: one node per cataloged obstacle plus the two context inputs.
  for (const auto& ob : catalog.items()) {
    node(obstacle_input(ob.id), Layer::Input, display_name(ob.id));
  }
  node(std::string(kSizeInput), Layer::Input, "Obstacle size");
  node(std::string(kLaneFeasibleInput), Layer::Input, "Lane change feasibility");

  // Property layer: both levels of each attribute family.
  node(mass_node(MassClass::Light), Layer::Property, "Expected mass: light");
  node(mass_node(MassClass::Heavy), Layer::Property, "Expected mass: heavy");
  node(malleability_node(MalleabilityClass::High), Layer::Property, "Malleability: high");
  node(malleability_node(MalleabilityClass::Low), Layer::Property, "Malleability: low");
  node(pass_under_node(PassUnderClass::CanPass), Layer::Property, "Can pass under the car");
  node(pass_under_node(PassUnderClass::CannotPass), Layer::Property, "Cannot pass under the car");
  node(density_node(DensityClass::High), Layer::Property, "Expected density: high");
  node(density_node(DensityClass::Low), Layer::Property, "Expected density: low");
  node(elasticity_node(ElasticityClass::High), Layer::Property, "Elasticity: high");
  node(elasticity_node(ElasticityClass::Low), Layer::Property, "Elasticity: low");
  node(underside_risk_node(UndersideRiskClass::High), Layer::Property,
       "Underside/tire damage risk: high");
  node(underside_risk_node(UndersideRiskClass::Low), Layer::Property,
       "Underside/tire damage risk: low");
  node(lane_feasible_node(true), Layer::Property, "Able to change lane");
  node(lane_feasible_node(false), Layer::Property, "Unable to change lane");

  // Risk layer: derived impulse plus the two decision conditions.
  node(impulse_node(ImpulseClass::High), Layer::Risk, "Expected impulse after collision: high");
  node(impulse_node(ImpulseClass::Low), Layer::Risk, "Expected impulse after collision: low");
  node(std::string(kHazardRisk), Layer::Risk, "Obstruction hazard");
  node(std::string(kSuddenBrakeRisk), Layer::Risk, "Sudden brake condition");

  // Output layer.
  node(std::string(kLaneChangeOutput), Layer::Output, "Lane change");
  node(std::string(kSuddenBrakingOutput), Layer::Output, "Sudden braking");
  node(std::string(kDriveThroughOutput), Layer::Output, "Drive through");

  // Each obstacle asserts its stored attribute levels.
  for (const auto& ob : catalog.items()) {
    const std::string in = obstacle_input(ob.id);
    const auto& v = ob.valuation;
    edge(in, mass_node(v.mass), kHasProperty);
    edge(in, malleability_node(v.malleability), kHasProperty);
    edge(in, pass_under_node(v.pass_under), kHasProperty);
    edge(in, density_node(v.density), kHasProperty);
    edge(in, elasticity_node(v.elasticity), kHasProperty);
    edge(in, underside_risk_node(v.underside_risk), kHasProperty);
  }

  // Context inputs inform their property nodes.
  edge(kSizeInput, pass_under_node(PassUnderClass::CanPass), kInforms);
  edge(kSizeInput, pass_under_node(PassUnderClass::CannotPass), kInforms);
  edge(kLaneFeasibleInput, lane_feasible_node(true), kInforms);
  edge(kLaneFeasibleInput, lane_feasible_node(false), kInforms);

  // Impulse derivation: mass and density imply the verdict, malleability
  // cross-validates it.
  edge(mass_node(MassClass::Light), impulse_node(ImpulseClass::Low), kImplies);
  edge(mass_node(MassClass::Heavy), impulse_node(ImpulseClass::High), kImplies);
  edge(density_node(DensityClass::Low), impulse_node(ImpulseClass::Low), kImplies);
  edge(density_node(DensityClass::High), impulse_node(ImpulseClass::High), kImplies);
  edge(malleability_node(MalleabilityClass::High), impulse_node(ImpulseClass::Low), kCrossValidates);
  edge(malleability_node(MalleabilityClass::Low), impulse_node(ImpulseClass::High), kCrossValidates);

  // Hazard condition.
  edge(pass_under_node(PassUnderClass::CannotPass), kHazardRisk, kContributes);
  edge(malleability_node(MalleabilityClass::Low), kHazardRisk, kContributes);
  edge(underside_risk_node(UndersideRiskClass::High), kHazardRisk, kImplies);
  edge(impulse_node(ImpulseClass::High), kHazardRisk, kImplies);

  // Sudden-brake condition.
  edge(pass_under_node(PassUnderClass::CannotPass), kSuddenBrakeRisk, kContributes);
  edge(underside_risk_node(UndersideRiskClass::High), kSuddenBrakeRisk, kContributes);

  // Output selection.
  edge(kHazardRisk, kLaneChangeOutput, kSelects);
  edge(lane_feasible_node(true), kLaneChangeOutput, kEnables);
  edge(kSuddenBrakeRisk, kSuddenBrakingOutput, kSelects);
  edge(lane_feasible_node(false), kSuddenBrakingOutput, kEnables);
  edge(impulse_node(ImpulseClass::Low), kDriveThroughOutput, kSupports);
  edge(malleability_node(MalleabilityClass::High), kDriveThroughOutput, kSupports);
  edge(pass_under_node(PassUnderClass::CanPass), kDriveThroughOutput, kSupports);
  // A hazardous obstacle is still driven into when neither evasion nor
  // braking is selected; the graph keeps that fallback explicit.
  edge(kHazardRisk, kDriveThroughOutput, kDefaultsTo);

  return g;
}

std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateNode: return "duplicate node";
    case ViolationKind::DanglingEdge: return "dangling edge";
    case ViolationKind::SelfLoop: return "self loop";
    case ViolationKind::LayerOrder: return "layer order";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::UnreachableOutput: return "unreachable output";
  }
  return "?";
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violation_kind_name(violations[i].kind) << ": " << violations[i].detail;
  }
  return out.str();
}

ValidationReport validate_graph(const KnowledgeGraph& g) {
  ValidationReport report;
  auto violate = [&report](ViolationKind kind, std::string detail) {
    report.violations.push_back({kind, std::move(detail)});
  };

  std::unordered_map<std::string_view, const KGNode*> by_id;
  for (const auto& n : g.nodes()) {
    if (!by_id.emplace(n.id, &n).second) {
      violate(ViolationKind::DuplicateNode, "node id '" + n.id + "' declared more than once");
    }
  }

  // Adjacency over well-formed edges only; broken edges are reported and
  // excluded from the cycle / reachability passes.
  std::unordered_map<std::string_view, std::vector<std::string_view>> out_edges;
  std::unordered_map<std::string_view, std::size_t> in_degree;
  for (const auto& n : g.nodes()) {
    out_edges[n.id];
    in_degree[n.id] = 0;
  }

  for (const auto& e : g.edges()) {
    auto src = by_id.find(e.src);
    auto dst = by_id.find(e.dst);
    if (src == by_id.end() || dst == by_id.end()) {
      violate(ViolationKind::DanglingEdge,
              "edge " + e.src + " -> " + e.dst + " references an undeclared node");
      continue;
    }
    if (e.src == e.dst) {
      violate(ViolationKind::SelfLoop, "edge " + e.src + " -> " + e.dst);
      continue;
    }
    if (layer_rank(src->second->layer) > layer_rank(dst->second->layer)) {
      violate(ViolationKind::LayerOrder,
              "edge " + e.src + " (" + std::string(layer_name(src->second->layer)) + ") -> " +
                  e.dst + " (" + std::string(layer_name(dst->second->layer)) + ")");
      continue;
    }
    out_edges[e.src].push_back(e.dst);
    in_degree[e.dst] += 1;
  }

  // Kahn's algorithm; whatever cannot be peeled off sits on a cycle.
  std::deque<std::string_view> ready;
  for (const auto& [id, deg] : in_degree) {
    if (deg == 0) ready.push_back(id);
  }
  std::size_t processed = 0;
  auto degrees = in_degree;
  while (!ready.empty()) {
    auto id = ready.front();
    ready.pop_front();
    ++processed;
    for (auto next : out_edges[id]) {
      if (--degrees[next] == 0) ready.push_back(next);
    }
  }
  if (processed != in_degree.size()) {
    std::set<std::string> cyclic;
    for (const auto& [id, deg] : degrees) {
      if (deg > 0) cyclic.insert(std::string(id));
    }
    std::string detail = "nodes on a cycle:";
    for (const auto& id : cyclic) detail += " " + id;
    violate(ViolationKind::Cycle, detail);
  }

  // Every output node must be reachable from some input node.
  std::unordered_set<std::string_view> reached;
  std::deque<std::string_view> frontier;
  for (const auto& n : g.nodes()) {
    if (n.layer == Layer::Input && reached.insert(n.id).second) frontier.push_back(n.id);
  }
  while (!frontier.empty()) {
    auto id = frontier.front();
    frontier.pop_front();
    for (auto next : out_edges[id]) {
      if (reached.insert(next).second) frontier.push_back(next);
    }
  }
  for (const auto& n : g.nodes()) {
    if (n.layer == Layer::Output && !reached.contains(n.id)) {
      violate(ViolationKind::UnreachableOutput,
              "output node '" + n.id + "' unreachable from any input");
    }
  }

  return report;
}

}  // namespace avkg
