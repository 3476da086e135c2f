#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace avkg {

// Two-valued material attribute levels. The catalog is total: every obstacle
// carries a definite level for each stored attribute, there is no "unknown".
enum class MassClass { Light, Heavy };
enum class MalleabilityClass { High, Low };
enum class PassUnderClass { CanPass, CannotPass };
enum class DensityClass { High, Low };
enum class ElasticityClass { High, Low };
enum class UndersideRiskClass { High, Low };
enum class ImpulseClass { High, Low };

/// The six stored material attributes of an obstacle class.
struct PropertyValuation {
  MassClass mass;
  MalleabilityClass malleability;
  PassUnderClass pass_under;
  DensityClass density;
  ElasticityClass elasticity;
  UndersideRiskClass underside_risk;
};

struct Dimensions {
  double length = 0.0;  // meters
  double width = 0.0;
  double height = 0.0;

  /// Cross-section presented to an approaching vehicle.
  double frontal_area() const { return width * height; }
};

struct ObstacleClass {
  std::string id;  // canonical lowercase snake form, e.g. "plastic_chair"
  Dimensions dimensions;
  PropertyValuation valuation;
};

class UnknownObstacleError : public std::runtime_error {
 public:
  explicit UnknownObstacleError(std::string_view id);
  const std::string& obstacle_id() const { return id_; }

 private:
  std::string id_;
};

/// Immutable obstacle lookup table. Ids must be unique and dimensions
/// strictly positive; the constructor rejects anything else.
class Catalog {
 public:
  explicit Catalog(std::vector<ObstacleClass> entries);

  std::span<const ObstacleClass> items() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const ObstacleClass* find(std::string_view id) const noexcept;
  const ObstacleClass& at(std::string_view id) const;  // throws UnknownObstacleError

 private:
  std::vector<ObstacleClass> entries_;
};

/// The fixed 15-obstacle catalog, in results-table row order
/// (construction cone first, shopping trolley last).
const Catalog& catalog();

/// "construction_cone" -> "Construction cone".
std::string display_name(std::string_view obstacle_id);

// ---------------------------------------------------------------------------
// Layered knowledge graph
// ---------------------------------------------------------------------------

enum class Layer { Input, Property, Risk, Output };

int layer_rank(Layer layer);
std::string_view layer_name(Layer layer);
std::optional<Layer> layer_from_name(std::string_view name);

struct KGNode {
  std::string id;
  Layer layer;
  std::string label;
};

struct KGEdge {
  std::string src;
  std::string dst;
  std::string relation;
};

/// Directed labeled multigraph with four node layers. Construction does not
/// validate; arbitrary (including broken) graphs can be built and then
/// checked with validate_graph.
class KnowledgeGraph {
 public:
  void add_node(KGNode node) { nodes_.push_back(std::move(node)); }
  void add_edge(KGEdge edge) { edges_.push_back(std::move(edge)); }

  const std::vector<KGNode>& nodes() const { return nodes_; }
  const std::vector<KGEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const KGNode* find_node(std::string_view id) const noexcept;
  const KGEdge* find_edge(std::string_view src, std::string_view dst) const noexcept;
  std::size_t count_nodes_in_layer(Layer layer) const;

 private:
  std::vector<KGNode> nodes_;
  std::vector<KGEdge> edges_;
};

// Stable node-id vocabulary, shared by the graph builder and by the decision
// traces so that every trace is a real path in the built graph.
namespace kg_ids {

inline constexpr std::string_view kSizeInput = "in:size";
inline constexpr std::string_view kLaneFeasibleInput = "in:lane_feasible";
inline constexpr std::string_view kHazardRisk = "risk:hazard";
inline constexpr std::string_view kSuddenBrakeRisk = "risk:sudden_brake";
inline constexpr std::string_view kLaneChangeOutput = "out:lane_change";
inline constexpr std::string_view kSuddenBrakingOutput = "out:sudden_braking";
inline constexpr std::string_view kDriveThroughOutput = "out:drive_through";

std::string obstacle_input(std::string_view obstacle_id);
std::string mass_node(MassClass level);
std::string malleability_node(MalleabilityClass level);
std::string pass_under_node(PassUnderClass level);
std::string density_node(DensityClass level);
std::string elasticity_node(ElasticityClass level);
std::string underside_risk_node(UndersideRiskClass level);
std::string lane_feasible_node(bool feasible);
std::string impulse_node(ImpulseClass level);

}  // namespace kg_ids

namespace kg_relations {

inline constexpr std::string_view kHasProperty = "has_property";
inline constexpr std::string_view kInforms = "informs";
inline constexpr std::string_view kImplies = "implies";
inline constexpr std::string_view kCrossValidates = "cross_validates";
inline constexpr std::string_view kContributes = "contributes";
inline constexpr std::string_view kSelects = "selects";
inline constexpr std::string_view kEnables = "enables";
inline constexpr std::string_view kSupports = "supports";
inline constexpr std::string_view kDefaultsTo = "defaults_to";

}  // namespace kg_relations

/// Builds the layered graph for a catalog: one input node per obstacle plus
/// the size and lane-feasibility context inputs, two property nodes per
/// attribute family, risk nodes for the derived impulse and the hazard and
/// sudden-brake conditions, and the three action outputs.
KnowledgeGraph build_graph(const Catalog& catalog);

enum class ViolationKind {
  DuplicateNode,
  DanglingEdge,
  SelfLoop,
  LayerOrder,
  Cycle,
  UnreachableOutput,
};

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;  // includes offending node / edge ids
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every graph invariant: unique node ids, no dangling edges or
/// self-loops, layer ranks non-decreasing along edges, acyclicity, and each
/// output node reachable from at least one input node. Violations are data,
/// not errors.
ValidationReport validate_graph(const KnowledgeGraph& g);

}  // namespace avkg
