#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "avkg/ontology.hpp"

namespace avkg {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class InvalidGraphError : public std::runtime_error {
 public:
  explicit InvalidGraphError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class ReconstructError : public std::runtime_error {
 public:
  explicit ReconstructError(const std::string& message);
};

/// Canonical `KG v1` text form: header line, NODE lines sorted by id, EDGE
/// lines sorted by (src, dst, relation). Byte-identical for structurally
/// equal graphs regardless of construction order. Refuses graphs that fail
/// validate_graph.
std::string serialize(const KnowledgeGraph& g);

/// Parses the canonical form. Strict: nodes before edges, no blank lines,
/// a single trailing newline tolerated. Errors carry the 1-based line number.
KnowledgeGraph deserialize(std::string_view text);

/// Structural equality, defined as equality of canonical serialized bytes.
bool structurally_equal(const KnowledgeGraph& a, const KnowledgeGraph& b);

/// One partition piece of a graph. Cut edges (edges leaving the piece) are
/// recorded in full on both owning segments.
struct GraphSegment {
  std::size_t index = 0;
  std::size_t total = 1;
  std::vector<KGNode> nodes;
  std::vector<KGEdge> internal_edges;
  std::vector<KGEdge> cut_edges;
};

/// Deterministic partition: nodes in sorted-id order are packed greedily
/// into ceil(|V| / max_nodes) segments. max_nodes must be >= 1; the graph
/// must pass validate_graph.
std::vector<GraphSegment> segment(const KnowledgeGraph& g, std::size_t max_nodes);

/// Inverse of segment: union of nodes and edges with each cut edge restored
/// exactly once. Throws ReconstructError naming the defect on missing or
/// duplicate segment indices, nodes owned by two segments, or cut edges not
/// recorded on exactly their two owners.
KnowledgeGraph reconstruct(const std::vector<GraphSegment>& segments);

/// Canonical `KGSEG v1 <index> <total>` text form: NODE, EDGE (internal),
/// then CUT lines, each group sorted.
std::string serialize_segment(const GraphSegment& s);
GraphSegment deserialize_segment(std::string_view text);

}  // namespace avkg
