#include "avkg/graphio.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace avkg {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

InvalidGraphError::InvalidGraphError(ValidationReport report)
    : std::runtime_error("invalid graph: " + report.to_string()), report_(std::move(report)) {}

ReconstructError::ReconstructError(const std::string& message)
    : std::runtime_error("reconstruct: " + message) {}

namespace {

bool has_whitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

void check_token(std::string_view token, const char* what) {
  if (token.empty() || has_whitespace(token)) {
    throw std::invalid_argument(std::string(what) + " '" + std::string(token) +
                                "' is empty or contains whitespace");
  }
}

std::vector<const KGNode*> nodes_sorted(const std::vector<KGNode>& nodes) {
  std::vector<const KGNode*> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(&n);
  std::sort(out.begin(), out.end(),
            [](const KGNode* a, const KGNode* b) { return a->id < b->id; });
  return out;
}

std::vector<const KGEdge*> edges_sorted(const std::vector<KGEdge>& edges) {
  std::vector<const KGEdge*> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back(&e);
  std::sort(out.begin(), out.end(), [](const KGEdge* a, const KGEdge* b) {
    return std::tie(a->src, a->dst, a->relation) < std::tie(b->src, b->dst, b->relation);
  });
  return out;
}

void append_node_line(std::string& out, const KGNode& n) {
  check_token(n.id, "node id");
  if (n.label.find('\n') != std::string::npos) {
    throw std::invalid_argument("label of node '" + n.id + "' contains a newline");
  }
  out += "NODE ";
  out += n.id;
  out += ' ';
  out += layer_name(n.layer);
  if (!n.label.empty()) {
    out += ' ';
    out += n.label;
  }
  out += '\n';
}

void append_edge_line(std::string& out, const char* tag, const KGEdge& e) {
  check_token(e.src, "edge src");
  check_token(e.dst, "edge dst");
  if (e.relation.empty() || e.relation.find('\n') != std::string::npos) {
    throw std::invalid_argument("relation of edge " + e.src + " -> " + e.dst +
                                " is empty or contains a newline");
  }
  out += tag;
  out += ' ';
  out += e.src;
  out += ' ';
  out += e.dst;
  out += ' ';
  out += e.relation;
  out += '\n';
}

// Lines of the canonical form: no blank lines anywhere, one trailing newline
// tolerated.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      pos = text.size();
    } else {
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }
  return lines;
}

// Splits off the first space-delimited token; the remainder keeps everything
// past the single separator space.
std::pair<std::string_view, std::string_view> take_token(std::string_view s) {
  std::size_t sp = s.find(' ');
  if (sp == std::string_view::npos) return {s, {}};
  return {s.substr(0, sp), s.substr(sp + 1)};
}

struct LineParser {
  KnowledgeGraph graph;
  std::unordered_set<std::string> node_ids;
  bool saw_edge = false;

  void parse(std::string_view line, std::size_t line_no) {
    auto [tag, rest] = take_token(line);
    if (tag == "NODE") {
      parse_node(rest, line_no);
    } else if (tag == "EDGE") {
      parse_edge(rest, line_no);
    } else {
      throw ParseError(line_no, "expected NODE or EDGE, got '" + std::string(tag) + "'");
    }
  }

  void parse_node(std::string_view rest, std::size_t line_no) {
    if (saw_edge) throw ParseError(line_no, "NODE line after EDGE lines");
    auto [id, after_id] = take_token(rest);
    auto [layer_tok, label] = take_token(after_id);
    if (id.empty() || layer_tok.empty()) {
      throw ParseError(line_no, "expected NODE <id> <layer> [label]");
    }
    auto layer = layer_from_name(layer_tok);
    if (!layer) {
      throw ParseError(line_no, "unknown layer token '" + std::string(layer_tok) + "'");
    }
    if (!node_ids.insert(std::string(id)).second) {
      throw ParseError(line_no, "duplicate node id '" + std::string(id) + "'");
    }
    graph.add_node({std::string(id), *layer, std::string(label)});
  }

  void parse_edge(std::string_view rest, std::size_t line_no) {
    saw_edge = true;
    auto [src, after_src] = take_token(rest);
    auto [dst, relation] = take_token(after_src);
    if (src.empty() || dst.empty() || relation.empty()) {
      throw ParseError(line_no, "expected EDGE <src> <dst> <relation>");
    }
    if (!node_ids.contains(std::string(src))) {
      throw ParseError(line_no, "edge references unknown node '" + std::string(src) + "'");
    }
    if (!node_ids.contains(std::string(dst))) {
      throw ParseError(line_no, "edge references unknown node '" + std::string(dst) + "'");
    }
    if (src == dst) {
      throw ParseError(line_no, "self loop on node '" + std::string(src) + "'");
    }
    graph.add_edge({std::string(src), std::string(dst), std::string(relation)});
  }
};

void check_header(std::string_view line, std::string_view magic, std::size_t line_no,
                  std::string_view* tail = nullptr) {
  auto [tag, rest] = take_token(line);
  if (tag != magic) {
    throw ParseError(line_no, "expected " + std::string(magic) + " header");
  }
  auto [version, after] = take_token(rest);
  if (version != "v1") {
    throw ParseError(line_no, "unsupported version '" + std::string(version) + "'");
  }
  if (tail) {
    *tail = after;
  } else if (!after.empty()) {
    throw ParseError(line_no, "unexpected content after header");
  }
}

std::size_t parse_count(std::string_view token, std::size_t line_no, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "bad " + std::string(what) + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string serialize(const KnowledgeGraph& g) {
  ValidationReport report = validate_graph(g);
  if (!report.ok()) throw InvalidGraphError(std::move(report));

  std::string out = "KG v1\n";
  for (const KGNode* n : nodes_sorted(g.nodes())) append_node_line(out, *n);
  for (const KGEdge* e : edges_sorted(g.edges())) append_edge_line(out, "EDGE", *e);
  return out;
}

KnowledgeGraph deserialize(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty input");
  check_header(lines[0], "KG", 1);

  LineParser parser;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) throw ParseError(line_no, "blank line");
    parser.parse(lines[i], line_no);
  }
  return std::move(parser.graph);
}

bool structurally_equal(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  return serialize(a) == serialize(b);
}

std::vector<GraphSegment> segment(const KnowledgeGraph& g, std::size_t max_nodes) {
  if (max_nodes == 0) throw std::invalid_argument("max_nodes must be >= 1");
  ValidationReport report = validate_graph(g);
  if (!report.ok()) throw InvalidGraphError(std::move(report));

  auto sorted = nodes_sorted(g.nodes());
  const std::size_t total =
      sorted.empty() ? 0 : (sorted.size() + max_nodes - 1) / max_nodes;

  std::vector<GraphSegment> segments(total);
  std::unordered_map<std::string_view, std::size_t> owner;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t idx = i / max_nodes;
    segments[idx].index = idx;
    segments[idx].total = total;
    segments[idx].nodes.push_back(*sorted[i]);
    owner.emplace(sorted[i]->id, idx);
  }

  for (const auto& e : g.edges()) {
    const std::size_t src_owner = owner.at(e.src);
    const std::size_t dst_owner = owner.at(e.dst);
    if (src_owner == dst_owner) {
      segments[src_owner].internal_edges.push_back(e);
    } else {
      segments[src_owner].cut_edges.push_back(e);
      segments[dst_owner].cut_edges.push_back(e);
    }
  }
  return segments;
}

KnowledgeGraph reconstruct(const std::vector<GraphSegment>& segments) {
  KnowledgeGraph g;
  if (segments.empty()) return g;

  const std::size_t total = segments[0].total;
  std::vector<const GraphSegment*> by_index(total, nullptr);
  for (const auto& s : segments) {
    if (s.total != total) {
      throw ReconstructError("inconsistent totals: segment " + std::to_string(s.index) +
                             " claims " + std::to_string(s.total) + ", expected " +
                             std::to_string(total));
    }
    if (s.index >= total) {
      throw ReconstructError("segment index " + std::to_string(s.index) +
                             " out of range for total " + std::to_string(total));
    }
    if (by_index[s.index]) {
      throw ReconstructError("segment index " + std::to_string(s.index) + " supplied twice");
    }
    by_index[s.index] = &s;
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (!by_index[i]) {
      throw ReconstructError("missing segment index " + std::to_string(i) + " of total " +
                             std::to_string(total));
    }
  }

  std::unordered_map<std::string_view, std::size_t> owner;
  for (const GraphSegment* s : by_index) {
    for (const auto& n : s->nodes) {
      auto [it, inserted] = owner.emplace(n.id, s->index);
      if (!inserted) {
        throw ReconstructError("node '" + n.id + "' owned by segments " +
                               std::to_string(it->second) + " and " + std::to_string(s->index));
      }
      g.add_node(n);
    }
  }

  for (const GraphSegment* s : by_index) {
    for (const auto& e : s->internal_edges) g.add_edge(e);
  }

  // Each cut edge must be recorded on exactly the two segments owning its
  // endpoints, with matching multiplicity; it is restored once per matched
  // pair of records.
  using EdgeKey = std::tuple<std::string, std::string, std::string>;
  std::map<EdgeKey, std::map<std::size_t, std::size_t>> cut_records;
  for (const GraphSegment* s : by_index) {
    for (const auto& e : s->cut_edges) {
      cut_records[{e.src, e.dst, e.relation}][s->index] += 1;
    }
  }
  for (const auto& [key, records] : cut_records) {
    const auto& [src, dst, relation] = key;
    const std::string name = "cut edge " + src + " -> " + dst + " (" + relation + ")";
    auto src_owner = owner.find(src);
    auto dst_owner = owner.find(dst);
    if (src_owner == owner.end() || dst_owner == owner.end()) {
      throw ReconstructError(name + " references a node absent from every segment");
    }
    if (src_owner->second == dst_owner->second) {
      throw ReconstructError(name + " has both endpoints in segment " +
                             std::to_string(src_owner->second));
    }
    for (const auto& [seg_index, count] : records) {
      if (seg_index != src_owner->second && seg_index != dst_owner->second) {
        throw ReconstructError(name + " recorded on segment " + std::to_string(seg_index) +
                               ", which owns neither endpoint");
      }
      (void)count;
    }
    const std::size_t on_src = records.count(src_owner->second)
                                   ? records.at(src_owner->second)
                                   : 0;
    const std::size_t on_dst = records.count(dst_owner->second)
                                   ? records.at(dst_owner->second)
                                   : 0;
    if (on_src != on_dst || on_src == 0) {
      throw ReconstructError(name + " present on only one owning segment");
    }
    for (std::size_t i = 0; i < on_src; ++i) g.add_edge({src, dst, relation});
  }

  return g;
}

std::string serialize_segment(const GraphSegment& s) {
  std::string out = "KGSEG v1 " + std::to_string(s.index) + ' ' + std::to_string(s.total) + '\n';
  for (const KGNode* n : nodes_sorted(s.nodes)) append_node_line(out, *n);
  for (const KGEdge* e : edges_sorted(s.internal_edges)) append_edge_line(out, "EDGE", *e);
  for (const KGEdge* e : edges_sorted(s.cut_edges)) append_edge_line(out, "CUT", *e);
  return out;
}

GraphSegment deserialize_segment(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty input");
  std::string_view header_tail;
  check_header(lines[0], "KGSEG", 1, &header_tail);
  auto [index_tok, total_tok] = take_token(header_tail);
  if (index_tok.empty() || total_tok.empty() || has_whitespace(total_tok)) {
    throw ParseError(1, "expected KGSEG v1 <index> <total>");
  }

  GraphSegment seg;
  seg.index = parse_count(index_tok, 1, "segment index");
  seg.total = parse_count(total_tok, 1, "segment total");
  if (seg.total == 0 || seg.index >= seg.total) {
    throw ParseError(1, "segment index " + std::to_string(seg.index) +
                            " out of range for total " + std::to_string(seg.total));
  }

  std::unordered_set<std::string> ids;
  enum class Section { Nodes, Edges, Cuts };
  Section section = Section::Nodes;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (line.empty()) throw ParseError(line_no, "blank line");
    auto [tag, rest] = take_token(line);

    if (tag == "NODE") {
      if (section != Section::Nodes) throw ParseError(line_no, "NODE line after edge lines");
      auto [id, after_id] = take_token(rest);
      auto [layer_tok, label] = take_token(after_id);
      if (id.empty() || layer_tok.empty()) {
        throw ParseError(line_no, "expected NODE <id> <layer> [label]");
      }
      auto layer = layer_from_name(layer_tok);
      if (!layer) throw ParseError(line_no, "unknown layer token '" + std::string(layer_tok) + "'");
      if (!ids.insert(std::string(id)).second) {
        throw ParseError(line_no, "duplicate node id '" + std::string(id) + "'");
      }
      seg.nodes.push_back({std::string(id), *layer, std::string(label)});
      continue;
    }

    auto [src, after_src] = take_token(rest);
    auto [dst, relation] = take_token(after_src);
    if (src.empty() || dst.empty() || relation.empty()) {
      throw ParseError(line_no, "expected " + std::string(tag) + " <src> <dst> <relation>");
    }

    if (tag == "EDGE") {
      if (section == Section::Cuts) throw ParseError(line_no, "EDGE line after CUT lines");
      section = Section::Edges;
      // Internal edges live entirely inside this segment.
      if (!ids.contains(std::string(src)) || !ids.contains(std::string(dst))) {
        throw ParseError(line_no, "internal edge references a node outside the segment");
      }
      seg.internal_edges.push_back({std::string(src), std::string(dst), std::string(relation)});
    } else if (tag == "CUT") {
      section = Section::Cuts;
      // Cut edges have exactly one endpoint elsewhere; resolved at reconstruct.
      seg.cut_edges.push_back({std::string(src), std::string(dst), std::string(relation)});
    } else {
      throw ParseError(line_no, "expected NODE, EDGE or CUT, got '" + std::string(tag) + "'");
    }
  }
  return seg;
}

}  // namespace avkg
