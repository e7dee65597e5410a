#pragma once

#include <cctype>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "igi/primitive_set.hpp"

namespace igi {

using NodeId = std::int32_t;

// Id carried by nodes created by an edit; never part of a base tree's id space.
inline constexpr NodeId kFreshId = -1;

struct Node {
  std::uint16_t prim = 0;
  std::uint8_t arity = 0;
  SemType type = SemType::Integer;
  NodeId id = kFreshId;

  bool operator==(const Node&) const = default;
};

inline Node make_node(const PrimitiveSet& ps, std::uint16_t prim, NodeId id = kFreshId) {
  return Node{prim, static_cast<std::uint8_t>(ps[prim].arity()), ps[prim].return_type, id};
}

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index one past the last node of the subtree starting at `pos` in a
// preorder node sequence.
inline std::size_t subtree_end(std::span<const Node> nodes, std::size_t pos) {
  std::size_t open = 1;
  while (open > 0) {
    if (pos >= nodes.size()) throw TreeError("truncated preorder sequence");
    open += nodes[pos].arity;
    --open;
    ++pos;
  }
  return pos;
}

// A typed expression tree stored as a preorder node sequence. Each node
// carries its primitive, cached arity/return type and a NodeId.
class ProgramTree {
 public:
  ProgramTree() = default;

  // Checks only the preorder shape (arity consumption); types are the
  // business of type_check().
  explicit ProgramTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw TreeError("empty tree");
    if (igi::subtree_end(nodes_, 0) != nodes_.size()) throw TreeError("trailing nodes after root subtree");
  }

  std::size_t size() const { return nodes_.size(); }
  SemType root_type() const { return nodes_.front().type; }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& operator[](std::size_t i) const { return nodes_[i]; }

  std::size_t subtree_end(std::size_t pos) const { return igi::subtree_end(nodes_, pos); }
  std::size_t subtree_size(std::size_t pos) const { return subtree_end(pos) - pos; }

  std::vector<std::size_t> children(std::size_t pos) const {
    std::vector<std::size_t> out;
    out.reserve(nodes_[pos].arity);
    std::size_t c = pos + 1;
    for (std::size_t i = 0; i < nodes_[pos].arity; ++i) {
      out.push_back(c);
      c = subtree_end(c);
    }
    return out;
  }

  // Number of nodes on the longest root-to-leaf path; a lone leaf has depth 1.
  std::size_t depth() const {
    std::vector<std::size_t> pending;  // remaining children per open node
    std::size_t best = 0;
    for (const Node& n : nodes_) {
      best = std::max(best, pending.size() + 1);
      if (n.arity > 0) {
        pending.push_back(n.arity);
      } else {
        while (!pending.empty() && --pending.back() == 0) pending.pop_back();
      }
    }
    return best;
  }

  std::optional<std::size_t> find(NodeId id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].id == id) return i;
    return std::nullopt;
  }

  // Depth of the node at `pos` (root = 1).
  std::size_t depth_of(std::size_t pos) const {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < pos; ++i) {
      if (nodes_[i].arity > 0) {
        pending.push_back(nodes_[i].arity);
      } else {
        while (!pending.empty() && --pending.back() == 0) pending.pop_back();
      }
    }
    return pending.size() + 1;
  }

  ProgramTree with_subtree(std::size_t pos, std::span<const Node> replacement) const {
    std::vector<Node> out;
    std::size_t end = subtree_end(pos);
    out.reserve(nodes_.size() - (end - pos) + replacement.size());
    out.insert(out.end(), nodes_.begin(), nodes_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.insert(out.end(), replacement.begin(), replacement.end());
    out.insert(out.end(), nodes_.begin() + static_cast<std::ptrdiff_t>(end), nodes_.end());
    return ProgramTree(std::move(out));
  }

  // Preorder ids 0..size-1.
  ProgramTree renumbered() const {
    ProgramTree t = *this;
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) t.nodes_[i].id = static_cast<NodeId>(i);
    return t;
  }

  std::vector<Node>& mutable_nodes() { return nodes_; }

  bool operator==(const ProgramTree&) const = default;

 private:
  std::vector<Node> nodes_;
};

// Equal primitives in equal shape, ignoring node ids.
inline bool same_structure(const ProgramTree& a, const ProgramTree& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].prim != b[i].prim) return false;
  return true;
}

struct TypeReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline TypeReport type_check(const ProgramTree& tree, const PrimitiveSet& ps) {
  TypeReport report;
  auto nodes = tree.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.prim >= ps.size()) {
      report.violations.push_back("node " + std::to_string(i) + ": primitive index outside the set");
      continue;
    }
    const Primitive& p = ps[n.prim];
    if (n.arity != p.arity())
      report.violations.push_back("node " + std::to_string(i) + " (" + p.symbol + "): arity " +
                                  std::to_string(n.arity) + ", expected " + std::to_string(p.arity()));
    if (n.type != p.return_type)
      report.violations.push_back("node " + std::to_string(i) + " (" + p.symbol + "): cached type mismatch");
    if (n.arity != p.arity()) continue;
    std::size_t c = i + 1;
    for (std::size_t k = 0; k < p.arity(); ++k) {
      if (c >= nodes.size()) break;
      if (nodes[c].type != p.arg_types[k])
        report.violations.push_back("node " + std::to_string(i) + " (" + p.symbol + "): argument " +
                                    std::to_string(k) + " is " + std::string(type_name(nodes[c].type)) +
                                    ", expected " + std::string(type_name(p.arg_types[k])));
      c = tree.subtree_end(c);
    }
  }
  return report;
}

inline std::string format_nodes(std::span<const Node> nodes, const PrimitiveSet& ps) {
  std::string out;
  std::vector<std::size_t> pending;
  for (const Node& n : nodes) {
    out += ps[n.prim].symbol;
    if (n.arity > 0) {
      out += '(';
      pending.push_back(n.arity);
      continue;
    }
    while (!pending.empty()) {
      if (--pending.back() == 0) {
        pending.pop_back();
        out += ')';
      } else {
        out += ',';
        break;
      }
    }
  }
  return out;
}

// Nested prefix text, e.g. ITE(EQ(IN0,IN1),0,ADD(IN0,IN1)).
inline std::string format_program(const ProgramTree& tree, const PrimitiveSet& ps) {
  return format_nodes(tree.nodes(), ps);
}

namespace detail {

class ProgramParser {
 public:
  ProgramParser(std::string_view text, const PrimitiveSet& ps) : text_(text), ps_(ps) {}

  ProgramTree parse() {
    std::vector<Node> nodes;
    parse_node(nodes, 0);
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return ProgramTree(std::move(nodes)).renumbered();
  }

 private:
  void parse_node(std::vector<Node>& nodes, int level) {
    if (level > 4096) fail("nesting too deep");
    std::string symbol = read_symbol();
    auto prim = ps_.find(symbol);
    if (!prim) fail("unknown symbol '" + symbol + "'");
    nodes.push_back(make_node(ps_, *prim));
    const std::size_t arity = ps_[*prim].arity();
    skip_space();
    if (arity == 0) {
      if (peek() == '(') fail("terminal '" + symbol + "' takes no arguments");
      return;
    }
    expect('(');
    for (std::size_t k = 0; k < arity; ++k) {
      if (k) expect(',');
      parse_node(nodes, level + 1);
    }
    expect(')');
  }

  std::string read_symbol() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '"') return read_quoted();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '(' || c == ')' || c == ',' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos_;
    }
    if (start == pos_) fail("expected a symbol");
    return std::string(text_.substr(start, pos_ - start));
  }

  // Returns the quoted literal re-escaped in canonical form so it matches
  // constant_symbol().
  std::string read_quoted() {
    std::string raw;
    ++pos_;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string literal");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        char e = text_[pos_++];
        switch (e) {
          case 'n':
            raw += '\n';
            break;
          case 't':
            raw += '\t';
            break;
          default:
            raw += e;
        }
      } else {
        raw += c;
      }
    }
    return quote_string(raw);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw TreeError("parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  std::string_view text_;
  const PrimitiveSet& ps_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses prefix text into a tree with preorder ids. Shape is checked, types
// are not.
inline ProgramTree parse_program(std::string_view text, const PrimitiveSet& ps) {
  return detail::ProgramParser(text, ps).parse();
}

}  // namespace igi
