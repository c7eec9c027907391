#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "securezone/bytes.hpp"

namespace securezone {

// Zone policies are monotone threshold trees over attribute names. Text form:
//
//   expr   := term ("or" term)*
//   term   := factor ("and" factor)*
//   factor := attr | INT "of" "(" expr ("," expr)* ")" | "(" expr ")"
//
// "and" binds tighter than "or"; both desugar to binary 2-of-2 / 1-of-2
// gates. Attribute names use [A-Za-z0-9_:-], up to 64 bytes; "and", "or" and
// "of" are reserved. The canonical form emitted by serialize_policy writes
// every gate as "k of (c1, c2, ...)" with single spaces.

struct SyntaxError : Error {
  SyntaxError(const std::string& expected, std::size_t position)
      : Error("syntax error at position " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(expected) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

struct LimitExceeded : Error {
  using Error::Error;
};

/// Thrown when a hand-built tree violates the structural invariants.
struct InvalidTree : Error {
  using Error::Error;
};

inline constexpr std::size_t kMaxPolicyTextBytes = 64 * 1024;
inline constexpr std::size_t kMaxAttributeBytes = 64;
inline constexpr std::size_t kMaxTreeDepth = 32;
inline constexpr std::size_t kMaxTreeNodes = 4096;
inline constexpr std::size_t kMaxParseNesting = 128;

inline bool is_attribute_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == ':' || c == '-';
}

inline bool is_reserved_word(std::string_view s) {
  return s == "and" || s == "or" || s == "of";
}

inline bool is_valid_attribute_name(std::string_view name) {
  if (name.empty() || name.size() > kMaxAttributeBytes) return false;
  if (is_reserved_word(name)) return false;
  for (char c : name) {
    if (!is_attribute_char(c)) return false;
  }
  return true;
}

/// A user's granted attributes. Set semantics; comparisons are exact bytes.
using AttributeSet = std::set<std::string, std::less<>>;

struct AccessTree {
  struct Node {
    // threshold > 0 with children: k-of-n gate; no children: attribute leaf.
    std::uint32_t threshold = 0;
    std::string attribute;
    std::vector<Node> children;

    bool is_leaf() const noexcept { return children.empty(); }
    bool operator==(const Node&) const = default;

    static Node leaf(std::string name) { return Node{0, std::move(name), {}}; }
    static Node gate(std::uint32_t k, std::vector<Node> kids) {
      return Node{k, {}, std::move(kids)};
    }
  };

  Node root;

  bool operator==(const AccessTree&) const = default;
};

namespace detail {

inline void count_nodes(const AccessTree::Node& n, std::size_t depth, std::size_t& nodes,
                        std::size_t& max_depth, std::size_t& leaves) {
  ++nodes;
  if (depth > max_depth) max_depth = depth;
  if (n.is_leaf()) {
    ++leaves;
    if (!is_valid_attribute_name(n.attribute)) {
      throw InvalidTree("invalid attribute name in tree: '" + n.attribute + "'");
    }
    return;
  }
  if (n.threshold < 1 || n.threshold > n.children.size()) {
    throw InvalidTree("gate threshold out of range");
  }
  for (const auto& c : n.children) count_nodes(c, depth + 1, nodes, max_depth, leaves);
}

}  // namespace detail

/// Validates the structural invariants (thresholds, depth, node count,
/// attribute charset). Parsed trees always pass; hand-built ones may not.
inline void check_tree_invariants(const AccessTree& tree) {
  std::size_t nodes = 0, max_depth = 0, leaves = 0;
  detail::count_nodes(tree.root, 1, nodes, max_depth, leaves);
  if (max_depth > kMaxTreeDepth) throw LimitExceeded("policy tree deeper than 32");
  if (nodes > kMaxTreeNodes) throw LimitExceeded("policy tree larger than 4096 nodes");
}

inline std::size_t leaf_count(const AccessTree::Node& n) {
  if (n.is_leaf()) return 1;
  std::size_t total = 0;
  for (const auto& c : n.children) total += leaf_count(c);
  return total;
}

inline std::size_t leaf_count(const AccessTree& t) { return leaf_count(t.root); }

namespace detail {

inline void collect_leaves(const AccessTree::Node& n, std::vector<std::string>& out) {
  if (n.is_leaf()) {
    out.push_back(n.attribute);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
}

}  // namespace detail

/// Leaf attribute names in serialization (depth-first, left-to-right) order.
/// Ciphertext leaf components follow this order exactly.
inline std::vector<std::string> leaf_attributes(const AccessTree& tree) {
  std::vector<std::string> out;
  detail::collect_leaves(tree.root, out);
  return out;
}

inline bool satisfies(const AccessTree::Node& n, const AttributeSet& attrs) {
  if (n.is_leaf()) return attrs.contains(n.attribute);
  std::uint32_t hits = 0;
  for (const auto& c : n.children) {
    if (satisfies(c, attrs)) {
      if (++hits >= n.threshold) return true;
    }
  }
  return false;
}

/// True iff the attribute set meets the policy: a leaf needs membership, a
/// gate needs at least k satisfied children. Pure; an empty set just fails
/// every leaf.
inline bool satisfies(const AccessTree& tree, const AttributeSet& attrs) {
  return satisfies(tree.root, attrs);
}

namespace detail {

inline void serialize_node(const AccessTree::Node& n, std::string& out) {
  if (n.is_leaf()) {
    out += n.attribute;
    return;
  }
  out += std::to_string(n.threshold);
  out += " of (";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i != 0) out += ", ";
    serialize_node(n.children[i], out);
  }
  out += ')';
}

}  // namespace detail

/// Canonical text: every gate in "k of (...)" form, single spaces, stable
/// bytes for equal trees.
inline std::string serialize_policy(const AccessTree& tree) {
  std::string out;
  detail::serialize_node(tree.root, out);
  return out;
}

namespace detail {

struct PolicyToken {
  enum class Kind { kWord, kInt, kAnd, kOr, kOf, kLParen, kRParen, kComma, kEnd };
  Kind kind;
  std::string_view text;
  std::size_t pos;
};

inline std::vector<PolicyToken> tokenize_policy(std::string_view text) {
  using Kind = PolicyToken::Kind;
  std::vector<PolicyToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Kind::kLParen, text.substr(i, 1), i});
      ++i;
      continue;
    }
    if (c == ')') {
      out.push_back({Kind::kRParen, text.substr(i, 1), i});
      ++i;
      continue;
    }
    if (c == ',') {
      out.push_back({Kind::kComma, text.substr(i, 1), i});
      ++i;
      continue;
    }
    if (!is_attribute_char(c)) throw SyntaxError("attribute, number, or punctuation", i);
    std::size_t j = i;
    while (j < text.size() && is_attribute_char(text[j])) ++j;
    std::string_view word = text.substr(i, j - i);
    if (word.size() > kMaxAttributeBytes) throw LimitExceeded("attribute name longer than 64 bytes");
    Kind kind = Kind::kWord;
    if (word == "and") {
      kind = Kind::kAnd;
    } else if (word == "or") {
      kind = Kind::kOr;
    } else if (word == "of") {
      kind = Kind::kOf;
    } else {
      bool digits = true;
      for (char w : word) digits = digits && (w >= '0' && w <= '9');
      if (digits) kind = Kind::kInt;
    }
    out.push_back({kind, word, i});
    i = j;
  }
  out.push_back({Kind::kEnd, {}, text.size()});
  return out;
}

class PolicyParser {
 public:
  explicit PolicyParser(std::vector<PolicyToken> tokens) : tokens_(std::move(tokens)) {}

  AccessTree::Node parse() {
    auto node = parse_expr(0);
    expect(PolicyToken::Kind::kEnd, "end of input");
    return node;
  }

 private:
  using Kind = PolicyToken::Kind;

  const PolicyToken& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  const PolicyToken& advance() { return tokens_[pos_++]; }

  const PolicyToken& expect(Kind kind, const char* what) {
    if (peek().kind != kind) throw SyntaxError(what, peek().pos);
    return advance();
  }

  AccessTree::Node parse_expr(std::size_t nesting) {
    auto node = parse_term(nesting);
    while (peek().kind == Kind::kOr) {
      advance();
      auto rhs = parse_term(nesting);
      std::vector<AccessTree::Node> kids;
      kids.push_back(std::move(node));
      kids.push_back(std::move(rhs));
      node = AccessTree::Node::gate(1, std::move(kids));
    }
    return node;
  }

  AccessTree::Node parse_term(std::size_t nesting) {
    auto node = parse_factor(nesting);
    while (peek().kind == Kind::kAnd) {
      advance();
      auto rhs = parse_factor(nesting);
      std::vector<AccessTree::Node> kids;
      kids.push_back(std::move(node));
      kids.push_back(std::move(rhs));
      node = AccessTree::Node::gate(2, std::move(kids));
    }
    return node;
  }

  AccessTree::Node parse_factor(std::size_t nesting) {
    if (nesting > kMaxParseNesting) throw LimitExceeded("policy nesting deeper than 128");
    const auto& tok = peek();
    if (tok.kind == Kind::kLParen) {
      advance();
      auto node = parse_expr(nesting + 1);
      expect(Kind::kRParen, "')'");
      return node;
    }
    if (tok.kind == Kind::kInt && peek(1).kind == Kind::kOf) {
      return parse_threshold(nesting);
    }
    if (tok.kind == Kind::kWord || tok.kind == Kind::kInt) {
      advance();
      return AccessTree::Node::leaf(std::string(tok.text));
    }
    throw SyntaxError("attribute, threshold gate, or '('", tok.pos);
  }

  AccessTree::Node parse_threshold(std::size_t nesting) {
    const auto& count = advance();  // kInt
    std::uint64_t k = 0;
    for (char c : count.text) {
      k = k * 10 + static_cast<std::uint64_t>(c - '0');
      if (k > kMaxTreeNodes) throw SyntaxError("threshold within gate arity", count.pos);
    }
    expect(Kind::kOf, "'of'");
    expect(Kind::kLParen, "'('");
    std::vector<AccessTree::Node> kids;
    kids.push_back(parse_expr(nesting + 1));
    while (peek().kind == Kind::kComma) {
      advance();
      kids.push_back(parse_expr(nesting + 1));
    }
    expect(Kind::kRParen, "')' or ','");
    if (k < 1 || k > kids.size()) throw SyntaxError("threshold within gate arity", count.pos);
    return AccessTree::Node::gate(static_cast<std::uint32_t>(k), std::move(kids));
  }

  std::vector<PolicyToken> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses policy text into its unique tree. Throws SyntaxError (with the
/// failing position) or LimitExceeded.
inline AccessTree parse_policy(std::string_view text) {
  if (text.size() > kMaxPolicyTextBytes) throw LimitExceeded("policy text larger than 64 KiB");
  detail::PolicyParser parser(detail::tokenize_policy(text));
  AccessTree tree{parser.parse()};
  check_tree_invariants(tree);
  return tree;
}

}  // namespace securezone
