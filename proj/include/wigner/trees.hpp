#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wigner/word.hpp"

namespace wigner {

/// Ordered (plane) rooted tree with a color per node. Node 0 is the root and
/// carries color 0; colors 1..b label the non-root nodes. Children keep their
/// left-to-right order.
class ColoredRootedTree {
 public:
  struct Node {
    int color = 0;
    int parent = -1;
    std::vector<int> children;
  };

  ColoredRootedTree() : nodes_{Node{}} {}

  /// Appends a child of `parent` to the right of its existing children.
  int add_child(int parent, int color);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return nodes_.size() - 1; }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  std::span<const Node> nodes() const noexcept { return nodes_; }

  int color_count() const;  // b + 1, including the root color
  int depth(int i) const;

  /// Nested-parenthesis form, e.g. "0(1,1(2),3)".
  std::string to_text() const;
  static ColoredRootedTree parse_text(std::string_view text);

  friend bool operator==(const ColoredRootedTree& a, const ColoredRootedTree& b);

 private:
  std::vector<Node> nodes_;
};

/// Per-property verdicts; nothing here throws.
struct TreeReport {
  bool root_color = true;         // root alone carries color 0
  bool property_a = true;         // colors 1..b each used, none skipped
  bool property_b = true;         // same color implies same parent color
  bool property_c = true;         // same color implies same depth
  bool canonical_coloring = true; // colors numbered by depth-first first appearance
  std::vector<std::string> violations;

  bool valid() const noexcept { return root_color && property_a && property_b && property_c; }
};

TreeReport validate_tree(const ColoredRootedTree& t);

/// Builds the tree by walking the word: a letter equal to the current node's
/// color steps back to the parent, any other letter opens a new rightmost child
/// of that color. Throws DomainError unless the word is special symmetric.
ColoredRootedTree tree_from_word(const Word& w);

/// Depth-first, left-to-right traversal emitting the child's color on every
/// edge, down and up. Throws ValidationError naming the violated property.
Word word_from_tree(const ColoredRootedTree& t);

/// All valid trees with two_k / 2 edges, canonically colored. Empty for odd
/// lengths. Cardinality equals |SS(two_k)|.
std::vector<ColoredRootedTree> enumerate_trees(int two_k);

/// Reduced view of a valid tree: one entry per color with its parent color and
/// the number of nodes of that color. Entry 0 is the root (parent -1, count 1).
/// This is all the homomorphism density integrand depends on.
struct ColorSkeleton {
  std::vector<int> parent;
  std::vector<int> multiplicity;

  int colors() const noexcept { return static_cast<int>(parent.size()); }
  std::vector<std::vector<int>> children() const;
  friend bool operator==(const ColorSkeleton&, const ColorSkeleton&) = default;
};

ColorSkeleton color_skeleton(const ColoredRootedTree& t);

/// Skeleton read directly off a special symmetric word (letter j has parent
/// letter given by the letter open below it at its first appearance).
ColorSkeleton color_skeleton(const Word& w);

/// Depth-first generator behind enumerate_trees/enumerate_ss. For every valid
/// canonically colored tree with two_k / 2 edges, calls
/// `visit(letters, skeleton)` where `letters` is the traversal word.
void for_each_tree_walk(
    int two_k,
    const std::function<void(std::span<const Word::Letter>, const ColorSkeleton&)>& visit);

}  // namespace wigner
