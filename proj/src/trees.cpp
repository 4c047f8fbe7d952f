#include "wigner/trees.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "wigner/combinatorics.hpp"
#include "wigner/errors.hpp"

namespace wigner {

int ColoredRootedTree::add_child(int parent, int color) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= nodes_.size()) {
    throw ValidationError("parent index out of range");
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{color, parent, {}});
  nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

int ColoredRootedTree::color_count() const {
  int max_color = 0;
  for (const auto& n : nodes_) max_color = std::max(max_color, n.color);
  return max_color + 1;
}

int ColoredRootedTree::depth(int i) const {
  int d = 0;
  for (int p = node(i).parent; p != -1; p = node(p).parent) ++d;
  return d;
}

namespace {

void write_text(const ColoredRootedTree& t, int node, std::string& out) {
  out += std::to_string(t.node(node).color);
  const auto& kids = t.node(node).children;
  if (kids.empty()) return;
  out.push_back('(');
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out.push_back(',');
    write_text(t, kids[i], out);
  }
  out.push_back(')');
}

struct TextParser {
  std::string_view text;
  std::size_t pos = 0;

  int number() {
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) throw ValidationError("expected color index at offset " + std::to_string(pos));
    return std::stoi(std::string(text.substr(start, pos - start)));
  }

  void children(ColoredRootedTree& t, int parent) {
    if (pos >= text.size() || text[pos] != '(') return;
    ++pos;
    while (true) {
      const int child = t.add_child(parent, number());
      children(t, child);
      if (pos >= text.size()) throw ValidationError("unterminated child list");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == ')') {
        ++pos;
        return;
      }
      throw ValidationError("unexpected character in tree text");
    }
  }
};

// Walk construction shared by tree_from_word and enumerate_trees. Returns the
// node where the walk ends; a well-formed walk ends at the root.
int walk_into_tree(std::span<const Word::Letter> letters, ColoredRootedTree& t) {
  int cur = 0;
  for (auto letter : letters) {
    if (cur != 0 && t.node(cur).color == letter) {
      cur = t.node(cur).parent;
    } else {
      cur = t.add_child(cur, letter);
    }
  }
  return cur;
}

}  // namespace

std::string ColoredRootedTree::to_text() const {
  std::string out;
  write_text(*this, 0, out);
  return out;
}

ColoredRootedTree ColoredRootedTree::parse_text(std::string_view text) {
  TextParser parser{text};
  ColoredRootedTree t;
  t.nodes_[0].color = parser.number();
  parser.children(t, 0);
  if (parser.pos != text.size()) throw ValidationError("trailing characters after tree text");
  return t;
}

bool operator==(const ColoredRootedTree& a, const ColoredRootedTree& b) {
  return a.to_text() == b.to_text();
}

TreeReport validate_tree(const ColoredRootedTree& t) {
  TreeReport r;
  const auto nodes = t.nodes();
  if (nodes[0].color != 0) {
    r.root_color = false;
    r.violations.push_back("root: root must carry color 0");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].color <= 0) {
      r.root_color = false;
      r.violations.push_back("root: non-root node " + std::to_string(i) + " carries color " +
                             std::to_string(nodes[i].color));
      return r;
    }
  }

  const int colors = t.color_count();
  std::vector<int> parent_color(static_cast<std::size_t>(colors), -2);
  std::vector<int> depth_of(static_cast<std::size_t>(colors), -1);
  std::vector<int> used(static_cast<std::size_t>(colors), 0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const int c = nodes[i].color;
    const int pc = nodes[static_cast<std::size_t>(nodes[i].parent)].color;
    const int d = t.depth(static_cast<int>(i));
    ++used[static_cast<std::size_t>(c)];
    if (parent_color[c] == -2) {
      parent_color[c] = pc;
      depth_of[c] = d;
      continue;
    }
    if (parent_color[c] != pc && r.property_b) {
      r.property_b = false;
      r.violations.push_back("(b): color " + std::to_string(c) +
                             " has parents of different colors");
    }
    if (depth_of[c] != d && r.property_c) {
      r.property_c = false;
      r.violations.push_back("(c): color " + std::to_string(c) + " occurs at different depths");
    }
  }
  for (int c = 1; c < colors; ++c) {
    if (used[static_cast<std::size_t>(c)] == 0) {
      r.property_a = false;
      r.violations.push_back("(a): color " + std::to_string(c) + " is never used");
      break;
    }
  }

  // First appearance in depth-first preorder must be 1, 2, 3, ...
  int next = 1;
  std::vector<int> stack{0};
  std::vector<char> seen(static_cast<std::size_t>(colors), 0);
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    const int c = nodes[static_cast<std::size_t>(v)].color;
    if (v != 0 && !seen[c]) {
      seen[c] = 1;
      if (c != next) r.canonical_coloring = false;
      ++next;
    }
    const auto& kids = nodes[static_cast<std::size_t>(v)].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return r;
}

ColoredRootedTree tree_from_word(const Word& w) {
  if (!is_special_symmetric(w)) {
    throw DomainError("word '" + w.to_string() + "' is not special symmetric");
  }
  ColoredRootedTree t;
  if (walk_into_tree(w.letters(), t) != 0 || !validate_tree(t).valid()) {
    throw std::logic_error("tree construction disagrees with the SS predicate for " +
                           w.to_string());
  }
  return t;
}

Word word_from_tree(const ColoredRootedTree& t) {
  const TreeReport report = validate_tree(t);
  if (!report.valid()) {
    std::string msg = "tree violates";
    for (const auto& v : report.violations) msg += " " + v + ";";
    throw ValidationError(msg);
  }
  std::vector<int> colors;
  colors.reserve(2 * t.edge_count());
  // (node, next child index) frames for an explicit depth-first walk.
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto& kids = t.node(v).children;
    if (next < kids.size()) {
      const int child = kids[next++];
      colors.push_back(t.node(child).color);
      stack.emplace_back(child, 0);
    } else {
      if (v != 0) colors.push_back(t.node(v).color);
      stack.pop_back();
    }
  }
  return Word::canonicalize(std::span<const int>(colors));
}

std::vector<std::vector<int>> ColorSkeleton::children() const {
  std::vector<std::vector<int>> out(parent.size());
  for (std::size_t c = 1; c < parent.size(); ++c) {
    out[static_cast<std::size_t>(parent[c])].push_back(static_cast<int>(c));
  }
  return out;
}

ColorSkeleton color_skeleton(const ColoredRootedTree& t) {
  ColorSkeleton s;
  const int colors = t.color_count();
  s.parent.assign(static_cast<std::size_t>(colors), -1);
  s.multiplicity.assign(static_cast<std::size_t>(colors), 0);
  s.multiplicity[0] = 1;
  for (std::size_t i = 1; i < t.node_count(); ++i) {
    const auto& n = t.node(static_cast<int>(i));
    s.parent[n.color] = t.node(n.parent).color;
    ++s.multiplicity[n.color];
  }
  return s;
}

ColorSkeleton color_skeleton(const Word& w) {
  if (!is_special_symmetric(w)) {
    throw DomainError("word '" + w.to_string() + "' is not special symmetric");
  }
  ColorSkeleton s;
  const int colors = w.block_count() + 1;
  s.parent.assign(static_cast<std::size_t>(colors), -1);
  s.multiplicity.assign(static_cast<std::size_t>(colors), 0);
  s.multiplicity[0] = 1;
  std::vector<int> path{0};
  for (auto letter : w.letters()) {
    if (path.size() > 1 && path.back() == letter) {
      path.pop_back();
      continue;
    }
    if (s.parent[letter] == -1) s.parent[letter] = path.back();
    ++s.multiplicity[letter];
    path.push_back(letter);
  }
  return s;
}

namespace {

struct WalkGenerator {
  int steps;
  const std::function<void(std::span<const Word::Letter>, const ColorSkeleton&)>& visit;
  std::vector<Word::Letter> letters;
  std::vector<int> path;  // colors from the root down to the current node
  ColorSkeleton skeleton;
  int downs_left;

  void run(int pos) {
    if (pos == steps) {
      visit(letters, skeleton);
      return;
    }
    const int cur = path.back();
    if (downs_left > 0) {
      const int colors = skeleton.colors();
      for (int c = 1; c < colors; ++c) {
        if (skeleton.parent[static_cast<std::size_t>(c)] != cur) continue;
        descend(pos, c);
      }
      skeleton.parent.push_back(cur);
      skeleton.multiplicity.push_back(0);
      descend(pos, colors);
      skeleton.parent.pop_back();
      skeleton.multiplicity.pop_back();
    }
    if (path.size() > 1) {
      letters[static_cast<std::size_t>(pos)] = static_cast<Word::Letter>(cur);
      path.pop_back();
      run(pos + 1);
      path.push_back(cur);
    }
  }

  void descend(int pos, int color) {
    letters[static_cast<std::size_t>(pos)] = static_cast<Word::Letter>(color);
    ++skeleton.multiplicity[static_cast<std::size_t>(color)];
    path.push_back(color);
    --downs_left;
    run(pos + 1);
    ++downs_left;
    path.pop_back();
    --skeleton.multiplicity[static_cast<std::size_t>(color)];
  }
};

}  // namespace

void for_each_tree_walk(
    int two_k,
    const std::function<void(std::span<const Word::Letter>, const ColorSkeleton&)>& visit) {
  if (two_k <= 0 || two_k % 2 != 0) return;
  if (two_k / 2 > 254) throw CapacityError("too many edges for 8-bit letters", two_k);
  WalkGenerator gen{two_k, visit, std::vector<Word::Letter>(static_cast<std::size_t>(two_k)),
                    {0}, ColorSkeleton{{-1}, {1}}, two_k / 2};
  gen.run(0);
}

std::vector<ColoredRootedTree> enumerate_trees(int two_k) {
  std::vector<ColoredRootedTree> out;
  for_each_tree_walk(two_k, [&](std::span<const Word::Letter> letters, const ColorSkeleton&) {
    ColoredRootedTree t;
    walk_into_tree(letters, t);
    out.push_back(std::move(t));
  });
  return out;
}

}  // namespace wigner
