#include <doctest.h>

#include <set>

#include "wigner/combinatorics.hpp"
#include "wigner/trees.hpp"

using namespace wigner;

TEST_CASE("worked example") {
  const Word w = Word::parse("aaabbacc");
  const ColoredRootedTree t = tree_from_word(w);
  CHECK(t.to_text() == "0(1,1(2),3)");
  CHECK(word_from_tree(t) == w);
  const ColorSkeleton s = color_skeleton(t);
  CHECK(s.parent == std::vector<int>{-1, 0, 1, 0});
  CHECK(s.multiplicity == std::vector<int>{1, 2, 1, 1});
  CHECK(color_skeleton(w) == s);
}

TEST_CASE("text form round trips") {
  for (const char* text : {"0", "0(1)", "0(1,1(2),3)", "0(1(2(3)),1(2(3)))"}) {
    CHECK(ColoredRootedTree::parse_text(text).to_text() == text);
  }
  CHECK_THROWS_AS(ColoredRootedTree::parse_text("0(1"), ValidationError);
  CHECK_THROWS_AS(ColoredRootedTree::parse_text("0(1)x"), ValidationError);
  CHECK_THROWS_AS(ColoredRootedTree::parse_text("(1)"), ValidationError);
}

TEST_CASE("validation names the violated property") {
  auto violations = [](const char* text) {
    return validate_tree(ColoredRootedTree::parse_text(text));
  };
  CHECK(violations("0(1,1(2),3)").valid());
  const auto skip = violations("0(2)");
  CHECK_FALSE(skip.property_a);
  const auto parents = violations("0(1(3),2(3))");
  CHECK_FALSE(parents.property_b);
  const auto depths = violations("0(1(2),2)");
  CHECK_FALSE(depths.property_c);
  const auto root = violations("1(1)");
  CHECK_FALSE(root.root_color);
  CHECK_THROWS_AS(word_from_tree(ColoredRootedTree::parse_text("0(1(3),2(3))")),
                  ValidationError);
  CHECK_FALSE(violations("0(2,1)").canonical_coloring);
  CHECK(violations("0(2,1)").valid());
}

TEST_CASE("non special symmetric words have no tree") {
  CHECK_THROWS_AS(tree_from_word(Word::parse("abab")), DomainError);
  CHECK_THROWS_AS(tree_from_word(Word::parse("aab")), DomainError);
  CHECK_THROWS_AS(color_skeleton(Word::parse("abab")), DomainError);
}

TEST_CASE("round trips on every word and every tree") {
  for (int k = 2; k <= 12; k += 2) {
    const auto words = enumerate_ss(k);
    std::set<std::string> texts;
    for (const Word& w : words) {
      const ColoredRootedTree t = tree_from_word(w);
      CHECK(t.edge_count() == static_cast<std::size_t>(k / 2));
      CHECK(validate_tree(t).valid());
      CHECK(validate_tree(t).canonical_coloring);
      CHECK(word_from_tree(t) == w);
      CHECK(color_skeleton(t) == color_skeleton(w));
      texts.insert(t.to_text());
    }
    CHECK(texts.size() == words.size());

    const auto trees = enumerate_trees(k);
    CHECK(trees.size() == words.size());
    for (const auto& t : trees) CHECK(tree_from_word(word_from_tree(t)) == t);
  }
}

TEST_CASE("recoloring by depth-first first appearance") {
  const auto t = ColoredRootedTree::parse_text("0(2,1(3))");
  CHECK(validate_tree(t).valid());
  CHECK(word_from_tree(t).to_string() == "aabccb");
}

TEST_CASE("odd lengths are empty") {
  CHECK(enumerate_trees(5).empty());
  CHECK(enumerate_trees(0).empty());
}
