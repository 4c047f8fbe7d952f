#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "wigner/combinatorics.hpp"
#include "wigner/errors.hpp"

using namespace wigner;

namespace {

// Bell numbers through Stirling numbers of the second kind.
std::uint64_t bell_by_stirling(int k) {
  std::vector<std::vector<std::uint64_t>> s(k + 1, std::vector<std::uint64_t>(k + 1, 0));
  s[0][0] = 1;
  for (int n = 1; n <= k; ++n) {
    for (int j = 1; j <= n; ++j) s[n][j] = j * s[n - 1][j] + s[n - 1][j - 1];
  }
  return std::accumulate(s[k].begin(), s[k].end(), std::uint64_t{0});
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// A word is special symmetric exactly when some choice of orientation for
// every repeated edge leaves b + 1 free vertices with distinct edges per
// letter. Circuit vertices are 0..k with 0 and k identified.
bool ss_by_orientations(const Word& w) {
  const int k = static_cast<int>(w.size());
  if (k % 2 != 0) return false;
  const int b = w.block_count();
  std::vector<int> first(b + 1, -1);
  std::vector<int> repeats;
  for (int i = 1; i <= k; ++i) {
    const int l = w[i - 1];
    if (first[l] < 0) {
      first[l] = i;
    } else {
      repeats.push_back(i);
    }
  }
  const int r = static_cast<int>(repeats.size());
  for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
    UnionFind uf(k + 1);
    uf.unite(0, k);
    for (int t = 0; t < r; ++t) {
      const int i = repeats[t];
      const int f = first[w[i - 1]];
      if (mask & (1u << t)) {
        uf.unite(i - 1, f - 1);
        uf.unite(i, f);
      } else {
        uf.unite(i - 1, f);
        uf.unite(i, f - 1);
      }
    }
    std::set<int> classes;
    for (int v = 0; v <= k; ++v) classes.insert(uf.find(v));
    if (static_cast<int>(classes.size()) != b + 1) continue;
    std::set<std::pair<int, int>> edges;
    for (int l = 1; l <= b; ++l) {
      int u = uf.find(first[l] - 1);
      int v = uf.find(first[l]);
      if (u > v) std::swap(u, v);
      edges.insert({u, v});
    }
    if (static_cast<int>(edges.size()) == b) return true;
  }
  return false;
}

std::set<Word> filter_ss(int k) {
  std::set<Word> out;
  for_each_partition(k, [&](const Word& w) {
    if (is_special_symmetric(w)) out.insert(w);
  });
  return out;
}

}  // namespace

TEST_CASE("word classes on small examples") {
  CHECK(is_even(Word::parse("ababcc")));
  CHECK_FALSE(is_even(Word::parse("abc")));
  CHECK(is_even(Word::parse("aabbaabb")));
  CHECK(is_symmetric(Word::parse("abbbba")));
  CHECK_FALSE(is_symmetric(Word::parse("ababcc")));
  CHECK(is_symmetric(Word::parse("aa")));
  CHECK(is_special_symmetric(Word::parse("aabbaabb")));
  CHECK_FALSE(is_special_symmetric(Word::parse("abab")));
  CHECK_FALSE(is_special_symmetric(Word::parse("a")));
  CHECK(is_special_symmetric(Word::parse("aabbcc")));
  CHECK(is_special_symmetric(Word::parse("abccba")));
}

TEST_CASE("the class is closed under neither meet nor join") {
  CHECK(is_special_symmetric(word_from_partition({{{1, 2}, {3, 6}, {4, 5}}})));
  CHECK(is_special_symmetric(word_from_partition({{{1, 6}, {2, 3, 4, 5}}})));
  CHECK_FALSE(is_special_symmetric(word_from_partition({{{1}, {2}, {3}, {4, 5}, {6}}})));
}

TEST_CASE("brute-force enumeration counts") {
  CHECK(enumerate_partitions_brute(1).size() == 1);
  CHECK(enumerate_partitions_brute(1).front().to_string() == "a");
  for (int k = 1; k <= 10; ++k) {
    const auto words = enumerate_partitions_brute(k);
    CHECK(words.size() == bell_by_stirling(k));
    CHECK(std::is_sorted(words.begin(), words.end()));
    CHECK(std::adjacent_find(words.begin(), words.end()) == words.end());
    CHECK(bell(k) == bell_by_stirling(k));
  }
  CHECK_THROWS_AS(enumerate_partitions_brute(kMaxBruteForceLength + 1), CapacityError);
}

TEST_CASE("fast enumerator small cases") {
  auto strings = [](const std::vector<Word>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) out.push_back(w.to_string());
    return out;
  };
  CHECK(strings(enumerate_ss(2)) == std::vector<std::string>{"aa"});
  CHECK(strings(enumerate_ss(4)) == std::vector<std::string>{"aaaa", "aabb", "abba"});
  CHECK(enumerate_ss(5).empty());
  CHECK(enumerate_ss(0).empty());
}

TEST_CASE("fast enumerator equals the brute-force filter") {
  for (int k = 1; k <= 10; ++k) {
    const auto fast = enumerate_ss(k);
    CHECK(std::set<Word>(fast.begin(), fast.end()) == filter_ss(k));
    CHECK(std::set<Word>(fast.begin(), fast.end()).size() == fast.size());
  }
}

TEST_CASE("three readings of the predicate agree") {
  for (int k = 1; k <= 10; ++k) {
    for_each_partition(k, [&](const Word& w) {
      const bool formal = is_special_symmetric(w);
      CHECK_MESSAGE(formal == is_special_symmetric_by_gaps(w), w.to_string());
      CHECK_MESSAGE(formal == ss_by_orientations(w), w.to_string());
    });
  }
}

TEST_CASE("class inclusions hold on every word") {
  for (int k = 1; k <= 12; ++k) {
    for_each_partition(k, [&](const Word& w) {
      const SSClassification c = classify(w);
      if (c.is_special_symmetric) {
        CHECK(c.is_symmetric);
        for (int count : w.letter_counts()) CHECK(count % 2 == 0);
      }
      if (c.is_symmetric) CHECK(c.is_even);
    });
  }
}

TEST_CASE("block stratification") {
  CHECK(count_ss_by_blocks(2) == std::map<int, std::uint64_t>{{1, 1}});
  CHECK(count_ss_by_blocks(4) == std::map<int, std::uint64_t>{{1, 1}, {2, 2}});
  std::map<int, std::uint64_t> six;
  for (const Word& w : filter_ss(6)) ++six[w.block_count()];
  CHECK(count_ss_by_blocks(6) == six);
  CHECK(six.at(3) == 5);
  for (int k = 1; k <= 7; ++k) {
    const auto counts = count_ss_by_blocks(2 * k);
    CHECK(counts.at(k) == catalan(k));
    std::uint64_t total = 0;
    for (const auto& [b, c] : counts) total += c;
    CHECK(total == enumerate_ss(2 * k).size());
  }
  CHECK(count_ss_by_blocks(7).empty());
}

TEST_CASE("non-crossing pair partitions") {
  CHECK(enumerate_nc2(2).size() == 1);
  CHECK(enumerate_nc2(4).size() == 2);
  CHECK(enumerate_nc2(4).front().to_string() == "aabb");
  CHECK(enumerate_nc2(6).size() == 5);
  for (int k = 2; k <= 12; k += 2) {
    std::set<Word> pairs;
    for (const Word& w : enumerate_ss(k)) {
      if (is_pair_partition(w)) pairs.insert(w);
    }
    const auto nc = enumerate_nc2(k);
    CHECK(std::set<Word>(nc.begin(), nc.end()) == pairs);
  }
}

TEST_CASE("number helpers") {
  CHECK(catalan(0) == 1);
  CHECK(catalan(7) == 429);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(3, 5) == 0);
}
