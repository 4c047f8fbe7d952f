#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "wigner/word.hpp"

namespace wigner {

/// Every letter occurs an even number of times.
bool is_even(const Word& w);

/// Every letter occurs equally often at odd and at even (1-based) positions.
bool is_symmetric(const Word& w);

/// Each block has exactly two elements.
bool is_pair_partition(const Word& w);

/// Membership in SS(k), by the recursive interval test: the last block is a
/// union of even-length runs, every other block meets each gap between
/// consecutive runs an even number of times, and the word with the last block
/// removed is again special symmetric. Always false for odd k.
bool is_special_symmetric(const Word& w);

/// Alternative, non-recursive reading of the same class: the word is
/// symmetric, the last block is a union of even runs, and between any two successive occurrences of any
/// letter every other letter occurs equally often at odd and even positions.
/// Kept as a cross-check of `is_special_symmetric`.
bool is_special_symmetric_by_gaps(const Word& w);

struct SSClassification {
  bool is_even = false;
  bool is_symmetric = false;
  bool is_special_symmetric = false;
  int block_count = 0;
};

SSClassification classify(const Word& w);

/// Largest k accepted by the brute-force partition enumerator.
inline constexpr int kMaxBruteForceLength = 12;

/// Every set partition of [k] as a canonical word, in lexicographic order.
/// Throws CapacityError for k > kMaxBruteForceLength.
void for_each_partition(int k, const std::function<void(const Word&)>& visit);
std::vector<Word> enumerate_partitions_brute(int k);

/// SS(two_k) in lexicographic order, generated through colored rooted trees.
/// Odd or non-positive lengths give an empty result.
std::vector<Word> enumerate_ss(int two_k);

/// |SS_b(two_k)| keyed by block count b. Empty for odd lengths.
std::map<int, std::uint64_t> count_ss_by_blocks(int two_k);

/// Non-crossing pair partitions of [two_k], built from balanced bracket
/// sequences with a stack. Independent of the SS machinery.
std::vector<Word> enumerate_nc2(int two_k);

std::uint64_t catalan(int k);
std::uint64_t bell(int k);
std::uint64_t binomial(int n, int k);

}  // namespace wigner
