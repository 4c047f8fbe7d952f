#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wigner/errors.hpp"

namespace wigner {

/// A set partition of positions {1..k}, encoded by letters in first-appearance
/// order: letters[0] == 1 and every new letter is one more than the running max.
class Word {
 public:
  using Letter = std::uint8_t;

  Word() = default;

  /// Throws ValidationError unless `letters` is already canonical.
  explicit Word(std::vector<Letter> letters);

  /// Relabels arbitrary labels by first appearance.
  template <typename T>
  static Word canonicalize(std::span<const T> labels);

  /// Accepts "aabb" or "1,1,2,2".
  static Word parse(std::string_view text);

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  int block_count() const noexcept { return blocks_; }
  Letter operator[](std::size_t i) const noexcept { return letters_[i]; }
  std::span<const Letter> letters() const noexcept { return letters_; }

  /// Occurrence count of each letter, indexed 1..b (index 0 unused).
  std::vector<int> letter_counts() const;

  /// Lowercase ASCII for b <= 26, otherwise comma-separated integers.
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  struct Trusted {};
  Word(Trusted, std::vector<Letter> letters, int blocks)
      : letters_(std::move(letters)), blocks_(blocks) {}
  friend class WordBuilder;

  std::vector<Letter> letters_;
  int blocks_ = 0;
};

/// Blocks ordered by their smallest element, positions 1-based and sorted.
struct Partition {
  std::vector<std::vector<int>> blocks;

  std::size_t size() const;  // k, the ground-set size
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Throws ValidationError on overlapping, missing or out-of-range positions.
Word word_from_partition(const Partition& p);
Partition partition_from_word(const Word& w);

/// Internal fast path for enumerators that already produce canonical letters.
class WordBuilder {
 public:
  static Word adopt(std::vector<Word::Letter> letters, int blocks) {
    return Word(Word::Trusted{}, std::move(letters), blocks);
  }
};

template <typename T>
Word Word::canonicalize(std::span<const T> labels) {
  std::vector<Letter> out;
  out.reserve(labels.size());
  std::vector<std::pair<T, Letter>> seen;
  for (const T& label : labels) {
    Letter assigned = 0;
    for (const auto& [value, letter] : seen) {
      if (value == label) {
        assigned = letter;
        break;
      }
    }
    if (assigned == 0) {
      if (seen.size() >= 255) throw CapacityError("word has more than 255 distinct letters", 256);
      assigned = static_cast<Letter>(seen.size() + 1);
      seen.emplace_back(label, assigned);
    }
    out.push_back(assigned);
  }
  return Word(Trusted{}, std::move(out), static_cast<int>(seen.size()));
}

}  // namespace wigner

template <>
struct std::hash<wigner::Word> {
  std::size_t operator()(const wigner::Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto c : w.letters()) h = (h ^ c) * 1099511628211ull;
    return h;
  }
};
