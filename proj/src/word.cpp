#include "wigner/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace wigner {

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  int max_seen = 0;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const int c = letters_[i];
    if (c < 1 || c > max_seen + 1) {
      throw ValidationError("word is not in first-appearance form at position " +
                            std::to_string(i + 1));
    }
    max_seen = std::max(max_seen, c);
  }
  blocks_ = max_seen;
}

Word Word::parse(std::string_view text) {
  std::vector<int> labels;
  if (text.find(',') != std::string_view::npos ||
      (!text.empty() && std::isdigit(static_cast<unsigned char>(text.front())))) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t next = std::min(text.find(',', pos), text.size());
      int value = 0;
      const auto field = text.substr(pos, next - pos);
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size() || value < 1) {
        throw ValidationError("bad integer letter '" + std::string(field) + "'");
      }
      labels.push_back(value);
      pos = next + 1;
    }
  } else {
    for (char ch : text) {
      if (ch < 'a' || ch > 'z') throw ValidationError(std::string("bad letter '") + ch + "'");
      labels.push_back(ch - 'a' + 1);
    }
  }
  std::vector<Letter> letters(labels.begin(), labels.end());
  for (int v : labels) {
    if (v > 255) throw ValidationError("letter value exceeds 255");
  }
  return Word(std::move(letters));
}

std::vector<int> Word::letter_counts() const {
  std::vector<int> counts(static_cast<std::size_t>(blocks_) + 1, 0);
  for (auto c : letters_) ++counts[c];
  return counts;
}

std::string Word::to_string() const {
  std::string out;
  if (blocks_ <= 26) {
    out.reserve(letters_.size());
    for (auto c : letters_) out.push_back(static_cast<char>('a' + c - 1));
    return out;
  }
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(letters_[i]);
  }
  return out;
}

std::size_t Partition::size() const {
  std::size_t k = 0;
  for (const auto& b : blocks) k += b.size();
  return k;
}

Word word_from_partition(const Partition& p) {
  const std::size_t k = p.size();
  std::vector<int> owner(k, -1);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    if (p.blocks[b].empty()) throw ValidationError("partition has an empty block");
    for (int pos : p.blocks[b]) {
      if (pos < 1 || static_cast<std::size_t>(pos) > k) {
        throw ValidationError("position " + std::to_string(pos) + " outside [1, " +
                              std::to_string(k) + "]");
      }
      if (owner[pos - 1] != -1) {
        throw ValidationError("position " + std::to_string(pos) + " appears in two blocks");
      }
      owner[pos - 1] = static_cast<int>(b);
    }
  }
  return Word::canonicalize(std::span<const int>(owner));
}

Partition partition_from_word(const Word& w) {
  Partition p;
  p.blocks.resize(static_cast<std::size_t>(w.block_count()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    p.blocks[w[i] - 1].push_back(static_cast<int>(i + 1));
  }
  return p;
}

}  // namespace wigner
