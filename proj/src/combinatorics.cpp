#include "wigner/combinatorics.hpp"

#include <algorithm>

#include "wigner/errors.hpp"
#include "wigner/trees.hpp"

namespace wigner {

using Letter = Word::Letter;

bool is_even(const Word& w) {
  const auto counts = w.letter_counts();
  return std::all_of(counts.begin() + 1, counts.end(), [](int c) { return c % 2 == 0; });
}

bool is_symmetric(const Word& w) {
  std::vector<int> balance(static_cast<std::size_t>(w.block_count()) + 1, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    // position i + 1 is odd when i is even
    balance[w[i]] += (i % 2 == 0) ? 1 : -1;
  }
  return std::all_of(balance.begin(), balance.end(), [](int b) { return b == 0; });
}

bool is_pair_partition(const Word& w) {
  const auto counts = w.letter_counts();
  return !w.empty() &&
         std::all_of(counts.begin() + 1, counts.end(), [](int c) { return c == 2; });
}

namespace {

struct Run {
  std::size_t begin;
  std::size_t end;  // one past the last element
};

std::vector<Run> runs_of(const std::vector<Letter>& seq, Letter letter) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < seq.size();) {
    if (seq[i] != letter) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < seq.size() && seq[j] == letter) ++j;
    runs.push_back({i, j});
    i = j;
  }
  return runs;
}

bool runs_all_even(const std::vector<Run>& runs) {
  return std::all_of(runs.begin(), runs.end(),
                     [](const Run& r) { return (r.end - r.begin) % 2 == 0; });
}

}  // namespace

bool is_special_symmetric(const Word& w) {
  if (w.empty() || w.size() % 2 != 0) return false;
  std::vector<Letter> seq(w.letters().begin(), w.letters().end());
  std::vector<int> counts(static_cast<std::size_t>(w.block_count()) + 1);
  for (Letter last = static_cast<Letter>(w.block_count()); last > 1; --last) {
    const auto runs = runs_of(seq, last);
    if (!runs_all_even(runs)) return false;
    for (std::size_t j = 0; j + 1 < runs.size(); ++j) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = runs[j].end; i < runs[j + 1].begin; ++i) ++counts[seq[i]];
      if (std::any_of(counts.begin(), counts.end(), [](int c) { return c % 2 != 0; })) {
        return false;
      }
    }
    std::erase(seq, last);
  }
  // One block left; its length is even because only even runs were removed.
  return true;
}

bool is_special_symmetric_by_gaps(const Word& w) {
  if (w.empty() || w.size() % 2 != 0 || !is_symmetric(w)) return false;
  const std::vector<Letter> seq(w.letters().begin(), w.letters().end());
  if (!runs_all_even(runs_of(seq, static_cast<Letter>(w.block_count())))) return false;

  const std::size_t b = static_cast<std::size_t>(w.block_count());
  std::vector<int> last_seen(b + 1, -1);
  std::vector<int> balance(b + 1);
  for (std::size_t q = 0; q < seq.size(); ++q) {
    const Letter v = seq[q];
    if (last_seen[v] >= 0) {
      std::fill(balance.begin(), balance.end(), 0);
      for (std::size_t i = static_cast<std::size_t>(last_seen[v]) + 1; i < q; ++i) {
        balance[seq[i]] += (i % 2 == 0) ? 1 : -1;
      }
      if (std::any_of(balance.begin(), balance.end(), [](int x) { return x != 0; })) {
        return false;
      }
    }
    last_seen[v] = static_cast<int>(q);
  }
  return true;
}

SSClassification classify(const Word& w) {
  return {is_even(w), is_symmetric(w), is_special_symmetric(w), w.block_count()};
}

namespace {

void partitions_rec(std::vector<Letter>& buf, std::size_t pos, int max_used,
                    const std::function<void(const Word&)>& visit) {
  if (pos == buf.size()) {
    visit(WordBuilder::adopt(buf, max_used));
    return;
  }
  for (int c = 1; c <= max_used + 1; ++c) {
    buf[pos] = static_cast<Letter>(c);
    partitions_rec(buf, pos + 1, std::max(max_used, c), visit);
  }
}

}  // namespace

void for_each_partition(int k, const std::function<void(const Word&)>& visit) {
  if (k > kMaxBruteForceLength) {
    throw CapacityError("brute-force partition enumeration is limited to k <= " +
                            std::to_string(kMaxBruteForceLength),
                        static_cast<double>(bell(std::min(k, 25))));
  }
  if (k <= 0) return;
  std::vector<Letter> buf(static_cast<std::size_t>(k));
  buf[0] = 1;
  partitions_rec(buf, 1, 1, visit);
}

std::vector<Word> enumerate_partitions_brute(int k) {
  std::vector<Word> out;
  if (k > 0 && k <= kMaxBruteForceLength) out.reserve(bell(k));
  for_each_partition(k, [&](const Word& w) { out.push_back(w); });
  return out;
}

std::vector<Word> enumerate_ss(int two_k) {
  std::vector<Word> out;
  for_each_tree_walk(two_k, [&](std::span<const Letter> letters, const ColorSkeleton& s) {
    out.push_back(WordBuilder::adopt({letters.begin(), letters.end()}, s.colors() - 1));
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::map<int, std::uint64_t> count_ss_by_blocks(int two_k) {
  std::map<int, std::uint64_t> counts;
  for_each_tree_walk(two_k, [&](std::span<const Letter>, const ColorSkeleton& s) {
    ++counts[s.colors() - 1];
  });
  return counts;
}

namespace {

void dyck_rec(int two_k, int pos, int open, int used, std::vector<int>& stack,
              std::vector<Letter>& buf, std::vector<Word>& out) {
  if (pos == two_k) {
    out.push_back(WordBuilder::adopt(buf, used));
    return;
  }
  const int remaining = two_k - pos;
  if (open + 1 <= remaining - 1) {
    const int label = used + 1;
    buf[static_cast<std::size_t>(pos)] = static_cast<Letter>(label);
    stack.push_back(label);
    dyck_rec(two_k, pos + 1, open + 1, label, stack, buf, out);
    stack.pop_back();
  }
  if (open > 0) {
    const int label = stack.back();
    stack.pop_back();
    buf[static_cast<std::size_t>(pos)] = static_cast<Letter>(label);
    dyck_rec(two_k, pos + 1, open - 1, used, stack, buf, out);
    stack.push_back(label);
  }
}

}  // namespace

std::vector<Word> enumerate_nc2(int two_k) {
  std::vector<Word> out;
  if (two_k <= 0 || two_k % 2 != 0) return out;
  std::vector<int> stack;
  std::vector<Letter> buf(static_cast<std::size_t>(two_k));
  dyck_rec(two_k, 0, 0, 0, stack, buf, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t catalan(int k) { return binomial(2 * k, k) / static_cast<std::uint64_t>(k + 1); }

std::uint64_t bell(int k) {
  if (k < 0) return 0;
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < k; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

}  // namespace wigner
