#include "wigner/circuits.hpp"

#include <cmath>
#include <numeric>
#include <thread>

#include "wigner/errors.hpp"

namespace wigner {

Rational::Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw DomainError("zero denominator");
  const std::uint64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const unsigned __int128 lhs = static_cast<unsigned __int128>(a.num_) * b.den_;
  const unsigned __int128 rhs = static_cast<unsigned __int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {

struct Edge {
  int u = -1;
  int v = -1;
  bool same_as(int a, int b) const { return (u == a && v == b) || (u == b && v == a); }
};

class CircuitWalker {
 public:
  CircuitWalker(const Word& w, int n) : w_(w), n_(n), k_(w.size()) {
    first_.assign(static_cast<std::size_t>(w.block_count()) + 1, 0);
    for (std::size_t i = w.size(); i-- > 0;) first_[w[i]] = i + 1;
    pi_.assign(k_ + 1, 0);
    edges_.assign(first_.size(), Edge{});
  }

  template <typename Visit>
  void run_from(int start, Visit&& visit) {
    pi_[0] = start;
    step(1, visit);
  }

 private:
  template <typename Visit>
  void step(std::size_t i, Visit& visit) {
    if (i > k_) {
      if (pi_[k_] == pi_[0]) visit(std::span<const int>(pi_));
      return;
    }
    const auto letter = w_[i - 1];
    const int prev = pi_[i - 1];
    if (first_[letter] == i) {
      for (int v = 0; v < n_; ++v) {
        bool clash = false;
        for (int other = 1; other < letter; ++other) {
          if (edges_[other].same_as(prev, v)) {
            clash = true;
            break;
          }
        }
        if (clash) continue;
        edges_[letter] = {prev, v};
        pi_[i] = v;
        step(i + 1, visit);
      }
      edges_[letter] = {};
      return;
    }
    const Edge& e = edges_[letter];
    if (prev == e.u) {
      pi_[i] = e.v;
    } else if (prev == e.v) {
      pi_[i] = e.u;
    } else {
      return;
    }
    step(i + 1, visit);
  }

  const Word& w_;
  int n_;
  std::size_t k_;
  std::vector<std::size_t> first_;
  std::vector<int> pi_;
  std::vector<Edge> edges_;
};

double generating_choices(const Word& w, int n) {
  return std::pow(static_cast<double>(n), w.block_count() + 1);
}

void check_budget(const Word& w, int n, const CircuitOptions& opts) {
  if (w.empty()) throw DomainError("circuit counting needs a non-empty word");
  if (n < 1) throw DomainError("matrix size must be positive");
  const double need = generating_choices(w, n);
  if (need > opts.budget) {
    throw CapacityError("circuit enumeration for '" + w.to_string() + "' at n=" +
                            std::to_string(n) + " needs about " + std::to_string(need) +
                            " generating-vertex choices (budget " +
                            std::to_string(opts.budget) + ")",
                        need);
  }
}

}  // namespace

bool in_circuit_class(const Word& w, std::span<const int> pi) {
  if (pi.size() != w.size() + 1 || pi.front() != pi.back()) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      const Edge e{pi[i], pi[i + 1]};
      const bool same_edge = e.same_as(pi[j], pi[j + 1]);
      if (same_edge != (w[i] == w[j])) return false;
    }
  }
  return true;
}

void for_each_circuit(const Word& w, int n, const std::function<void(std::span<const int>)>& visit,
                      const CircuitOptions& opts) {
  check_budget(w, n, opts);
  CircuitWalker walker(w, n);
  for (int start = 0; start < n; ++start) walker.run_from(start, visit);
}

CircuitCount count_circuits(const Word& w, int n, const CircuitOptions& opts) {
  check_budget(w, n, opts);
  const int threads = std::max(1, std::min(opts.threads, n));
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(threads), 0);
  auto work = [&](int t) {
    CircuitWalker walker(w, n);
    std::uint64_t local = 0;
    for (int start = t; start < n; start += threads) {
      walker.run_from(start, [&](std::span<const int>) { ++local; });
    }
    partial[static_cast<std::size_t>(t)] = local;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  const std::uint64_t total = std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});

  std::uint64_t denom = 1;
  for (int i = 0; i <= w.block_count(); ++i) {
    if (denom > UINT64_MAX / static_cast<std::uint64_t>(n)) {
      throw NumericError("n^(b+1) overflows 64 bits");
    }
    denom *= static_cast<std::uint64_t>(n);
  }
  return {w, n, total, Rational(total, denom)};
}

std::vector<CircuitCount> ratio_table(const Word& w, std::span<const int> n_values,
                                      const CircuitOptions& opts) {
  std::vector<CircuitCount> out;
  out.reserve(n_values.size());
  for (int n : n_values) out.push_back(count_circuits(w, n, opts));
  return out;
}

std::vector<Occurrence> classify_occurrences(const Word& w, std::span<const int> pi) {
  if (!in_circuit_class(w, pi)) {
    throw DomainError("circuit is not in the class of word '" + w.to_string() + "'");
  }
  std::vector<Occurrence> out(w.size(), Occurrence::First);
  std::vector<std::size_t> first(static_cast<std::size_t>(w.block_count()) + 1, SIZE_MAX);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto letter = w[i];
    if (first[letter] == SIZE_MAX) {
      first[letter] = i;
      continue;
    }
    const std::size_t f = first[letter];
    if (pi[i] == pi[i + 1]) {
      out[i] = Occurrence::Both;
    } else if (pi[i] == pi[f] && pi[i + 1] == pi[f + 1]) {
      out[i] = Occurrence::C1;
    } else {
      out[i] = Occurrence::C2;
    }
  }
  return out;
}

std::string to_string(Occurrence o) {
  switch (o) {
    case Occurrence::First: return "first";
    case Occurrence::C1: return "C1";
    case Occurrence::C2: return "C2";
    case Occurrence::Both: return "both";
  }
  return "?";
}

}  // namespace wigner
