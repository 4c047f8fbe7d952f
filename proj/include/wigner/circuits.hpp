#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wigner/word.hpp"

namespace wigner {

/// Exact non-negative fraction, always stored reduced.
class Rational {
 public:
  Rational(std::uint64_t num = 0, std::uint64_t den = 1);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::uint64_t num_;
  std::uint64_t den_;
};

struct CircuitCount {
  Word word;
  int n = 0;
  std::uint64_t count = 0;
  Rational ratio;  // count / n^(b+1)
};

struct CircuitOptions {
  /// Refuse when the number of generating-vertex choices n^(b+1) exceeds this.
  double budget = 1e9;
  int threads = 1;
};

/// Vertices pi(0..k) with pi(0) == pi(k), values in [0, n).
using Circuit = std::vector<int>;

/// Whether `pi` lies in the class of `w`: positions share a letter exactly
/// when their edges coincide as unordered pairs.
bool in_circuit_class(const Word& w, std::span<const int> pi);

/// Visits every circuit of the class by backtracking over generating vertices;
/// other vertices are forced by the repeated edge. Throws CapacityError when
/// n^(b+1) exceeds the budget.
void for_each_circuit(const Word& w, int n, const std::function<void(std::span<const int>)>& visit,
                      const CircuitOptions& opts = {});

CircuitCount count_circuits(const Word& w, int n, const CircuitOptions& opts = {});

std::vector<CircuitCount> ratio_table(const Word& w, std::span<const int> n_values,
                                      const CircuitOptions& opts = {});

enum class Occurrence {
  First,  // first appearance of the letter
  C1,     // repeats the first edge in the same orientation
  C2,     // repeats it reversed
  Both,   // self-loop edge; both orientations coincide
};

/// Per-position labels. Throws DomainError unless `pi` is in the class of `w`.
std::vector<Occurrence> classify_occurrences(const Word& w, std::span<const int> pi);

std::string to_string(Occurrence o);

}  // namespace wigner
