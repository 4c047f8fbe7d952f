#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace wigner {

/// y = slope * x + intercept
struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Where a function of (x, y) on the unit square may jump.
struct Discontinuities {
  std::vector<double> cuts;  // x = c, and y = c
  std::vector<Line> lines;
  /// Some indicator has a boundary that is not a straight line.
  bool unresolved = false;

  void merge(const Discontinuities& other);
};

/// Arithmetic over x, y and the matrix size n.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := atom ('^' unary)?
///   atom    := number | x | y | n | pi | e | '(' expr ')'
///            | fn '(' expr ')'          fn in sin cos exp log sqrt abs
///            | min '(' expr ',' expr ')' | max '(' expr ',' expr ')'
///            | ind '(' expr cmp expr ')'  cmp in < <= > >=
class Expression {
 public:
  static Expression parse(std::string_view source);

  double operator()(double x, double y, double n = 0.0) const;

  const std::string& source() const noexcept { return source_; }
  bool uses_n() const noexcept;

  /// Boundaries of every ind(...) term. Affine comparisons give lines or cuts;
  /// |affine| against a constant gives two of them; anything else is flagged.
  Discontinuities discontinuities() const;

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const std::vector<Node>> nodes_;
  int root_ = 0;
};

}  // namespace wigner
