#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wigner/expression.hpp"

namespace wigner {

/// Values on a tensor grid: value[m][l] on [edges[m], edges[m+1]) x [edges[l], edges[l+1]).
struct PiecewiseConstant {
  std::vector<double> edges;
  std::vector<std::vector<double>> values;

  std::size_t cells() const noexcept { return values.size(); }
  double at(double x, double y) const;
};

/// Bounded function on [0, 1]^2 with its known jump set. Jump sets are kept
/// closed under the swap (x, y) -> (y, x).
class Graphon {
 public:
  using Fn = std::function<double(double, double)>;

  Graphon();  // identically zero
  Graphon(Fn f, double bound, std::string description, Discontinuities jumps = {});

  static Graphon constant(double c);
  /// Finite size `n` is substituted for the variable n.
  static Graphon expression(const Expression& e, double n = 0.0);
  static Graphon expression(std::string_view source, double n = 0.0);
  static Graphon grid(PiecewiseConstant cells);
  /// Indicator of |x - y| <= alpha, or additionally |x - y| >= 1 - alpha when periodic.
  static Graphon band(double alpha, bool periodic);

  double operator()(double x, double y) const { return f_(x, y); }

  bool is_zero() const noexcept { return zero_; }
  std::optional<double> constant_value() const noexcept { return constant_; }
  const std::optional<PiecewiseConstant>& cells() const noexcept { return cells_; }
  const Discontinuities& jumps() const noexcept { return jumps_; }
  double bound() const noexcept { return bound_; }
  const std::string& description() const noexcept { return description_; }

  void set_bound(double b) { bound_ = b; }

  friend Graphon operator*(const Graphon& a, const Graphon& b);
  Graphon pow(int p) const;

 private:
  Fn f_;
  double bound_ = 0.0;
  std::string description_;
  Discontinuities jumps_;
  bool zero_ = false;
  std::optional<double> constant_;
  std::optional<PiecewiseConstant> cells_;
};

/// Sampled check of g(x, y) == g(y, x) on a grid x residual tolerance.
bool is_symmetric(const Graphon& g, int grid = 33, double tol = 1e-12);

/// Largest |g| on a sampling grid, used when no bound is declared.
double sampled_bound(const Graphon::Fn& f, int grid = 65);

/// g_{2k} for k = 1, 2, ...; members not listed come from the fallback rule,
/// or are zero without one.
class GraphonFamily {
 public:
  GraphonFamily() = default;
  explicit GraphonFamily(std::string description) : description_(std::move(description)) {}

  void set(int k, Graphon g) { members_[k] = std::move(g); }
  void set_rule(std::function<Graphon(int)> rule) { rule_ = std::move(rule); }

  Graphon member(int k) const;
  const std::string& description() const noexcept { return description_; }
  void set_description(std::string d) { description_ = std::move(d); }

  /// Every member multiplied pointwise by the k-th factor.
  GraphonFamily transformed(std::function<Graphon(int, const Graphon&)> f,
                            std::string description) const;

 private:
  std::string description_;
  std::map<int, Graphon> members_;
  std::function<Graphon(int)> rule_;
};

}  // namespace wigner
