#include "wigner/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wigner/errors.hpp"

namespace wigner {

double PiecewiseConstant::at(double x, double y) const {
  auto cell = [&](double t) {
    auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, t);
    return static_cast<std::size_t>(it - edges.begin() - 1);
  };
  return values[cell(x)][cell(y)];
}

namespace {

Discontinuities symmetrized(Discontinuities d) {
  Discontinuities out;
  out.unresolved = d.unresolved;
  auto push_cut = [&](double c) {
    if (c > 0.0 && c < 1.0) out.cuts.push_back(c);
  };
  auto push_line = [&](Line l) {
    for (const auto& e : out.lines) {
      if (std::abs(e.slope - l.slope) < 1e-15 && std::abs(e.intercept - l.intercept) < 1e-15) return;
    }
    out.lines.push_back(l);
  };
  for (double c : d.cuts) push_cut(c);
  for (const Line& l : d.lines) {
    if (l.slope == 0.0) {
      push_cut(l.intercept);
      continue;
    }
    push_line(l);
    push_line({1.0 / l.slope, -l.intercept / l.slope});
  }
  std::sort(out.cuts.begin(), out.cuts.end());
  out.cuts.erase(std::unique(out.cuts.begin(), out.cuts.end()), out.cuts.end());
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

PiecewiseConstant merge_cells(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  PiecewiseConstant out;
  out.edges = a.edges;
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  const std::size_t m = out.edges.size() - 1;
  out.values.assign(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double x = 0.5 * (out.edges[i] + out.edges[i + 1]);
    for (std::size_t j = 0; j < m; ++j) {
      const double y = 0.5 * (out.edges[j] + out.edges[j + 1]);
      out.values[i][j] = a.at(x, y) * b.at(x, y);
    }
  }
  return out;
}

}  // namespace

Graphon::Graphon() : f_([](double, double) { return 0.0; }), description_("0"), zero_(true),
                     constant_(0.0) {}

Graphon::Graphon(Fn f, double bound, std::string description, Discontinuities jumps)
    : f_(std::move(f)), bound_(bound), description_(std::move(description)),
      jumps_(symmetrized(std::move(jumps))) {}

Graphon Graphon::constant(double c) {
  if (!std::isfinite(c)) throw NumericError("non-finite graphon constant");
  if (c == 0.0) return Graphon();
  Graphon g([c](double, double) { return c; }, std::abs(c), format_number(c));
  g.constant_ = c;
  return g;
}

Graphon Graphon::expression(const Expression& e, double n) {
  Fn f = [e, n](double x, double y) { return e(x, y, n); };
  const double b = sampled_bound(f);
  std::string desc = e.source();
  if (e.uses_n()) desc += " [n=" + format_number(n) + "]";
  return Graphon(std::move(f), b, desc, e.discontinuities());
}

Graphon Graphon::expression(std::string_view source, double n) {
  return expression(Expression::parse(source), n);
}

Graphon Graphon::grid(PiecewiseConstant cells) {
  const auto& e = cells.edges;
  const std::size_t m = cells.values.size();
  if (e.size() < 2 || e.size() != m + 1 || e.front() != 0.0 || e.back() != 1.0) {
    throw ValidationError("grid edges must run from 0 to 1 with one more edge than rows");
  }
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (!(e[i] < e[i + 1])) throw ValidationError("grid edges must be strictly increasing");
  }
  double bound = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (cells.values[i].size() != m) throw ValidationError("grid values must be square");
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(cells.values[i][j])) throw NumericError("non-finite grid value");
      if (cells.values[i][j] != cells.values[j][i]) {
        throw ValidationError("grid values must be symmetric");
      }
      bound = std::max(bound, std::abs(cells.values[i][j]));
    }
  }
  Discontinuities d;
  d.cuts.assign(e.begin() + 1, e.end() - 1);
  auto shared = std::make_shared<const PiecewiseConstant>(cells);
  Graphon g([shared](double x, double y) { return shared->at(x, y); }, bound,
            "grid(" + std::to_string(m) + "x" + std::to_string(m) + ")", std::move(d));
  const double first = cells.values[0][0];
  const bool uniform = std::all_of(cells.values.begin(), cells.values.end(), [&](const auto& row) {
    return std::all_of(row.begin(), row.end(), [&](double v) { return v == first; });
  });
  if (uniform) return constant(first);
  g.cells_ = std::move(cells);
  return g;
}

Graphon Graphon::band(double alpha, bool periodic) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw DomainError("band width must lie in (0, 1/2]");
  Discontinuities d;
  d.lines = {{1.0, alpha}, {1.0, -alpha}};
  if (periodic) {
    d.lines.push_back({1.0, 1.0 - alpha});
    d.lines.push_back({1.0, alpha - 1.0});
  }
  Fn f = [alpha, periodic](double x, double y) {
    const double t = std::abs(x - y);
    return (t <= alpha || (periodic && t >= 1.0 - alpha)) ? 1.0 : 0.0;
  };
  return Graphon(std::move(f), 1.0,
                 std::string(periodic ? "periodic_band(" : "band(") + format_number(alpha) + ")",
                 std::move(d));
}

Graphon operator*(const Graphon& a, const Graphon& b) {
  if (a.zero_ || b.zero_) return Graphon();
  if (a.constant_ && b.constant_) return Graphon::constant(*a.constant_ * *b.constant_);
  if (a.constant_ && *a.constant_ == 1.0) return b;
  if (b.constant_ && *b.constant_ == 1.0) return a;
  if (a.cells_ && b.cells_) return Graphon::grid(merge_cells(*a.cells_, *b.cells_));
  if (a.cells_ && b.constant_) {
    PiecewiseConstant c = *a.cells_;
    for (auto& row : c.values) {
      for (auto& v : row) v *= *b.constant_;
    }
    return Graphon::grid(std::move(c));
  }
  if (b.cells_ && a.constant_) return b * a;
  Discontinuities d = a.jumps_;
  d.merge(b.jumps_);
  return Graphon([fa = a.f_, fb = b.f_](double x, double y) { return fa(x, y) * fb(x, y); },
                 a.bound_ * b.bound_, "(" + a.description_ + ")*(" + b.description_ + ")", d);
}

Graphon Graphon::pow(int p) const {
  if (p < 0) throw DomainError("negative graphon power");
  if (p == 0) return constant(1.0);
  if (zero_) return Graphon();
  if (constant_) return constant(std::pow(*constant_, p));
  if (cells_) {
    PiecewiseConstant c = *cells_;
    for (auto& row : c.values) {
      for (auto& v : row) v = std::pow(v, p);
    }
    return grid(std::move(c));
  }
  return Graphon([f = f_, p](double x, double y) { return std::pow(f(x, y), p); },
                 std::pow(bound_, p), "(" + description_ + ")^" + std::to_string(p), jumps_);
}

bool is_symmetric(const Graphon& g, int grid, double tol) {
  for (int i = 0; i <= grid; ++i) {
    const double x = (i + 0.37) / (grid + 1.0);
    for (int j = 0; j < i; ++j) {
      const double y = (j + 0.61) / (grid + 1.0);
      if (std::abs(g(x, y) - g(y, x)) > tol) return false;
    }
  }
  return true;
}

double sampled_bound(const Graphon::Fn& f, int grid) {
  double b = 0.0;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const double v = f(static_cast<double>(i) / grid, static_cast<double>(j) / grid);
      if (!std::isfinite(v)) throw NumericError("graphon is not finite on the unit square");
      b = std::max(b, std::abs(v));
    }
  }
  return b;
}

Graphon GraphonFamily::member(int k) const {
  if (auto it = members_.find(k); it != members_.end()) return it->second;
  if (rule_) return rule_(k);
  return Graphon();
}

GraphonFamily GraphonFamily::transformed(std::function<Graphon(int, const Graphon&)> f,
                                         std::string description) const {
  GraphonFamily out(std::move(description));
  for (const auto& [k, g] : members_) out.members_[k] = f(k, g);
  if (rule_) {
    out.rule_ = [rule = rule_, f](int k) { return f(k, rule(k)); };
  } else {
    out.rule_ = [f](int k) { return f(k, Graphon()); };
  }
  return out;
}

}  // namespace wigner
