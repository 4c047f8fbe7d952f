#include "wigner/quadrature.hpp"

#include <boost/random/sobol.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>

#include "wigner/errors.hpp"

namespace wigner {

namespace {

// P_m(t) and its derivative via the three-term recurrence.
std::pair<double, double> legendre(int m, double t) {
  double p0 = 1.0;
  double p1 = t;
  for (int j = 2; j <= m; ++j) {
    const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, m * (t * p1 - p0) / (t * t - 1.0)};
}

GaussRule build_rule(int m) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  rule.bary.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    // Roots on [-1, 1] come out in descending order.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(m, t);
      const double dt = p / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    const double dp = legendre(m, t).second;
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    const std::size_t k = static_cast<std::size_t>(m - 1 - i);
    rule.nodes[k] = 0.5 * (1.0 + t);
    rule.weights[k] = 0.5 * w;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    rule.bary[k] = sign * std::sqrt((1.0 - t * t) * w);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int points) {
  if (points < 1 || points > 512) throw DomainError("Gauss-Legendre order must be in [1, 512]");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, build_rule(points)).first;
  return it->second;
}

double integrate_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                        int points) {
  const GaussRule& rule = gauss_legendre(points);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double h = breaks[p + 1] - a;
    if (h <= 0.0) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(a + h * rule.nodes[i]);
    total += h * s;
  }
  return total;
}

double interpolate(const GaussRule& rule, double a, double b, std::span<const double> values,
                   double x) {
  const double t = (b > a) ? (x - a) / (b - a) : 0.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double d = t - rule.nodes[i];
    if (d == 0.0) return values[i];
    const double c = rule.bary[i] / d;
    num += c * values[i];
    den += c;
  }
  return num / den;
}

Estimate integrate_qmc(int dim, const std::function<double(std::span<const double>)>& f,
                       const QmcOptions& opts) {
  if (dim < 1) throw DomainError("integration dimension must be positive");
  if (opts.points < 1 || opts.replicates < 2) {
    throw DomainError("quasi-Monte Carlo needs at least one point and two replicates");
  }
  std::mt19937_64 shifts(opts.seed);
  std::vector<double> x(static_cast<std::size_t>(dim));
  std::vector<std::uint32_t> raw(static_cast<std::size_t>(dim));
  std::vector<std::uint32_t> shift(static_cast<std::size_t>(dim));
  std::vector<double> means;
  means.reserve(static_cast<std::size_t>(opts.replicates));
  constexpr double scale = 1.0 / 4294967296.0;
  for (int r = 0; r < opts.replicates; ++r) {
    for (auto& s : shift) s = static_cast<std::uint32_t>(shifts() >> 32);
    boost::random::sobol_engine<std::uint32_t, 32> engine(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (int p = 0; p < opts.points; ++p) {
      engine.generate(raw.begin(), raw.end());
      for (std::size_t d = 0; d < raw.size(); ++d) {
        x[d] = (static_cast<double>(raw[d] ^ shift[d]) + 0.5) * scale;
      }
      const double v = f(x);
      if (!std::isfinite(v)) throw NumericError("non-finite integrand value");
      sum += v;
    }
    means.push_back(sum / opts.points);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= static_cast<double>(means.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(means.size()))};
}

}  // namespace wigner
