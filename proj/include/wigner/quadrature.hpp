#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wigner {

/// Value together with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Gauss-Legendre rule mapped to [0, 1], nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  /// Barycentric interpolation weights for the nodes.
  std::vector<double> bary;
};

/// Cached rule with `points` nodes (Newton iteration on the Legendre recurrence).
const GaussRule& gauss_legendre(int points);

/// Integral of f over [a, b] using a points-node rule on each panel between
/// consecutive `breaks` (which must be sorted and lie within [a, b]).
double integrate_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                        int points);

/// Polynomial interpolant through the nodes of one Gauss rule on [a, b].
double interpolate(const GaussRule& rule, double a, double b, std::span<const double> values,
                   double x);

struct QmcOptions {
  int points = 1 << 16;
  int replicates = 16;
  std::uint64_t seed = 0x5eed;
};

/// Randomly shifted Sobol' integration over the unit cube. The estimate is the
/// replicate mean; the error is the replicate standard error.
Estimate integrate_qmc(int dim, const std::function<double(std::span<const double>)>& f,
                       const QmcOptions& opts = {});

}  // namespace wigner
