#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wigner/graphon.hpp"
#include "wigner/quadrature.hpp"
#include "wigner/trees.hpp"

namespace wigner {

/// C_{2k} keyed by k. Entries not listed come from `rule` when one is set.
struct CumulantSchedule {
  std::map<int, double> values;
  std::function<double(int)> rule;
  std::string description;

  bool has(int k) const { return values.count(k) || static_cast<bool>(rule); }
  /// Throws DomainError when C_{2k} is not available.
  double at(int k) const;

  /// C_2 = variance, all higher cumulants zero.
  static CumulantSchedule semicircle(double variance = 1.0);
  /// C_{2k} = lambda for every k.
  static CumulantSchedule sparse(double lambda);
};

enum class Provenance { Exact, Quadrature, MonteCarloIntegral, Simulation };

std::string to_string(Provenance p);

struct MomentTerm {
  int order = 0;  // 2k for limiting moments, k for empirical ones
  double value = 0.0;
  double error = 0.0;
  Provenance provenance = Provenance::Exact;
};

struct MomentSeries {
  std::string description;
  std::vector<MomentTerm> terms;

  const MomentTerm* find(int order) const;
  /// Values of the even-order terms 2, 4, ... in order.
  std::vector<double> even_values() const;
};

struct QuadratureConfig {
  enum class Method { Auto, Gauss, Qmc };
  Method method = Method::Auto;
  /// Gauss-Legendre nodes per panel; the error estimate reruns with half as many.
  int points = 32;
  QmcOptions qmc;
  int threads = 1;
};

/// Number of SS(two_k) words with each multiset of half block sizes
/// (sorted ascending). Exact integers.
const std::map<std::vector<int>, std::uint64_t>& ss_block_profiles(int two_k);

/// Sum over SS(two_k) of the product of C_{|V|} over blocks. Zero for odd input.
double moment_constant(const CumulantSchedule& c, int two_k);

/// Integral over [0,1]^{b+1} of the product, over colors j >= 1, of
/// g_{2 k_j}(x_parent(j), x_j), where k_j is the number of nodes of color j.
MomentTerm homomorphism_density(const ColorSkeleton& s, const GraphonFamily& g,
                                const QuadratureConfig& cfg = {});
MomentTerm homomorphism_density(const ColoredRootedTree& t, const GraphonFamily& g,
                                const QuadratureConfig& cfg = {});

/// Sum of homomorphism densities over all trees with two_k / 2 edges. Terms are
/// reduced in canonical word order so the result does not depend on threads.
MomentTerm moment_graphon(const GraphonFamily& g, int two_k, const QuadratureConfig& cfg = {});

struct SparseMoment {
  std::map<int, std::uint64_t> coefficients;  // b -> |SS_b(two_k)|
  double value = 0.0;
};

SparseMoment moment_sparse(double lambda, int two_k);

/// Graphon moment with every member multiplied by the band indicator.
MomentTerm moment_band(const GraphonFamily& g, double alpha, bool periodic, int two_k,
                       const QuadratureConfig& cfg = {});

/// C^{(m,l)}_{2k} as a symmetric d x d matrix per k.
using BlockCumulants = std::map<int, Eigen::MatrixXd>;

/// Exact moment for a block matrix with relative block sizes `alphas`.
double moment_block(std::span<const double> alphas, const BlockCumulants& c, int two_k);

/// g_{2k} = sigma^{2k} C_{2k}.
MomentTerm moment_variance_profile(const Graphon& sigma, const CumulantSchedule& c, int two_k,
                                   const QuadratureConfig& cfg = {});

MomentSeries constant_series(const CumulantSchedule& c, int two_k_max);
MomentSeries graphon_series(const GraphonFamily& g, int two_k_max, const QuadratureConfig& cfg = {});

struct CarlemanReport {
  std::vector<double> alpha;         // alpha_{2k}, k = 1..K
  std::vector<double> partial_sums;  // running sum of alpha_{2k}^{-1/(2k)}
  std::vector<double> alpha_ss;      // same sums restricted to SS(2k), shorter
  std::vector<double> partial_sums_ss;
  bool infinite = false;
  double tail_exponent = 0.0;        // terms behave like k^{-p}
  std::string trend;
};

/// `bounds[k-1]` is M_{2k}. Odd bounds are zero.
CarlemanReport carleman_partial_sum(std::span<const double> bounds, int K, int ss_max_k = 6);
CarlemanReport carleman_partial_sum(const GraphonFamily& g, int K, int ss_max_k = 6);

struct HankelCheck {
  bool psd = true;
  double min_eigenvalue = 0.0;
};

/// Positive semidefiniteness of [m_{i+j}] for the symmetric moment sequence
/// m_0 = 1, m_{2k} = even_moments[k-1], odd moments zero.
HankelCheck hankel_check(std::span<const double> even_moments, double tol = 1e-8);

}  // namespace wigner
