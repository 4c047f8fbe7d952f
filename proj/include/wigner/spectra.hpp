#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "wigner/models.hpp"
#include "wigner/moments.hpp"

namespace wigner {

/// Eigenvalues sorted ascending.
struct ESD {
  std::vector<double> eigenvalues;
  std::string source;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Symmetric eigenproblem by Householder tridiagonalization and implicit
/// symmetric QR. Throws NumericError on non-finite input.
ESD eigenvalues(const Eigen::MatrixXd& a, std::string source = {});
ESD eigenvalues(const SampledMatrix& m);

struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenPairs eigen_decomposition(const Eigen::MatrixXd& a);

/// (1/n) tr(A^k) from powers of A, not from eigenvalues.
double empirical_moment(const Eigen::MatrixXd& a, int k);
/// (1/n) tr(A^k) for k = 1..k_max (index k - 1), sharing the powers.
std::vector<double> empirical_moments(const Eigen::MatrixXd& a, int k_max);

double esd_moment(const ESD& e, int k);

/// Quadratic Wasserstein distance between the two empirical measures: the
/// L2 distance of their quantile functions, exact for unequal sizes too.
double wasserstein2(const ESD& a, const ESD& b);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  /// counts / (total * width) per bin.
  std::vector<double> density() const;
};

/// `bins` = 0 picks the Freedman-Diaconis width.
Histogram histogram(const ESD& e, int bins = 0);

struct SimulationOptions {
  int threads = 1;
  /// Refuse when replicates * n^3 * (matrix products per replicate) exceeds this.
  double budget = 1e12;
};

/// Seed used by replicate r.
std::uint64_t replicate_seed(std::uint64_t seed, int r);

/// Replicate means and standard errors of (1/n) tr(A^k), k = 1..k_max.
MomentSeries eesd_moments(const ModelSpec& spec, int k_max, int replicates, std::uint64_t seed,
                          const SimulationOptions& opts = {});

}  // namespace wigner
