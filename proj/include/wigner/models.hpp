#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "wigner/moments.hpp"

namespace wigner {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

enum class Variant {
  GaussianWigner,
  TriangularTwoPoint,
  SparseHomogeneous,
  SparseInhomogeneous,
  HeavyTailed,
  VarianceProfile,
  Band,
  Block,
};

std::string to_string(Variant v);
Variant variant_from_string(std::string_view s);

/// One random symmetric matrix ensemble. Entry (i, j) uses the grid point
/// x = (i + 1) / n, y = (j + 1) / n in expressions.
struct ModelSpec {
  Variant variant = Variant::GaussianWigner;
  int n = 100;
  std::uint64_t seed = kDefaultSeed;
  bool zero_diagonal = false;

  double sigma = 1.0;           // gaussian_wigner: N(0, sigma^2 / n)
  double atom = 1.0;            // triangular_twopoint: +-atom
  double lambda = 1.0;          // triangular_twopoint, sparse_homogeneous rate
  std::string p;                // sparse_inhomogeneous: Ber(min(1, p(x, y) / n))
  std::string p_limit;          // n -> infinity limit of p when p uses n
  double tail_index = 1.5;      // heavy_tailed: P(|x| >= u) = u^-alpha, u >= 1
  double scale = 1.0;
  std::optional<double> truncation;  // keep |x| / a_n <= B
  std::string sigma_profile;    // variance_profile: sigma(x, y) * base entry
  double alpha = 0.25;          // band half-width fraction
  bool periodic = true;
  std::vector<double> sizes;    // block proportions
  /// Row-major d x d sub-models for block; one entry (the base) otherwise.
  std::vector<ModelSpec> parts;

  const ModelSpec& base() const;
  /// Throws ValidationError for out-of-range parameters.
  void validate() const;
};

ModelSpec model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelSpec& spec);

/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string spec_hash(const ModelSpec& spec);

/// Four demonstration ensembles, labelled 'a' to 'd' (see docs/config.md).
ModelSpec figure_panel(char panel, int n, std::uint64_t seed = kDefaultSeed);

struct SampledMatrix {
  Eigen::MatrixXd data;
  ModelSpec spec;

  int n() const { return static_cast<int>(data.rows()); }
};

/// Deterministic in (spec, seed); independent of `threads`.
SampledMatrix sample(const ModelSpec& spec, int threads = 1);

/// Zeroes every entry with |x| > t.
SampledMatrix truncate(const SampledMatrix& m, double t);

struct EffectiveCumulants {
  GraphonFamily finite;  // n E[x_ij^{2k}] as a function of (i/n, j/n)
  GraphonFamily limit;
  std::optional<CumulantSchedule> limit_schedule;  // when the limit is constant
  /// Present for block models.
  std::vector<double> block_sizes;
  BlockCumulants block_limit;
};

/// Analytic n E[x^{2k}] per variant up to k = two_k_max / 2.
/// Throws DomainError for heavy tails without truncation.
EffectiveCumulants effective_cumulants(const ModelSpec& spec, int two_k_max);

}  // namespace wigner
