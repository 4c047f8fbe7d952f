#include "wigner/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "wigner/errors.hpp"
#include "wigner/rng.hpp"

namespace wigner {

namespace {

void require_finite(const Eigen::MatrixXd& a) {
  if (!a.allFinite()) throw NumericError("matrix has non-finite entries");
}

}  // namespace

ESD eigenvalues(const Eigen::MatrixXd& a, std::string source) {
  require_finite(a);
  ESD out;
  out.source = std::move(source);
  if (a.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration did not converge");
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

ESD eigenvalues(const SampledMatrix& m) {
  return eigenvalues(m.data, to_string(m.spec.variant) + " seed=" + std::to_string(m.spec.seed));
}

EigenPairs eigen_decomposition(const Eigen::MatrixXd& a) {
  require_finite(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<double> empirical_moments(const Eigen::MatrixXd& a, int k_max) {
  if (k_max < 1) throw DomainError("moment order must be at least 1");
  require_finite(a);
  const double n = static_cast<double>(a.rows());
  if (a.rows() == 0) throw DomainError("empty matrix");
  const int half = (k_max + 1) / 2;
  std::vector<Eigen::MatrixXd> powers{Eigen::MatrixXd(), a};
  for (int h = 2; h <= half; ++h) powers.emplace_back(powers.back() * a);
  std::vector<double> out;
  for (int k = 1; k <= k_max; ++k) {
    double tr;
    if (k == 1) {
      tr = a.trace();
    } else {
      // tr(A^a A^b) is the entrywise inner product for symmetric powers.
      tr = powers[static_cast<std::size_t>(k / 2)].cwiseProduct(powers[static_cast<std::size_t>((k + 1) / 2)]).sum();
    }
    if (!std::isfinite(tr)) throw NumericError("trace of A^" + std::to_string(k) + " overflowed");
    out.push_back(tr / n);
  }
  return out;
}

double empirical_moment(const Eigen::MatrixXd& a, int k) { return empirical_moments(a, k).back(); }

double esd_moment(const ESD& e, int k) {
  if (e.eigenvalues.empty()) throw DomainError("empty spectrum");
  double s = 0.0;
  for (double l : e.eigenvalues) s += std::pow(l, k);
  return s / static_cast<double>(e.size());
}

double wasserstein2(const ESD& a, const ESD& b) {
  if (a.eigenvalues.empty() || b.eigenvalues.empty()) throw DomainError("empty spectrum");
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  // Quantile functions are step functions on (i/na, (i+1)/na]; walk the
  // merged breakpoints in exact integer arithmetic (position * na * nb).
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t pos = 0;
  const std::uint64_t end = static_cast<std::uint64_t>(na) * nb;
  double acc = 0.0;
  while (pos < end) {
    const std::uint64_t next_a = static_cast<std::uint64_t>(i + 1) * nb;
    const std::uint64_t next_b = static_cast<std::uint64_t>(j + 1) * na;
    const std::uint64_t next = std::min(next_a, next_b);
    const double d = a.eigenvalues[i] - b.eigenvalues[j];
    acc += d * d * static_cast<double>(next - pos);
    pos = next;
    if (next == next_a) ++i;
    if (next == next_b) ++j;
  }
  return std::sqrt(acc / static_cast<double>(end));
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::vector<double> Histogram::density() const {
  std::vector<double> d(counts.size());
  const double t = static_cast<double>(total());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d[i] = counts[i] / (t * (edges[i + 1] - edges[i]));
  }
  return d;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Histogram histogram(const ESD& e, int bins) {
  if (bins < 0) throw DomainError("bin count must be non-negative");
  if (e.eigenvalues.empty()) throw DomainError("empty spectrum");
  std::vector<double> v = e.eigenvalues;
  std::sort(v.begin(), v.end());
  double lo = v.front();
  double hi = v.back();
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
    if (bins == 0) bins = 1;
  }
  if (bins == 0) {
    const double iqr = quantile(v, 0.75) - quantile(v, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(v.size()));
    if (width > 0.0) {
      bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    } else {
      bins = static_cast<int>(std::ceil(std::log2(static_cast<double>(v.size())))) + 1;
    }
  }
  Histogram h;
  const auto nb = static_cast<std::size_t>(bins);
  h.edges.resize(nb + 1);
  for (std::size_t i = 0; i <= nb; ++i) h.edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
  h.edges.back() = hi;
  h.counts.assign(nb, 0);
  for (double x : v) {
    auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - h.edges.begin());
    idx = idx == 0 ? 0 : std::min(idx - 1, nb - 1);
    ++h.counts[idx];
  }
  return h;
}

std::uint64_t replicate_seed(std::uint64_t seed, int r) {
  return splitmix64(seed + static_cast<std::uint64_t>(r));
}

MomentSeries eesd_moments(const ModelSpec& spec, int k_max, int replicates, std::uint64_t seed,
                          const SimulationOptions& opts) {
  if (replicates < 2) throw DomainError("at least two replicates are needed for a standard error");
  if (k_max < 1) throw DomainError("moment order must be at least 1");
  spec.validate();
  const double n = spec.n;
  const double products = std::max(1, (k_max + 1) / 2 - 1);
  const double work = replicates * n * n * n * products;
  if (work > opts.budget) {
    throw CapacityError("simulation needs about " + std::to_string(work) +
                            " flops, over the budget of " + std::to_string(opts.budget),
                        work);
  }
  std::vector<std::vector<double>> values(static_cast<std::size_t>(replicates));
  const int threads = std::max(1, std::min(opts.threads, replicates));
  auto work_fn = [&](int t) {
    for (int r = t; r < replicates; r += threads) {
      ModelSpec s = spec;
      s.seed = replicate_seed(seed, r);
      values[static_cast<std::size_t>(r)] = empirical_moments(sample(s).data, k_max);
    }
  };
  if (threads == 1) {
    work_fn(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work_fn, t);
  }
  MomentSeries out;
  out.description = to_string(spec.variant) + " n=" + std::to_string(spec.n) + " replicates=" +
                    std::to_string(replicates);
  for (int k = 1; k <= k_max; ++k) {
    double mean = 0.0;
    for (const auto& v : values) mean += v[static_cast<std::size_t>(k - 1)];
    mean /= replicates;
    double var = 0.0;
    for (const auto& v : values) {
      const double d = v[static_cast<std::size_t>(k - 1)] - mean;
      var += d * d;
    }
    var /= (replicates - 1);
    out.terms.push_back({k, mean, std::sqrt(var / replicates), Provenance::Simulation});
  }
  return out;
}

}  // namespace wigner
