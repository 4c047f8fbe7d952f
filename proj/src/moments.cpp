#include "wigner/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "wigner/combinatorics.hpp"
#include "wigner/errors.hpp"

namespace wigner {

double CumulantSchedule::at(int k) const {
  if (auto it = values.find(k); it != values.end()) return it->second;
  if (rule) return rule(k);
  throw DomainError("cumulant C_" + std::to_string(2 * k) + " is not available");
}

CumulantSchedule CumulantSchedule::semicircle(double variance) {
  return {{{1, variance}}, [](int) { return 0.0; }, "semicircle"};
}

CumulantSchedule CumulantSchedule::sparse(double lambda) {
  return {{}, [lambda](int) { return lambda; }, "sparse"};
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Exact: return "exact";
    case Provenance::Quadrature: return "quadrature";
    case Provenance::MonteCarloIntegral: return "monte-carlo-integral";
    case Provenance::Simulation: return "simulation";
  }
  return "?";
}

const MomentTerm* MomentSeries::find(int order) const {
  for (const auto& t : terms) {
    if (t.order == order) return &t;
  }
  return nullptr;
}

std::vector<double> MomentSeries::even_values() const {
  std::vector<double> out;
  for (int order = 2;; order += 2) {
    const MomentTerm* t = find(order);
    if (!t) return out;
    out.push_back(t->value);
  }
}

const std::map<std::vector<int>, std::uint64_t>& ss_block_profiles(int two_k) {
  static std::mutex mu;
  static std::map<int, std::map<std::vector<int>, std::uint64_t>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(two_k);
  if (it != cache.end()) return it->second;
  std::map<std::vector<int>, std::uint64_t> profiles;
  for_each_tree_walk(two_k, [&](std::span<const Word::Letter>, const ColorSkeleton& s) {
    std::vector<int> key(s.multiplicity.begin() + 1, s.multiplicity.end());
    std::sort(key.begin(), key.end());
    ++profiles[key];
  });
  return cache.emplace(two_k, std::move(profiles)).first->second;
}

double moment_constant(const CumulantSchedule& c, int two_k) {
  if (two_k <= 0 || two_k % 2 != 0) return 0.0;
  for (int k = 1; k <= two_k / 2; ++k) c.at(k);
  double total = 0.0;
  for (const auto& [profile, count] : ss_block_profiles(two_k)) {
    double term = static_cast<double>(count);
    for (int k : profile) term *= c.at(k);
    total += term;
  }
  return total;
}

namespace {

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x - out.back() > 1e-13) out.push_back(x);
  }
  out.back() = std::max(out.back(), 1.0);  // keep the right endpoint exact
  v = std::move(out);
}

// Piecewise polynomial on [0, 1]: `points` Gauss nodes per panel.
struct PiecewiseFn {
  std::vector<double> breaks;
  std::vector<double> values;
  int points = 0;

  double operator()(double x) const {
    auto it = std::upper_bound(breaks.begin() + 1, breaks.end() - 1, x);
    const std::size_t p = static_cast<std::size_t>(it - breaks.begin() - 1);
    const std::span<const double> v(values.data() + p * static_cast<std::size_t>(points),
                                    static_cast<std::size_t>(points));
    return interpolate(gauss_legendre(points), breaks[p], breaks[p + 1], v, x);
  }
};

using FnPtr = std::shared_ptr<const PiecewiseFn>;

// Tree-structured Gauss-Legendre evaluation: each color carries
// h_j(x) = int g_{2k_j}(x, y) prod_{children c} h_c(y) dy
// as an interpolant, so the cost grows linearly with the number of colors.
class TreeQuadrature {
 public:
  TreeQuadrature(const GraphonFamily& g, int points) : family_(g), points_(points) {}

  double density(const ColorSkeleton& s) {
    const auto kids = s.children();
    std::vector<std::string> keys(static_cast<std::size_t>(s.colors()));
    std::vector<FnPtr> fns(static_cast<std::size_t>(s.colors()));
    // Colors are numbered by first appearance, so children come after parents.
    for (int j = s.colors() - 1; j >= 1; --j) {
      std::vector<std::string> child_keys;
      std::vector<FnPtr> child_fns;
      for (int c : kids[static_cast<std::size_t>(j)]) {
        child_keys.push_back(keys[static_cast<std::size_t>(c)]);
        child_fns.push_back(fns[static_cast<std::size_t>(c)]);
      }
      std::string key = subtree_key(s.multiplicity[static_cast<std::size_t>(j)], child_keys);
      auto it = memo_.find(key);
      if (it == memo_.end()) {
        const Graphon& g = member(s.multiplicity[static_cast<std::size_t>(j)]);
        it = memo_.emplace(key, build(g, child_fns)).first;
      }
      keys[static_cast<std::size_t>(j)] = std::move(key);
      fns[static_cast<std::size_t>(j)] = it->second;
    }
    std::vector<std::string> root_keys;
    std::vector<FnPtr> root_fns;
    for (int c : kids[0]) {
      root_keys.push_back(keys[static_cast<std::size_t>(c)]);
      root_fns.push_back(fns[static_cast<std::size_t>(c)]);
    }
    const std::string key = subtree_key(0, root_keys);
    if (auto it = root_memo_.find(key); it != root_memo_.end()) return it->second;
    std::vector<double> breaks{0.0, 1.0};
    for (const auto& f : root_fns) breaks.insert(breaks.end(), f->breaks.begin(), f->breaks.end());
    sort_unique(breaks);
    const double v = integrate_panels(
        [&](double x) {
          double p = 1.0;
          for (const auto& f : root_fns) p *= (*f)(x);
          return p;
        },
        breaks, points_);
    root_memo_.emplace(key, v);
    return v;
  }

 private:
  static std::string subtree_key(int k, std::vector<std::string> child_keys) {
    std::sort(child_keys.begin(), child_keys.end());
    std::string key = std::to_string(k) + "(";
    for (const auto& c : child_keys) key += c + ",";
    return key + ")";
  }

  const Graphon& member(int k) {
    auto it = members_.find(k);
    if (it == members_.end()) it = members_.emplace(k, family_.member(k)).first;
    return it->second;
  }

  FnPtr build(const Graphon& g, const std::vector<FnPtr>& kids) const {
    const Discontinuities& jumps = g.jumps();
    std::vector<double> ybase{0.0, 1.0};
    ybase.insert(ybase.end(), jumps.cuts.begin(), jumps.cuts.end());
    for (const auto& f : kids) ybase.insert(ybase.end(), f->breaks.begin(), f->breaks.end());
    sort_unique(ybase);

    std::vector<double> xbreaks{0.0, 1.0};
    xbreaks.insert(xbreaks.end(), jumps.cuts.begin(), jumps.cuts.end());
    for (const Line& l : jumps.lines) {
      for (double h : ybase) {
        const double x = (h - l.intercept) / l.slope;
        if (x > 0.0 && x < 1.0) xbreaks.push_back(x);
      }
      for (const Line& o : jumps.lines) {
        if (o.slope == l.slope) continue;
        const double x = (o.intercept - l.intercept) / (l.slope - o.slope);
        if (x > 0.0 && x < 1.0) xbreaks.push_back(x);
      }
    }
    sort_unique(xbreaks);

    auto phi = [&](double y) {
      double p = 1.0;
      for (const auto& f : kids) p *= (*f)(y);
      return p;
    };
    const GaussRule& rule = gauss_legendre(points_);
    std::vector<double> phi_base;
    if (jumps.lines.empty()) {
      for (std::size_t p = 0; p + 1 < ybase.size(); ++p) {
        const double h = ybase[p + 1] - ybase[p];
        for (double t : rule.nodes) phi_base.push_back(phi(ybase[p] + h * t));
      }
    }

    auto out = std::make_shared<PiecewiseFn>();
    out->breaks = xbreaks;
    out->points = points_;
    std::vector<double> ys;
    for (std::size_t px = 0; px + 1 < xbreaks.size(); ++px) {
      const double a = xbreaks[px];
      const double hx = xbreaks[px + 1] - a;
      for (double tx : rule.nodes) {
        const double x = a + hx * tx;
        double total = 0.0;
        if (jumps.lines.empty()) {
          std::size_t idx = 0;
          for (std::size_t p = 0; p + 1 < ybase.size(); ++p) {
            const double h = ybase[p + 1] - ybase[p];
            double s = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i, ++idx) {
              s += rule.weights[i] * g(x, ybase[p] + h * rule.nodes[i]) * phi_base[idx];
            }
            total += h * s;
          }
        } else {
          ys = ybase;
          for (const Line& l : jumps.lines) {
            const double y = l.slope * x + l.intercept;
            if (y > 0.0 && y < 1.0) ys.push_back(y);
          }
          std::sort(ys.begin(), ys.end());
          total = integrate_panels([&](double y) { return g(x, y) * phi(y); }, ys, points_);
        }
        if (!std::isfinite(total)) throw NumericError("non-finite value in " + g.description());
        out->values.push_back(total);
      }
    }
    return out;
  }

  const GraphonFamily& family_;
  int points_;
  std::map<int, Graphon> members_;
  std::map<std::string, FnPtr> memo_;
  std::map<std::string, double> root_memo_;
};

struct Members {
  std::vector<Graphon> by_k;  // index k, 1-based
  bool any_zero_needed(const ColorSkeleton& s) const {
    for (int j = 1; j < s.colors(); ++j) {
      if (by_k[static_cast<std::size_t>(s.multiplicity[static_cast<std::size_t>(j)])].is_zero()) {
        return true;
      }
    }
    return false;
  }
};

Members members_up_to(const GraphonFamily& g, int k_max) {
  Members m;
  m.by_k.resize(static_cast<std::size_t>(k_max) + 1);
  for (int k = 1; k <= k_max; ++k) m.by_k[static_cast<std::size_t>(k)] = g.member(k);
  return m;
}

MomentTerm density_qmc(const ColorSkeleton& s, const Members& m, const QmcOptions& opts) {
  const int dim = s.colors();
  const Estimate e = integrate_qmc(
      dim,
      [&](std::span<const double> x) {
        double p = 1.0;
        for (int j = 1; j < dim; ++j) {
          const auto& g = m.by_k[static_cast<std::size_t>(s.multiplicity[static_cast<std::size_t>(j)])];
          p *= g(x[static_cast<std::size_t>(s.parent[static_cast<std::size_t>(j)])],
                 x[static_cast<std::size_t>(j)]);
        }
        return p;
      },
      opts);
  return {0, e.value, e.error, Provenance::MonteCarloIntegral};
}

bool use_qmc(const Members& m, const QuadratureConfig& cfg) {
  if (cfg.method == QuadratureConfig::Method::Qmc) return true;
  if (cfg.method == QuadratureConfig::Method::Gauss) return false;
  for (std::size_t k = 1; k < m.by_k.size(); ++k) {
    if (m.by_k[k].jumps().unresolved) return true;
  }
  return false;
}

int coarse_points(int points) { return std::max(1, points / 2); }

}  // namespace

MomentTerm homomorphism_density(const ColorSkeleton& s, const GraphonFamily& g,
                                const QuadratureConfig& cfg) {
  int k_max = 0;
  for (int j = 1; j < s.colors(); ++j) k_max = std::max(k_max, s.multiplicity[static_cast<std::size_t>(j)]);
  const Members m = members_up_to(g, k_max);
  const int two_k = [&] {
    int e = 0;
    for (int j = 1; j < s.colors(); ++j) e += s.multiplicity[static_cast<std::size_t>(j)];
    return 2 * e;
  }();
  if (m.any_zero_needed(s)) return {two_k, 0.0, 0.0, Provenance::Exact};
  if (use_qmc(m, cfg)) {
    MomentTerm t = density_qmc(s, m, cfg.qmc);
    t.order = two_k;
    return t;
  }
  TreeQuadrature fine(g, cfg.points);
  TreeQuadrature coarse(g, coarse_points(cfg.points));
  const double v = fine.density(s);
  return {two_k, v, std::abs(v - coarse.density(s)), Provenance::Quadrature};
}

MomentTerm homomorphism_density(const ColoredRootedTree& t, const GraphonFamily& g,
                                const QuadratureConfig& cfg) {
  if (!validate_tree(t).valid()) throw ValidationError("tree violates the coloring properties");
  return homomorphism_density(color_skeleton(t), g, cfg);
}

MomentTerm moment_graphon(const GraphonFamily& g, int two_k, const QuadratureConfig& cfg) {
  MomentTerm result{two_k, 0.0, 0.0, Provenance::Exact};
  if (two_k <= 0 || two_k % 2 != 0) return result;
  const Members m = members_up_to(g, two_k / 2);

  std::vector<std::pair<Word, ColorSkeleton>> words;
  for_each_tree_walk(two_k, [&](std::span<const Word::Letter> letters, const ColorSkeleton& s) {
    if (m.any_zero_needed(s)) return;
    words.emplace_back(WordBuilder::adopt({letters.begin(), letters.end()}, s.colors() - 1), s);
  });
  std::sort(words.begin(), words.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (words.empty()) return result;

  const bool qmc = use_qmc(m, cfg);
  std::vector<MomentTerm> terms(words.size());
  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(words.size())));
  auto work = [&](int t) {
    TreeQuadrature fine(g, cfg.points);
    TreeQuadrature coarse(g, coarse_points(cfg.points));
    for (std::size_t i = static_cast<std::size_t>(t); i < words.size(); i += static_cast<std::size_t>(threads)) {
      const ColorSkeleton& s = words[i].second;
      if (qmc) {
        terms[i] = density_qmc(s, m, cfg.qmc);
      } else {
        const double v = fine.density(s);
        terms[i] = {two_k, v, std::abs(v - coarse.density(s)), Provenance::Quadrature};
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  result.provenance = qmc ? Provenance::MonteCarloIntegral : Provenance::Quadrature;
  double var = 0.0;
  for (const auto& t : terms) {
    result.value += t.value;
    if (qmc) {
      var += t.error * t.error;
    } else {
      result.error += t.error;
    }
  }
  if (qmc) result.error = std::sqrt(var);
  return result;
}

SparseMoment moment_sparse(double lambda, int two_k) {
  if (lambda < 0.0) throw DomainError("sparse rate must be non-negative");
  SparseMoment out;
  out.coefficients = count_ss_by_blocks(two_k);
  for (const auto& [b, count] : out.coefficients) {
    out.value += static_cast<double>(count) * std::pow(lambda, b);
  }
  return out;
}

MomentTerm moment_band(const GraphonFamily& g, double alpha, bool periodic, int two_k,
                       const QuadratureConfig& cfg) {
  const Graphon band = Graphon::band(alpha, periodic);
  const GraphonFamily banded = g.transformed(
      [band](int, const Graphon& member) { return band * member; },
      band.description() + " x " + g.description());
  return moment_graphon(banded, two_k, cfg);
}

double moment_block(std::span<const double> alphas, const BlockCumulants& c, int two_k) {
  const std::size_t d = alphas.size();
  if (d == 0) throw ValidationError("at least one block is required");
  double sum = 0.0;
  for (double a : alphas) {
    if (!(a > 0.0)) throw ValidationError("block proportions must be positive");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("block proportions must sum to 1");
  if (two_k <= 0 || two_k % 2 != 0) return 0.0;
  for (int k = 1; k <= two_k / 2; ++k) {
    auto it = c.find(k);
    if (it == c.end()) {
      throw DomainError("block cumulant C_" + std::to_string(2 * k) + " is not available");
    }
    const Eigen::MatrixXd& m = it->second;
    if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d) {
      throw ValidationError("block cumulant matrix has the wrong shape");
    }
    if (!(m - m.transpose()).isZero(0.0)) {
      throw ValidationError("block cumulant C_" + std::to_string(2 * k) + " is not symmetric");
    }
  }
  const Eigen::Map<const Eigen::VectorXd> w(alphas.data(), static_cast<Eigen::Index>(d));
  double total = 0.0;
  for_each_tree_walk(two_k, [&](std::span<const Word::Letter>, const ColorSkeleton& s) {
    const auto kids = s.children();
    std::vector<Eigen::VectorXd> f(static_cast<std::size_t>(s.colors()));
    for (int j = s.colors() - 1; j >= 0; --j) {
      Eigen::VectorXd prod = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d));
      for (int ch : kids[static_cast<std::size_t>(j)]) prod.array() *= f[static_cast<std::size_t>(ch)].array();
      if (j == 0) {
        total += w.dot(prod);
      } else {
        const Eigen::MatrixXd& m = c.at(s.multiplicity[static_cast<std::size_t>(j)]);
        f[static_cast<std::size_t>(j)] = m * w.cwiseProduct(prod);
      }
    }
  });
  return total;
}

MomentTerm moment_variance_profile(const Graphon& sigma, const CumulantSchedule& c, int two_k,
                                   const QuadratureConfig& cfg) {
  GraphonFamily g("variance profile " + sigma.description());
  g.set_rule([sigma, c](int k) { return sigma.pow(2 * k) * Graphon::constant(c.at(k)); });
  return moment_graphon(g, two_k, cfg);
}

MomentSeries constant_series(const CumulantSchedule& c, int two_k_max) {
  MomentSeries s{c.description, {}};
  for (int t = 2; t <= two_k_max; t += 2) {
    s.terms.push_back({t, moment_constant(c, t), 0.0, Provenance::Exact});
  }
  return s;
}

MomentSeries graphon_series(const GraphonFamily& g, int two_k_max, const QuadratureConfig& cfg) {
  MomentSeries s{g.description(), {}};
  for (int t = 2; t <= two_k_max; t += 2) s.terms.push_back(moment_graphon(g, t, cfg));
  return s;
}

namespace {

void fill_partial_sums(const std::vector<double>& alpha, std::vector<double>& sums, bool& infinite) {
  double running = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double two_k = 2.0 * static_cast<double>(i + 1);
    if (alpha[i] <= 0.0) {
      running = std::numeric_limits<double>::infinity();
      infinite = true;
    } else {
      running += std::pow(alpha[i], -1.0 / two_k);
    }
    sums.push_back(running);
  }
}

}  // namespace

CarlemanReport carleman_partial_sum(std::span<const double> bounds, int K, int ss_max_k) {
  if (K < 1) throw DomainError("Carleman diagnostic needs K >= 1");
  CarlemanReport r;
  const int n_max = 2 * K;
  auto M = [&](int j) {
    if (j % 2 != 0) return 0.0;
    const std::size_t idx = static_cast<std::size_t>(j / 2 - 1);
    return idx < bounds.size() ? bounds[idx] : 0.0;
  };
  // Pascal rows in floating point: binomials overflow 64 bits quickly.
  std::vector<std::vector<double>> binom(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    auto& row = binom[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n) + 1, 1.0);
    for (int j = 1; j < n; ++j) {
      row[static_cast<std::size_t>(j)] = binom[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j - 1)] +
                                         binom[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j)];
    }
  }
  // Set partitions by the size j of the block holding the first element.
  std::vector<double> all(static_cast<std::size_t>(n_max) + 1, 0.0);
  all[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) {
      s += binom[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j - 1)] * M(j) *
           all[static_cast<std::size_t>(n - j)];
    }
    all[static_cast<std::size_t>(n)] = s;
  }
  for (int k = 1; k <= K; ++k) r.alpha.push_back(all[static_cast<std::size_t>(2 * k)]);
  fill_partial_sums(r.alpha, r.partial_sums, r.infinite);

  CumulantSchedule sched;
  sched.rule = [&](int k) { return M(2 * k); };
  bool ss_infinite = false;
  for (int k = 1; k <= std::min(K, ss_max_k); ++k) r.alpha_ss.push_back(moment_constant(sched, 2 * k));
  fill_partial_sums(r.alpha_ss, r.partial_sums_ss, ss_infinite);

  if (r.infinite) {
    r.trend = "diverges trivially";
    r.tail_exponent = 0.0;
    return r;
  }
  // Least-squares slope of log term against log k over the upper half.
  const int first = std::max(1, K / 2);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int k = first; k <= K; ++k) {
    const double term = std::pow(r.alpha[static_cast<std::size_t>(k - 1)], -1.0 / (2.0 * k));
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(term);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 3) {
    r.trend = "inconclusive";
    return r;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  r.tail_exponent = -slope;
  if (r.tail_exponent < 0.9) {
    r.trend = "likely_divergent";
  } else if (r.tail_exponent <= 1.1) {
    r.trend = "inconclusive";
  } else {
    r.trend = "likely_convergent";
  }
  return r;
}

CarlemanReport carleman_partial_sum(const GraphonFamily& g, int K, int ss_max_k) {
  std::vector<double> bounds;
  for (int k = 1; k <= K; ++k) bounds.push_back(g.member(k).bound());
  return carleman_partial_sum(bounds, K, ss_max_k);
}

HankelCheck hankel_check(std::span<const double> even_moments, double tol) {
  const int K = static_cast<int>(even_moments.size());
  std::vector<double> m(static_cast<std::size_t>(2 * K) + 1, 0.0);
  m[0] = 1.0;
  for (int i = 1; i <= K; ++i) m[static_cast<std::size_t>(2 * i)] = even_moments[static_cast<std::size_t>(i - 1)];
  Eigen::MatrixXd h(K + 1, K + 1);
  for (int i = 0; i <= K; ++i) {
    for (int j = 0; j <= K; ++j) h(i, j) = m[static_cast<std::size_t>(i + j)];
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  HankelCheck out;
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.psd = out.min_eigenvalue >= -tol * scale;
  return out;
}

}  // namespace wigner
