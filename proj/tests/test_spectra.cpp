#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wigner/errors.hpp"
#include "wigner/spectra.hpp"

using namespace wigner;

namespace {

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = z(gen);
  }
  return a;
}

// Quantile coupling on a common grid of n_a * n_b atoms, for equal or unequal sizes.
double w2_by_expansion(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t m = a.size() * b.size();
  double s = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const double d = a[t / b.size()] - b[t / a.size()];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(m));
}

}  // namespace

TEST_CASE("eigenvalues of small matrices") {
  Eigen::MatrixXd a{{2, 1}, {1, 2}};
  const ESD e = eigenvalues(a);
  REQUIRE(e.size() == 2);
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(3.0));
  Eigen::MatrixXd bad = a;
  bad(0, 1) = NAN;
  CHECK_THROWS_AS(eigenvalues(bad), NumericError);
}

TEST_CASE("eigen decomposition residuals and traces") {
  const Eigen::MatrixXd a = random_symmetric(80, 3);
  const EigenPairs p = eigen_decomposition(a);
  const double residual = (a * p.vectors - p.vectors * p.values.asDiagonal()).norm();
  CHECK(residual < 1e-10 * a.norm());
  CHECK((p.vectors.transpose() * p.vectors - Eigen::MatrixXd::Identity(80, 80)).norm() < 1e-10);
  const ESD e = eigenvalues(a);
  CHECK(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
  for (int k = 1; k <= 6; ++k) {
    CHECK(esd_moment(e, k) == doctest::Approx(empirical_moment(a, k)).epsilon(1e-9));
  }
  const auto all = empirical_moments(a, 7);
  REQUIRE(all.size() == 7);
  CHECK(all[0] == doctest::Approx(a.trace() / 80));
  CHECK(all[1] == doctest::Approx((a * a).trace() / 80));
  CHECK(all[6] == doctest::Approx(empirical_moment(a, 7)).epsilon(1e-10));
}

TEST_CASE("Wasserstein distance") {
  ESD a{{0.0, 1.0, 2.0}, ""};
  ESD shifted{{0.5, 1.5, 2.5}, ""};
  CHECK(wasserstein2(a, shifted) == doctest::Approx(0.5));
  CHECK(wasserstein2(a, a) == 0.0);
  ESD b{{0.0, 3.0}, ""};
  CHECK(wasserstein2(a, b) == doctest::Approx(w2_by_expansion(a.eigenvalues, b.eigenvalues)));
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(3 + trial), y(7 + 2 * trial);
    for (auto& v : x) v = u(gen);
    for (auto& v : y) v = u(gen);
    ESD ex{x, ""}, ey{y, ""};
    std::sort(ex.eigenvalues.begin(), ex.eigenvalues.end());
    std::sort(ey.eigenvalues.begin(), ey.eigenvalues.end());
    CHECK(wasserstein2(ex, ey) == doctest::Approx(w2_by_expansion(x, y)).epsilon(1e-12));
    CHECK(wasserstein2(ex, ey) == doctest::Approx(wasserstein2(ey, ex)).epsilon(1e-12));
  }
}

TEST_CASE("Hoffman-Wielandt bound") {
  for (unsigned r = 0; r < 5; ++r) {
    const Eigen::MatrixXd a = random_symmetric(30, 100 + r);
    const Eigen::MatrixXd b = a + 0.1 * random_symmetric(30, 200 + r);
    const double w = wasserstein2(eigenvalues(a), eigenvalues(b));
    CHECK(w * w <= (a - b).squaredNorm() / 30 * (1 + 1e-12));
  }
}

TEST_CASE("histograms") {
  ESD e{{0.0, 0.1, 0.2, 0.5, 0.9, 1.0}, ""};
  const Histogram h = histogram(e, 4);
  REQUIRE(h.counts.size() == 4);
  CHECK(h.edges.size() == 5);
  CHECK(h.total() == 6);
  double mass = 0.0;
  const auto d = h.density();
  for (std::size_t i = 0; i < d.size(); ++i) mass += d[i] * (h.edges[i + 1] - h.edges[i]);
  CHECK(mass == doctest::Approx(1.0));
  CHECK(h.counts.back() == 2);
  const Histogram fd = histogram(eigenvalues(random_symmetric(100, 9)));
  CHECK(fd.total() == 100);
  CHECK(fd.counts.size() > 3);
  const Histogram one = histogram(ESD{{2.0}, ""});
  CHECK(one.counts.size() == 1);
  CHECK(one.total() == 1);
}

TEST_CASE("replicated moments") {
  ModelSpec s;
  s.n = 120;
  const MomentSeries m = eesd_moments(s, 4, 6, 1);
  REQUIRE(m.terms.size() == 4);
  CHECK(m.terms[1].value == doctest::Approx(1.0).epsilon(0.05));
  CHECK(m.terms[1].error > 0.0);
  CHECK(m.terms[1].provenance == Provenance::Simulation);
  CHECK(std::abs(m.terms[0].value) < 0.05);
  CHECK(eesd_moments(s, 4, 6, 1).terms[3].value == m.terms[3].value);
  CHECK(replicate_seed(1, 0) != replicate_seed(1, 1));
  SimulationOptions tight;
  tight.budget = 1e3;
  CHECK_THROWS_AS(eesd_moments(s, 4, 6, 1, tight), CapacityError);
}
