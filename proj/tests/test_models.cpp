#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigner/errors.hpp"
#include "wigner/models.hpp"

using namespace wigner;
using nlohmann::json;

namespace {

double mean_square_times_n(const SampledMatrix& m, bool off_diagonal_only = true) {
  const int n = m.n();
  double s = 0.0;
  std::size_t count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = off_diagonal_only ? i + 1 : i; j < n; ++j) {
      s += m.data(i, j) * m.data(i, j);
      ++count;
    }
  }
  return n * s / static_cast<double>(count);
}

}  // namespace

TEST_CASE("sampling is deterministic and symmetric") {
  ModelSpec s;
  s.n = 60;
  s.seed = 11;
  const auto a = sample(s);
  const auto b = sample(s, 4);
  CHECK(a.data == b.data);
  CHECK(a.data == a.data.transpose());
  s.seed = 12;
  CHECK(sample(s).data != a.data);
}

TEST_CASE("gaussian entries have variance sigma^2 / n") {
  ModelSpec s;
  s.n = 400;
  s.sigma = 2.0;
  CHECK(mean_square_times_n(sample(s)) == doctest::Approx(4.0).epsilon(0.03));
  s.zero_diagonal = true;
  const auto z = sample(s);
  for (int i = 0; i < s.n; ++i) CHECK(z.data(i, i) == 0.0);
}

TEST_CASE("sparse and two point entries") {
  ModelSpec s;
  s.variant = Variant::SparseHomogeneous;
  s.lambda = 4.0;
  s.n = 500;
  const auto m = sample(s);
  CHECK(((m.data.array() == 0.0) || (m.data.array() == 1.0)).all());
  CHECK(mean_square_times_n(m) == doctest::Approx(4.0).epsilon(0.05));

  ModelSpec t;
  t.variant = Variant::TriangularTwoPoint;
  t.lambda = 3.0;
  t.atom = 0.5;
  t.n = 500;
  const auto tm = sample(t);
  CHECK(((tm.data.array().abs() == 0.5) || (tm.data.array() == 0.0)).all());
  CHECK(mean_square_times_n(tm) == doctest::Approx(0.75).epsilon(0.06));
  CHECK(std::abs(tm.data.sum()) / tm.data.array().abs().sum() < 0.1);
}

TEST_CASE("band structure") {
  ModelSpec s;
  s.variant = Variant::Band;
  s.n = 40;
  s.alpha = 0.25;
  s.periodic = false;
  s.parts = {ModelSpec{}};
  const auto m = sample(s);
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.n; ++j) {
      if (std::abs(i - j) > 10) CHECK(m.data(i, j) == 0.0);
      if (std::abs(i - j) <= 10) CHECK(m.data(i, j) != 0.0);
    }
  }
  s.periodic = true;
  const auto p = sample(s);
  CHECK(p.data(0, 39) != 0.0);
  CHECK(p.data(0, 20) == 0.0);
}

TEST_CASE("block and profile structure") {
  ModelSpec zero;
  zero.variant = Variant::SparseHomogeneous;
  zero.lambda = 1e-300;
  ModelSpec s;
  s.variant = Variant::Block;
  s.n = 30;
  s.sizes = {0.4, 0.6};
  s.parts = {ModelSpec{}, zero, zero, ModelSpec{}};
  const auto m = sample(s);
  CHECK(m.data.block(0, 12, 12, 18).isZero());
  CHECK(m.data.block(0, 0, 12, 12).cwiseAbs().minCoeff() > 0.0);

  ModelSpec v;
  v.variant = Variant::VarianceProfile;
  v.n = 20;
  v.sigma_profile = "ind(x <= 0.5)";
  v.parts = {ModelSpec{}};
  const auto vm = sample(v);
  CHECK(vm.data.block(10, 10, 10, 10).isZero());
  CHECK(vm.data(0, 0) != 0.0);
}

TEST_CASE("heavy tails and truncation") {
  ModelSpec s;
  s.variant = Variant::HeavyTailed;
  s.tail_index = 1.5;
  s.n = 200;
  const auto m = sample(s);
  const double floor = std::pow(200.0, -1.0 / 1.5);
  CHECK(m.data.cwiseAbs().minCoeff() >= floor * (1 - 1e-12));
  const auto t = truncate(m, 0.5);
  CHECK(t.data.cwiseAbs().maxCoeff() <= 0.5);
  s.truncation = 0.5;
  CHECK(sample(s).data == t.data);
  CHECK_THROWS_AS(truncate(m, -1.0), DomainError);
  s.truncation.reset();
  CHECK_THROWS_AS(effective_cumulants(s, 4), DomainError);
}

TEST_CASE("JSON round trip and validation") {
  const json j = json::parse(R"({"variant":"band","n":50,"seed":3,"alpha":0.2,"periodic":false,
    "base":{"variant":"triangular_twopoint","atom":2,"lambda":1.5}})");
  const ModelSpec s = model_from_json(j);
  CHECK(s.variant == Variant::Band);
  CHECK(s.base().variant == Variant::TriangularTwoPoint);
  CHECK(s.base().atom == 2.0);
  CHECK(model_from_json(to_json(s)).alpha == 0.2);
  CHECK(to_json(model_from_json(to_json(s))) == to_json(s));
  CHECK(spec_hash(s) == spec_hash(model_from_json(to_json(s))));
  CHECK(spec_hash(s).size() == 16);
  ModelSpec other = s;
  other.seed = 4;
  CHECK(spec_hash(other) != spec_hash(s));

  CHECK_THROWS_AS(model_from_json(json::parse(R"({"variant":"gaussian_wigner","lambda":2})")),
                  ValidationError);
  CHECK_THROWS_AS(model_from_json(json::parse(R"({"variant":"nope"})")), ValidationError);
  CHECK_THROWS_AS(model_from_json(json::parse(
                      R"({"variant":"band","base":{"variant":"gaussian_wigner","n":5}})")),
                  ValidationError);
  CHECK_THROWS_AS(model_from_json(json::parse(R"({"variant":"gaussian_wigner","sigma":-1})")),
                  ValidationError);
  CHECK_THROWS_AS(model_from_json(json::parse(R"({"variant":"block","sizes":[0.5,0.4],
    "blocks":[[{"variant":"gaussian_wigner"},{"variant":"gaussian_wigner"}],
              [{"variant":"gaussian_wigner"},{"variant":"gaussian_wigner"}]]})")),
                  ValidationError);
  CHECK(variant_from_string(to_string(Variant::HeavyTailed)) == Variant::HeavyTailed);
}

TEST_CASE("demonstration panels") {
  CHECK(figure_panel('a', 100).variant == Variant::GaussianWigner);
  CHECK(figure_panel('b', 100).lambda == 2.0);
  CHECK(figure_panel('c', 100).p_limit == "pi*(x+y)");
  CHECK(figure_panel('d', 100).base().lambda == 3.0);
  CHECK_THROWS_AS(figure_panel('e', 100), ValidationError);
}

TEST_CASE("effective cumulants") {
  ModelSpec g;
  g.n = 100;
  const auto eg = effective_cumulants(g, 6);
  REQUIRE(eg.limit_schedule);
  CHECK(eg.limit_schedule->at(1) == 1.0);
  CHECK(eg.limit_schedule->at(2) == 0.0);
  CHECK(*eg.finite.member(2).constant_value() == doctest::Approx(3.0 / 100));
  CHECK(*eg.finite.member(3).constant_value() == doctest::Approx(15.0 / 1e4));

  ModelSpec h;
  h.variant = Variant::HeavyTailed;
  h.tail_index = 1.0;
  h.truncation = 2.0;
  h.n = 1000;
  const auto eh = effective_cumulants(h, 4);
  // n E[x^2 1{|x| <= B}] with |x| = n^{-1} U^{-1}: alpha/(2-alpha) (B^{1} - n^{-1}).
  CHECK(*eh.finite.member(1).constant_value() == doctest::Approx(2.0 - 1e-3));
  CHECK(*eh.limit.member(2).constant_value() == doctest::Approx(8.0 / 3.0));

  const ModelSpec c = figure_panel('c', 1000);
  const auto ec = effective_cumulants(c, 4);
  CHECK(ec.limit.member(1)(0.5, 0.5) == doctest::Approx(std::numbers::pi));
  CHECK(ec.finite.member(1)(0.5, 0.5) == doctest::Approx(1000 * std::sin(std::numbers::pi / 1000)));
  CHECK_FALSE(ec.limit_schedule);

  ModelSpec b;
  b.variant = Variant::Block;
  b.sizes = {0.5, 0.5};
  ModelSpec two;
  two.sigma = 2.0;
  b.parts = {ModelSpec{}, two, two, ModelSpec{}};
  const auto eb = effective_cumulants(b, 4);
  REQUIRE(eb.block_limit.count(1));
  CHECK(eb.block_limit.at(1)(0, 1) == 4.0);
  CHECK(eb.block_limit.at(1)(1, 1) == 1.0);
}
