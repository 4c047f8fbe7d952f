#include "wigner/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "wigner/errors.hpp"
#include "wigner/expression.hpp"
#include "wigner/rng.hpp"

namespace wigner {

namespace {

constexpr std::pair<Variant, const char*> kVariantNames[] = {
    {Variant::GaussianWigner, "gaussian_wigner"},
    {Variant::TriangularTwoPoint, "triangular_twopoint"},
    {Variant::SparseHomogeneous, "sparse_homogeneous"},
    {Variant::SparseInhomogeneous, "sparse_inhomogeneous"},
    {Variant::HeavyTailed, "heavy_tailed"},
    {Variant::VarianceProfile, "variance_profile"},
    {Variant::Band, "band"},
    {Variant::Block, "block"},
};

}  // namespace

std::string to_string(Variant v) {
  for (const auto& [var, name] : kVariantNames) {
    if (var == v) return name;
  }
  return "?";
}

Variant variant_from_string(std::string_view s) {
  for (const auto& [var, name] : kVariantNames) {
    if (s == name) return var;
  }
  throw ValidationError("unknown model variant '" + std::string(s) + "'");
}

const ModelSpec& ModelSpec::base() const {
  if (parts.size() != 1) throw ValidationError(to_string(variant) + " needs exactly one base model");
  return parts.front();
}

namespace {

void check(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::size_t block_count(const ModelSpec& s) { return s.sizes.size(); }

void validate_at(const ModelSpec& s, int n) {
  check(n >= 1, "n must be at least 1");
  switch (s.variant) {
    case Variant::GaussianWigner:
      check(s.sigma > 0.0, "sigma must be positive");
      break;
    case Variant::TriangularTwoPoint:
      check(s.lambda > 0.0 && s.lambda <= n, "lambda must lie in (0, n]");
      check(std::isfinite(s.atom) && s.atom != 0.0, "atom must be finite and nonzero");
      break;
    case Variant::SparseHomogeneous:
      check(s.lambda > 0.0, "lambda must be positive");
      break;
    case Variant::SparseInhomogeneous:
      check(!s.p.empty(), "sparse_inhomogeneous needs p");
      Expression::parse(s.p);
      if (!s.p_limit.empty()) {
        check(!Expression::parse(s.p_limit).uses_n(), "p_limit must not depend on n");
      }
      break;
    case Variant::HeavyTailed:
      check(s.tail_index > 0.0 && s.tail_index < 2.0, "tail_index must lie in (0, 2)");
      check(s.scale > 0.0, "scale must be positive");
      check(!s.truncation || *s.truncation > 0.0, "truncation must be positive");
      break;
    case Variant::VarianceProfile:
      check(!s.sigma_profile.empty(), "variance_profile needs sigma_profile");
      Expression::parse(s.sigma_profile);
      validate_at(s.base(), n);
      break;
    case Variant::Band:
      check(s.alpha > 0.0 && s.alpha <= 0.5, "band alpha must lie in (0, 1/2]");
      validate_at(s.base(), n);
      break;
    case Variant::Block: {
      const std::size_t d = block_count(s);
      check(d >= 1, "block needs at least one size");
      double total = 0.0;
      for (double a : s.sizes) {
        check(a > 0.0, "block sizes must be positive");
        total += a;
      }
      check(std::abs(total - 1.0) <= 1e-12, "block sizes must sum to 1");
      check(s.parts.size() == d * d, "block needs a d x d matrix of sub-models");
      for (std::size_t m = 0; m < d; ++m) {
        for (std::size_t l = 0; l < d; ++l) {
          check(to_json(s.parts[m * d + l]) == to_json(s.parts[l * d + m]),
                "block sub-models must be symmetric");
          validate_at(s.parts[m * d + l], n);
        }
      }
      break;
    }
  }
}

}  // namespace

void ModelSpec::validate() const { validate_at(*this, n); }

namespace {

const std::set<std::string>& allowed_keys(Variant v) {
  static const std::map<Variant, std::set<std::string>> keys = {
      {Variant::GaussianWigner, {"sigma"}},
      {Variant::TriangularTwoPoint, {"atom", "lambda"}},
      {Variant::SparseHomogeneous, {"lambda"}},
      {Variant::SparseInhomogeneous, {"p", "p_limit"}},
      {Variant::HeavyTailed, {"tail_index", "scale", "truncation"}},
      {Variant::VarianceProfile, {"sigma_profile", "base"}},
      {Variant::Band, {"alpha", "periodic", "base"}},
      {Variant::Block, {"sizes", "blocks"}},
  };
  return keys.at(v);
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model field '") + key + "': " + e.what());
  }
}

ModelSpec parse_model(const nlohmann::json& j, bool nested) {
  check(j.is_object(), "model must be a JSON object");
  check(j.contains("variant"), "model needs a 'variant'");
  ModelSpec s;
  s.variant = variant_from_string(j.at("variant").get<std::string>());
  const auto& allowed = allowed_keys(s.variant);
  for (const auto& [key, value] : j.items()) {
    if (key == "variant" || key == "zero_diagonal") continue;
    if (!nested && (key == "n" || key == "seed")) continue;
    check(allowed.count(key) > 0, "unknown key '" + key + "' for " + to_string(s.variant) +
                                      (nested ? " (nested models inherit n and seed)" : ""));
  }
  read(j, "n", s.n);
  read(j, "seed", s.seed);
  read(j, "zero_diagonal", s.zero_diagonal);
  read(j, "sigma", s.sigma);
  read(j, "atom", s.atom);
  read(j, "lambda", s.lambda);
  read(j, "p", s.p);
  read(j, "p_limit", s.p_limit);
  read(j, "tail_index", s.tail_index);
  read(j, "scale", s.scale);
  if (j.contains("truncation") && !j.at("truncation").is_null()) {
    s.truncation = j.at("truncation").get<double>();
  }
  read(j, "sigma_profile", s.sigma_profile);
  read(j, "alpha", s.alpha);
  read(j, "periodic", s.periodic);
  read(j, "sizes", s.sizes);
  if (j.contains("base")) s.parts.push_back(parse_model(j.at("base"), true));
  if (j.contains("blocks")) {
    const auto& rows = j.at("blocks");
    check(rows.is_array(), "blocks must be an array of rows");
    for (const auto& row : rows) {
      check(row.is_array() && row.size() == rows.size(), "blocks must be a square matrix");
      for (const auto& cell : row) s.parts.push_back(parse_model(cell, true));
    }
  }
  return s;
}

nlohmann::json to_json_impl(const ModelSpec& s, bool nested) {
  nlohmann::json j;
  j["variant"] = to_string(s.variant);
  if (!nested) {
    j["n"] = s.n;
    j["seed"] = s.seed;
  }
  if (s.zero_diagonal) j["zero_diagonal"] = true;
  switch (s.variant) {
    case Variant::GaussianWigner:
      j["sigma"] = s.sigma;
      break;
    case Variant::TriangularTwoPoint:
      j["atom"] = s.atom;
      j["lambda"] = s.lambda;
      break;
    case Variant::SparseHomogeneous:
      j["lambda"] = s.lambda;
      break;
    case Variant::SparseInhomogeneous:
      j["p"] = s.p;
      if (!s.p_limit.empty()) j["p_limit"] = s.p_limit;
      break;
    case Variant::HeavyTailed:
      j["tail_index"] = s.tail_index;
      j["scale"] = s.scale;
      if (s.truncation) j["truncation"] = *s.truncation;
      break;
    case Variant::VarianceProfile:
      j["sigma_profile"] = s.sigma_profile;
      j["base"] = to_json_impl(s.base(), true);
      break;
    case Variant::Band:
      j["alpha"] = s.alpha;
      j["periodic"] = s.periodic;
      j["base"] = to_json_impl(s.base(), true);
      break;
    case Variant::Block: {
      j["sizes"] = s.sizes;
      const std::size_t d = s.sizes.size();
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t m = 0; m < d && (m + 1) * d <= s.parts.size(); ++m) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t l = 0; l < d; ++l) row.push_back(to_json_impl(s.parts[m * d + l], true));
        rows.push_back(row);
      }
      j["blocks"] = rows;
      break;
    }
  }
  return j;
}

}  // namespace

ModelSpec model_from_json(const nlohmann::json& j) {
  ModelSpec s = parse_model(j, false);
  s.validate();
  return s;
}

nlohmann::json to_json(const ModelSpec& spec) { return to_json_impl(spec, false); }

std::string spec_hash(const ModelSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : to_json(spec).dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ModelSpec figure_panel(char panel, int n, std::uint64_t seed) {
  ModelSpec s;
  s.n = n;
  s.seed = seed;
  switch (panel) {
    case 'a':
      s.variant = Variant::GaussianWigner;
      break;
    case 'b':
      s.variant = Variant::SparseHomogeneous;
      s.lambda = 2.0;
      break;
    case 'c':
      s.variant = Variant::SparseInhomogeneous;
      s.p = "n*sin(pi*(x+y)/n)";
      s.p_limit = "pi*(x+y)";
      break;
    case 'd': {
      s.variant = Variant::VarianceProfile;
      s.sigma_profile = "(x+y)^2/2";
      ModelSpec base;
      base.variant = Variant::SparseHomogeneous;
      base.lambda = 3.0;
      s.parts.push_back(base);
      break;
    }
    default:
      throw ValidationError(std::string("unknown panel '") + panel + "'");
  }
  return s;
}

namespace {

// Parsed expressions and index maps for one (sub)model at a fixed n.
struct Compiled {
  const ModelSpec* spec = nullptr;
  std::optional<Expression> expr;
  std::vector<Compiled> parts;
  std::vector<int> block_of;
  int band_width = 0;
  double inv_an = 1.0;
  double inv_tail = 1.0;
};

Compiled compile(const ModelSpec& s, int n) {
  Compiled c;
  c.spec = &s;
  switch (s.variant) {
    case Variant::SparseInhomogeneous:
      c.expr = Expression::parse(s.p);
      break;
    case Variant::VarianceProfile:
      c.expr = Expression::parse(s.sigma_profile);
      break;
    case Variant::Band:
      c.band_width = static_cast<int>(std::lround(s.alpha * n));
      break;
    case Variant::HeavyTailed:
      c.inv_tail = 1.0 / s.tail_index;
      c.inv_an = std::pow(static_cast<double>(n), -c.inv_tail);
      break;
    case Variant::Block: {
      const std::size_t d = s.sizes.size();
      c.block_of.assign(static_cast<std::size_t>(n), static_cast<int>(d) - 1);
      double cum = 0.0;
      int start = 0;
      for (std::size_t m = 0; m < d; ++m) {
        cum += s.sizes[m];
        const int end = (m + 1 == d) ? n : static_cast<int>(std::lround(cum * n));
        for (int i = start; i < end; ++i) c.block_of[static_cast<std::size_t>(i)] = static_cast<int>(m);
        start = std::max(start, end);
      }
      break;
    }
    default:
      break;
  }
  for (const auto& p : s.parts) c.parts.push_back(compile(p, n));
  return c;
}

double draw(const Compiled& c, int n, int i, int j, EntryStream& rng) {
  const ModelSpec& s = *c.spec;
  const double dn = static_cast<double>(n);
  switch (s.variant) {
    case Variant::GaussianWigner:
      return s.sigma * rng.normal() / std::sqrt(dn);
    case Variant::TriangularTwoPoint: {
      const double u = rng.uniform();
      const double half = s.lambda / (2.0 * dn);
      if (u < half) return s.atom;
      if (u < 2.0 * half) return -s.atom;
      return 0.0;
    }
    case Variant::SparseHomogeneous:
      return rng.bernoulli(std::min(1.0, s.lambda / dn)) ? 1.0 : 0.0;
    case Variant::SparseInhomogeneous: {
      const double p = (*c.expr)((i + 1) / dn, (j + 1) / dn, dn);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw NumericError("p(x, y) must be finite and non-negative, got " + std::to_string(p));
      }
      return rng.bernoulli(std::min(1.0, p / dn)) ? 1.0 : 0.0;
    }
    case Variant::HeavyTailed: {
      const double magnitude = std::pow(rng.uniform(), -c.inv_tail) * c.inv_an;
      const double sign = (rng.next_u32() & 1u) ? 1.0 : -1.0;
      if (s.truncation && magnitude > *s.truncation) return 0.0;
      return sign * s.scale * magnitude;
    }
    case Variant::VarianceProfile: {
      const double sigma = (*c.expr)((i + 1) / dn, (j + 1) / dn, dn);
      if (!std::isfinite(sigma)) throw NumericError("sigma(x, y) is not finite");
      return sigma * draw(c.parts.front(), n, i, j, rng);
    }
    case Variant::Band: {
      const int d = std::abs(i - j);
      const bool in = d <= c.band_width || (s.periodic && d >= n - c.band_width);
      return in ? draw(c.parts.front(), n, i, j, rng) : 0.0;
    }
    case Variant::Block: {
      const std::size_t dim = s.sizes.size();
      const auto m = static_cast<std::size_t>(c.block_of[static_cast<std::size_t>(i)]);
      const auto l = static_cast<std::size_t>(c.block_of[static_cast<std::size_t>(j)]);
      return draw(c.parts[std::min(m, l) * dim + std::max(m, l)], n, i, j, rng);
    }
  }
  return 0.0;
}

}  // namespace

SampledMatrix sample(const ModelSpec& spec, int threads) {
  spec.validate();
  const int n = spec.n;
  const Compiled c = compile(spec, n);
  SampledMatrix out{Eigen::MatrixXd::Zero(n, n), spec};
  auto rows = [&](int t, int stride) {
    for (int i = t; i < n; i += stride) {
      for (int j = i; j < n; ++j) {
        if (i == j && spec.zero_diagonal) continue;
        EntryStream rng(spec.seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        const double v = draw(c, n, i, j, rng);
        out.data(i, j) = v;
        out.data(j, i) = v;
      }
    }
  };
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(rows, t, threads);
  }
  return out;
}

SampledMatrix truncate(const SampledMatrix& m, double t) {
  if (!(t >= 0.0)) throw DomainError("truncation level must be non-negative");
  SampledMatrix out = m;
  out.data = (m.data.array().abs() > t).select(0.0, m.data);
  return out;
}

namespace {

double double_factorial_odd(int k) {  // (2k-1)!!
  double r = 1.0;
  for (int i = 1; i < 2 * k; i += 2) r *= i;
  return r;
}

struct Families {
  GraphonFamily finite;
  GraphonFamily limit;
};

Families families(const ModelSpec& s, int n, int k_max) {
  Families f{GraphonFamily(to_string(s.variant)), GraphonFamily(to_string(s.variant) + " limit")};
  const double dn = static_cast<double>(n);
  auto constants = [&](auto finite_value, auto limit_value) {
    for (int k = 1; k <= k_max; ++k) {
      f.finite.set(k, Graphon::constant(finite_value(k)));
      f.limit.set(k, Graphon::constant(limit_value(k)));
    }
  };
  switch (s.variant) {
    case Variant::GaussianWigner:
      constants(
          [&](int k) { return double_factorial_odd(k) * std::pow(s.sigma, 2 * k) * std::pow(dn, 1 - k); },
          [&](int k) { return k == 1 ? s.sigma * s.sigma : 0.0; });
      break;
    case Variant::TriangularTwoPoint:
      constants([&](int k) { return s.lambda * std::pow(s.atom, 2 * k); },
                [&](int k) { return s.lambda * std::pow(s.atom, 2 * k); });
      break;
    case Variant::SparseHomogeneous:
      constants([&](int) { return std::min(dn, s.lambda); }, [&](int) { return s.lambda; });
      break;
    case Variant::SparseInhomogeneous: {
      const Expression p = Expression::parse(s.p);
      const Graphon finite(
          [p, dn](double x, double y) { return std::min(dn, p(x, y, dn)); },
          0.0, "n*min(1, (" + s.p + ")/n)", p.discontinuities());
      Graphon fin = finite;
      fin.set_bound(sampled_bound([&](double x, double y) { return finite(x, y); }));
      std::string lim = s.p_limit;
      if (lim.empty()) {
        if (p.uses_n()) {
          throw DomainError("p depends on n; p_limit is needed for the limiting graphon");
        }
        lim = s.p;
      }
      const Graphon limit = Graphon::expression(lim);
      for (int k = 1; k <= k_max; ++k) {
        f.finite.set(k, fin);
        f.limit.set(k, limit);
      }
      break;
    }
    case Variant::HeavyTailed: {
      if (!s.truncation) {
        throw DomainError("heavy-tailed entries have no finite moments without truncation");
      }
      const double a = s.tail_index;
      const double B = *s.truncation;
      const bool empty = B * std::pow(dn, 1.0 / a) < 1.0;
      constants(
          [&](int k) {
            if (empty) return 0.0;
            return std::pow(s.scale, 2 * k) * a / (2 * k - a) *
                   (std::pow(B, 2 * k - a) - std::pow(dn, 1.0 - 2 * k / a));
          },
          [&](int k) { return std::pow(s.scale, 2 * k) * a / (2 * k - a) * std::pow(B, 2 * k - a); });
      break;
    }
    case Variant::VarianceProfile: {
      const Families b = families(s.base(), n, k_max);
      const Expression e = Expression::parse(s.sigma_profile);
      const Graphon sigma_n = Graphon::expression(e, dn);
      for (int k = 1; k <= k_max; ++k) f.finite.set(k, sigma_n.pow(2 * k) * b.finite.member(k));
      if (e.uses_n()) throw DomainError("sigma_profile depends on n; no fixed limit profile");
      const Graphon sigma = Graphon::expression(e);
      for (int k = 1; k <= k_max; ++k) f.limit.set(k, sigma.pow(2 * k) * b.limit.member(k));
      break;
    }
    case Variant::Band: {
      const Families b = families(s.base(), n, k_max);
      const int width = static_cast<int>(std::lround(s.alpha * n));
      const Graphon finite_band =
          width > 0 ? Graphon::band(std::min(0.5, width / dn), s.periodic) : Graphon();
      const Graphon band = Graphon::band(s.alpha, s.periodic);
      for (int k = 1; k <= k_max; ++k) {
        f.finite.set(k, finite_band * b.finite.member(k));
        f.limit.set(k, band * b.limit.member(k));
      }
      break;
    }
    case Variant::Block: {
      const std::size_t d = s.sizes.size();
      PiecewiseConstant cells;
      cells.edges.push_back(0.0);
      double cum = 0.0;
      for (std::size_t m = 0; m < d; ++m) {
        cum += s.sizes[m];
        cells.edges.push_back(m + 1 == d ? 1.0 : cum);
      }
      std::vector<Families> sub;
      for (const auto& p : s.parts) sub.push_back(families(p, n, k_max));
      for (int k = 1; k <= k_max; ++k) {
        PiecewiseConstant fin = cells;
        PiecewiseConstant lim = cells;
        fin.values.assign(d, std::vector<double>(d));
        lim.values.assign(d, std::vector<double>(d));
        for (std::size_t m = 0; m < d; ++m) {
          for (std::size_t l = 0; l < d; ++l) {
            const auto cf = sub[m * d + l].finite.member(k).constant_value();
            const auto cl = sub[m * d + l].limit.member(k).constant_value();
            if (!cf || !cl) throw DomainError("block sub-models must have constant cumulants");
            fin.values[m][l] = *cf;
            lim.values[m][l] = *cl;
          }
        }
        f.finite.set(k, Graphon::grid(std::move(fin)));
        f.limit.set(k, Graphon::grid(std::move(lim)));
      }
      break;
    }
  }
  return f;
}

}  // namespace

EffectiveCumulants effective_cumulants(const ModelSpec& spec, int two_k_max) {
  spec.validate();
  const int k_max = std::max(1, two_k_max / 2);
  Families f = families(spec, spec.n, k_max);
  EffectiveCumulants out{std::move(f.finite), std::move(f.limit), std::nullopt, {}, {}};

  CumulantSchedule sched;
  sched.description = to_string(spec.variant);
  bool constant = true;
  for (int k = 1; k <= k_max && constant; ++k) {
    const auto c = out.limit.member(k).constant_value();
    if (c) {
      sched.values[k] = *c;
    } else {
      constant = false;
    }
  }
  if (constant) out.limit_schedule = std::move(sched);

  if (spec.variant == Variant::Block) {
    out.block_sizes = spec.sizes;
    const auto d = static_cast<Eigen::Index>(spec.sizes.size());
    for (int k = 1; k <= k_max; ++k) {
      const Graphon g = out.limit.member(k);
      const auto& cells = g.cells();
      Eigen::MatrixXd m = Eigen::MatrixXd::Constant(d, d, g.constant_value().value_or(0.0));
      if (cells) {
        for (Eigen::Index a = 0; a < d; ++a) {
          for (Eigen::Index b = 0; b < d; ++b) {
            m(a, b) = cells->values[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          }
        }
      }
      out.block_limit[k] = m;
    }
  }
  return out;
}

}  // namespace wigner
