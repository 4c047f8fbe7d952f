#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "wigner/circuits.hpp"
#include "wigner/combinatorics.hpp"
#include "wigner/errors.hpp"
#include "wigner/models.hpp"
#include "wigner/serialize.hpp"
#include "wigner/spectra.hpp"
#include "wigner/trees.hpp"

namespace wigner::cli {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!keys.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

std::string fnv_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunConfig {
  int two_k = 0;
  int n = 1000;
  int reps = 30;
  std::uint64_t seed = kDefaultSeed;
  std::string format;
  std::string out;
  int quad_points = 32;
  double budget = 0.0;  // 0 means the command's default
  bool reproducible = false;
  int threads = std::max(1u, std::thread::hardware_concurrency());

  void apply(const json& j) {
    only_keys(j, {"two_k", "n", "reps", "seed", "format", "out", "quad_points", "budget",
                  "reproducible", "threads"},
              "run config");
    two_k = field(j, "two_k", two_k);
    n = field(j, "n", n);
    reps = field(j, "reps", reps);
    seed = field(j, "seed", seed);
    format = field(j, "format", format);
    out = field(j, "out", out);
    quad_points = field(j, "quad_points", quad_points);
    budget = field(j, "budget", budget);
    reproducible = field(j, "reproducible", reproducible);
    threads = field(j, "threads", threads);
  }

  std::string format_or(const std::string& fallback) const {
    const std::string f = format.empty() ? fallback : format;
    if (f != "text" && f != "json" && f != "csv") {
      throw ValidationError("format must be text, json or csv");
    }
    return f;
  }
};

json provenance(const RunConfig& cfg, std::uint64_t seed, const std::string& hash) {
  json p{{"seed", seed}, {"spec_hash", hash}};
  if (!cfg.reproducible) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    p["timestamp"] = buf;
  }
  return p;
}

// Writes to --out when given, otherwise to `out`.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw ValidationError("cannot write " + cfg.out);
  f << text;
}

// ----- theory configs -----

Graphon graphon_from_json(const json& j) {
  const std::string type = field<std::string>(j, "type", "");
  Graphon g;
  if (type == "constant") {
    only_keys(j, {"type", "value"}, "constant graphon");
    g = Graphon::constant(field(j, "value", 0.0));
  } else if (type == "expression") {
    only_keys(j, {"type", "expr", "bound"}, "expression graphon");
    const Expression e = Expression::parse(field<std::string>(j, "expr", ""));
    if (e.uses_n()) throw ValidationError("limiting graphons cannot depend on n");
    g = Graphon::expression(e);
  } else if (type == "grid") {
    only_keys(j, {"type", "edges", "values"}, "grid graphon");
    g = Graphon::grid({field<std::vector<double>>(j, "edges", {}),
                       field<std::vector<std::vector<double>>>(j, "values", {})});
  } else if (type == "band") {
    only_keys(j, {"type", "alpha", "periodic"}, "band graphon");
    g = Graphon::band(field(j, "alpha", 0.25), field(j, "periodic", true));
  } else {
    throw ValidationError("graphon type must be constant, expression, grid or band");
  }
  if (j.contains("bound")) g.set_bound(field(j, "bound", g.bound()));
  if (!is_symmetric(g)) throw ValidationError("graphon " + g.description() + " is not symmetric");
  return g;
}

GraphonFamily family_from_json(const json& j) {
  only_keys(j, {"members", "default"}, "graphon family");
  GraphonFamily fam("graphon family");
  if (j.contains("members")) {
    for (const auto& [key, value] : j.at("members").items()) {
      int k = 0;
      try {
        k = std::stoi(key);
      } catch (const std::exception&) {
        throw ValidationError("graphon member keys must be integers k >= 1");
      }
      if (k < 1) throw ValidationError("graphon member keys must be integers k >= 1");
      fam.set(k, graphon_from_json(value));
    }
  }
  if (j.contains("default")) {
    const Graphon d = graphon_from_json(j.at("default"));
    fam.set_rule([d](int) { return d; });
  }
  return fam;
}

CumulantSchedule schedule_from_json(const json& j) {
  const std::string type = field<std::string>(j, "type", "");
  if (type == "semicircle") {
    only_keys(j, {"type", "variance"}, "semicircle schedule");
    return CumulantSchedule::semicircle(field(j, "variance", 1.0));
  }
  if (type == "sparse") {
    only_keys(j, {"type", "lambda"}, "sparse schedule");
    const double lambda = field(j, "lambda", 1.0);
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    return CumulantSchedule::sparse(lambda);
  }
  if (type == "values") {
    only_keys(j, {"type", "values", "default"}, "value schedule");
    CumulantSchedule c;
    c.description = "values";
    for (const auto& [key, value] : j.at("values").items()) c.values[std::stoi(key)] = value.get<double>();
    if (j.contains("default")) {
      const double d = field(j, "default", 0.0);
      c.rule = [d](int) { return d; };
    }
    return c;
  }
  throw ValidationError("schedule type must be semicircle, sparse or values");
}

GraphonFamily family_from_schedule(const CumulantSchedule& c) {
  GraphonFamily fam(c.description);
  fam.set_rule([c](int k) { return Graphon::constant(c.at(k)); });
  return fam;
}

QuadratureConfig quadrature_from_json(const json& j, QuadratureConfig q) {
  only_keys(j, {"method", "points", "qmc_points", "replicates", "seed"}, "quadrature");
  const std::string method = field<std::string>(j, "method", "auto");
  if (method == "auto") {
    q.method = QuadratureConfig::Method::Auto;
  } else if (method == "gauss") {
    q.method = QuadratureConfig::Method::Gauss;
  } else if (method == "qmc") {
    q.method = QuadratureConfig::Method::Qmc;
  } else {
    throw ValidationError("quadrature method must be auto, gauss or qmc");
  }
  q.points = field(j, "points", q.points);
  q.qmc.points = field(j, "qmc_points", q.qmc.points);
  q.qmc.replicates = field(j, "replicates", q.qmc.replicates);
  q.qmc.seed = field(j, "seed", q.qmc.seed);
  return q;
}

BlockCumulants block_cumulants_from_json(const json& j, std::size_t d) {
  BlockCumulants c;
  for (const auto& [key, value] : j.items()) {
    const auto rows = value.get<std::vector<std::vector<double>>>();
    if (rows.size() != d) throw ValidationError("block cumulant matrices must be d x d");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t a = 0; a < d; ++a) {
      if (rows[a].size() != d) throw ValidationError("block cumulant matrices must be d x d");
      for (std::size_t b = 0; b < d; ++b) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rows[a][b];
      }
    }
    c[std::stoi(key)] = m;
  }
  return c;
}

MomentSeries block_series(std::span<const double> sizes, const BlockCumulants& c, int two_k_max) {
  MomentSeries s{"block", {}};
  for (int t = 2; t <= two_k_max; t += 2) {
    s.terms.push_back({t, moment_block(sizes, c, t), 0.0, Provenance::Exact});
  }
  return s;
}

}  // namespace

json load_json(const std::string& arg) {
  try {
    if (!arg.empty() && arg.front() == '{') return json::parse(arg);
    std::ifstream f(arg);
    if (!f) throw ValidationError("cannot read " + arg);
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid JSON in " + (arg.size() > 40 ? arg.substr(0, 40) + "..." : arg) +
                          ": " + e.what());
  }
}

MomentSeries theory_series(const json& theory, const QuadratureConfig& defaults) {
  only_keys(theory,
            {"two_k_max", "schedule", "graphon", "band", "block", "variance_profile", "model",
             "quadrature"},
            "theory config");
  const int two_k_max = field(theory, "two_k_max", 8);
  if (two_k_max < 2) throw ValidationError("two_k_max must be at least 2");
  QuadratureConfig q = defaults;
  if (theory.contains("quadrature")) q = quadrature_from_json(theory.at("quadrature"), q);

  int sources = 0;
  for (const char* key : {"schedule", "graphon", "band", "block", "variance_profile", "model"}) {
    sources += theory.contains(key) ? 1 : 0;
  }
  if (sources != 1) {
    throw ValidationError(
        "theory config needs exactly one of schedule, graphon, band, block, variance_profile, model");
  }

  if (theory.contains("schedule")) {
    return constant_series(schedule_from_json(theory.at("schedule")), two_k_max);
  }
  if (theory.contains("graphon")) {
    return graphon_series(family_from_json(theory.at("graphon")), two_k_max, q);
  }
  if (theory.contains("band")) {
    const json& b = theory.at("band");
    only_keys(b, {"alpha", "periodic", "schedule", "graphon"}, "band theory");
    const GraphonFamily base = b.contains("graphon") ? family_from_json(b.at("graphon"))
                                                     : family_from_schedule(schedule_from_json(b.at("schedule")));
    const double alpha = field(b, "alpha", 0.25);
    const bool periodic = field(b, "periodic", true);
    MomentSeries s{"band", {}};
    for (int t = 2; t <= two_k_max; t += 2) s.terms.push_back(moment_band(base, alpha, periodic, t, q));
    return s;
  }
  if (theory.contains("block")) {
    const json& b = theory.at("block");
    only_keys(b, {"sizes", "cumulants"}, "block theory");
    const auto sizes = field<std::vector<double>>(b, "sizes", {});
    return block_series(sizes, block_cumulants_from_json(b.at("cumulants"), sizes.size()), two_k_max);
  }
  if (theory.contains("variance_profile")) {
    const json& v = theory.at("variance_profile");
    only_keys(v, {"sigma", "schedule"}, "variance profile theory");
    const Graphon sigma = Graphon::expression(field<std::string>(v, "sigma", ""));
    const CumulantSchedule c = schedule_from_json(v.at("schedule"));
    MomentSeries s{"variance profile " + sigma.description(), {}};
    for (int t = 2; t <= two_k_max; t += 2) s.terms.push_back(moment_variance_profile(sigma, c, t, q));
    return s;
  }
  const ModelSpec spec = model_from_json(theory.at("model"));
  const EffectiveCumulants eff = effective_cumulants(spec, two_k_max);
  if (spec.variant == Variant::Block) return block_series(eff.block_sizes, eff.block_limit, two_k_max);
  if (eff.limit_schedule) {
    const CumulantSchedule& c = *eff.limit_schedule;
    MomentSeries s = constant_series(c, two_k_max);
    s.description = to_string(spec.variant) + " limit";
    return s;
  }
  return graphon_series(eff.limit, two_k_max, q);
}

namespace {

struct SimConfig {
  ModelSpec model;
  int replicates = 30;
  int k_max = 0;
  std::uint64_t seed = kDefaultSeed;
  int bins = 0;
};

SimConfig sim_from_json(const json& j, const RunConfig& cfg) {
  only_keys(j, {"model", "replicates", "k_max", "seed", "bins", "panel"}, "simulation config");
  SimConfig s;
  if (j.contains("panel") == j.contains("model")) {
    throw ValidationError("simulation config needs exactly one of model or panel");
  }
  if (j.contains("model")) {
    json m = j.at("model");
    if (!m.contains("n")) m["n"] = cfg.n;
    s.model = model_from_json(m);
  } else {
    const std::string panel = field<std::string>(j, "panel", "");
    if (panel.size() != 1) throw ValidationError("panel is one of a, b, c, d");
    s.model = figure_panel(panel[0], cfg.n, cfg.seed);
  }
  s.replicates = field(j, "replicates", cfg.reps);
  s.k_max = field(j, "k_max", 0);
  s.seed = field(j, "seed", cfg.seed);
  s.bins = field(j, "bins", 0);
  return s;
}

double sim_budget(const RunConfig& cfg) { return cfg.budget > 0.0 ? cfg.budget : 1e12; }

std::string series_text(const MomentSeries& s, const std::string& format, const json& prov) {
  std::ostringstream os;
  if (format == "csv") {
    write_csv(os, s);
  } else if (format == "json") {
    json j = to_json(s);
    j["provenance"] = prov;
    os << j.dump(2) << '\n';
  } else {
    os.precision(12);
    for (const auto& t : s.terms) {
      os << t.order << ' ' << t.value;
      if (t.error > 0.0) os << " +- " << t.error;
      os << '\n';
    }
  }
  return os.str();
}

// ----- subcommands -----

int cmd_ss(const RunConfig& cfg, bool by_blocks, bool list, std::ostream& out, std::ostream& err) {
  const int two_k = cfg.two_k;
  if (two_k < 1) throw ValidationError("ss needs a positive length");
  if (two_k % 2 != 0) err << "note: SS(" << two_k << ") is empty because the length is odd\n";
  const std::string format = cfg.format_or("text");
  std::ostringstream os;
  if (list) {
    const auto words = enumerate_ss(two_k);
    if (format == "json") {
      json arr = json::array();
      for (const auto& w : words) arr.push_back(w.to_string());
      os << json{{"two_k", two_k}, {"words", arr}}.dump(2) << '\n';
    } else {
      for (std::size_t i = 0; i < words.size(); ++i) os << (i ? (format == "csv" ? "\n" : ",") : "") << words[i].to_string();
      os << '\n';
    }
  } else if (by_blocks) {
    const auto counts = count_ss_by_blocks(two_k);
    if (format == "json") {
      json obj = json::object();
      for (const auto& [b, c] : counts) obj[std::to_string(b)] = c;
      os << json{{"two_k", two_k}, {"by_blocks", obj}}.dump(2) << '\n';
    } else {
      if (format == "csv") os << "b,count\n";
      for (const auto& [b, c] : counts) os << b << (format == "csv" ? "," : " ") << c << '\n';
    }
  } else {
    std::uint64_t total = 0;
    for (const auto& [b, c] : count_ss_by_blocks(two_k)) total += c;
    if (format == "json") {
      os << json{{"two_k", two_k}, {"count", total}}.dump(2) << '\n';
    } else {
      os << total << '\n';
    }
  }
  emit(cfg, out, os.str());
  return kOk;
}

int cmd_trees(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.two_k < 1) throw ValidationError("trees needs a positive length");
  if (cfg.two_k % 2 != 0) err << "note: no trees for odd length " << cfg.two_k << '\n';
  const std::string format = cfg.format_or("text");
  std::ostringstream os;
  const auto trees = enumerate_trees(cfg.two_k);
  if (format == "json") {
    json arr = json::array();
    for (const auto& t : trees) arr.push_back({{"word", word_from_tree(t).to_string()}, {"tree", to_json(t)}});
    os << arr.dump(2) << '\n';
  } else {
    if (format == "csv") os << "word,tree\n";
    for (const auto& t : trees) {
      os << word_from_tree(t).to_string() << (format == "csv" ? ",\"" : " ") << t.to_text()
         << (format == "csv" ? "\"" : "") << '\n';
    }
  }
  emit(cfg, out, os.str());
  return kOk;
}

std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  if (auto dots = s.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(s.substr(0, dots));
    const int hi = std::stoi(s.substr(dots + 2));
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int cmd_circuits(const RunConfig& cfg, const std::string& word, const std::string& n_list,
                 std::ostream& out) {
  const Word w = Word::parse(word);
  std::vector<int> ns;
  try {
    ns = n_list.empty() ? std::vector<int>{cfg.n} : parse_n_list(n_list);
  } catch (const std::exception&) {
    throw ValidationError("sizes must look like 2,3,4 or 2..8");
  }
  CircuitOptions opts;
  if (cfg.budget > 0.0) opts.budget = cfg.budget;
  opts.threads = cfg.threads;
  const auto rows = ratio_table(w, ns, opts);
  const std::string format = cfg.format_or("csv");
  std::ostringstream os;
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    os << arr.dump(2) << '\n';
  } else {
    write_csv(os, rows);
  }
  emit(cfg, out, os.str());
  return kOk;
}

QuadratureConfig quadrature_defaults(const RunConfig& cfg) {
  QuadratureConfig q;
  q.points = cfg.quad_points;
  q.threads = cfg.threads;
  return q;
}

int cmd_moments(const RunConfig& cfg, const std::string& theory_arg, std::ostream& out) {
  if (theory_arg.empty()) throw ValidationError("moments needs --theory");
  json theory = load_json(theory_arg);
  if (cfg.two_k > 0 && !theory.contains("two_k_max")) theory["two_k_max"] = cfg.two_k;
  const MomentSeries s = theory_series(theory, quadrature_defaults(cfg));
  const json prov = provenance(cfg, 0, fnv_hex(theory.dump()));
  emit(cfg, out, series_text(s, cfg.format_or("json"), prov));
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& sim_arg, const std::string& panel,
                 std::ostream& out) {
  json sim_json;
  if (!sim_arg.empty()) {
    sim_json = load_json(sim_arg);
  } else if (!panel.empty()) {
    sim_json = {{"panel", panel}};
  } else {
    throw ValidationError("simulate needs --sim or --panel");
  }
  const SimConfig sim = sim_from_json(sim_json, cfg);
  const int k_max = sim.k_max > 0 ? sim.k_max : (cfg.two_k > 0 ? cfg.two_k : 6);
  SimulationOptions opts{cfg.threads, sim_budget(cfg)};
  const MomentSeries series = eesd_moments(sim.model, k_max, sim.replicates, sim.seed, opts);
  const json prov = provenance(cfg, sim.seed, spec_hash(sim.model));

  if (cfg.out.empty()) {
    out << series_text(series, cfg.format_or("json"), prov);
    return kOk;
  }
  // Directory output: moments, pooled eigenvalues and their histogram.
  std::filesystem::create_directories(cfg.out);
  ESD pooled;
  for (int r = 0; r < sim.replicates; ++r) {
    ModelSpec s = sim.model;
    s.seed = replicate_seed(sim.seed, r);
    const ESD e = eigenvalues(sample(s, cfg.threads));
    pooled.eigenvalues.insert(pooled.eigenvalues.end(), e.eigenvalues.begin(), e.eigenvalues.end());
  }
  std::sort(pooled.eigenvalues.begin(), pooled.eigenvalues.end());
  const Histogram h = histogram(pooled, sim.bins);
  {
    json j = to_json(series);
    j["provenance"] = prov;
    j["model"] = to_json(sim.model);
    std::ofstream(cfg.out + "/moments.json") << j.dump(2) << '\n';
  }
  {
    std::ofstream f(cfg.out + "/histogram.csv");
    write_csv(f, h);
  }
  {
    std::ofstream f(cfg.out + "/histogram.dat");
    f << "# bin_center density  seed=" << sim.seed << " spec_hash=" << spec_hash(sim.model) << '\n';
    const auto d = h.density();
    for (std::size_t i = 0; i < d.size(); ++i) f << 0.5 * (h.edges[i] + h.edges[i + 1]) << ' ' << d[i] << '\n';
  }
  {
    std::ofstream f(cfg.out + "/eigenvalues.dat");
    f.precision(17);
    for (double l : pooled.eigenvalues) f << l << '\n';
  }
  out << "wrote " << cfg.out << "/{moments.json,histogram.csv,histogram.dat,eigenvalues.dat}\n";
  return kOk;
}

int cmd_compare(const RunConfig& cfg, const std::string& theory_arg, const std::string& sim_arg,
                double threshold, std::ostream& out) {
  if (theory_arg.empty() || sim_arg.empty()) throw ValidationError("compare needs --theory and --sim");
  const json theory = load_json(theory_arg);
  const SimConfig sim = sim_from_json(load_json(sim_arg), cfg);
  const int theory_max = field(theory, "two_k_max", 0);
  if (theory_max < 2) throw ValidationError("theory config for compare needs two_k_max >= 2");
  if (sim.k_max != 0 && sim.k_max != theory_max) {
    throw ValidationError("moment ranges differ: theory two_k_max=" + std::to_string(theory_max) +
                          ", simulation k_max=" + std::to_string(sim.k_max));
  }
  const MomentSeries th = theory_series(theory, quadrature_defaults(cfg));
  SimulationOptions opts{cfg.threads, sim_budget(cfg)};
  const MomentSeries si = eesd_moments(sim.model, theory_max, sim.replicates, sim.seed, opts);

  bool pass = true;
  json rows = json::array();
  std::ostringstream csv;
  csv.precision(12);
  csv << "2k,beta_theory,beta_sim,se,z\n";
  for (const auto& t : th.terms) {
    const MomentTerm* s = si.find(t.order);
    const double se = std::sqrt(s->error * s->error + t.error * t.error);
    const double diff = s->value - t.value;
    const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
    const bool ok = std::abs(z) <= threshold;
    pass = pass && ok;
    rows.push_back({{"two_k", t.order}, {"beta_theory", t.value}, {"beta_sim", s->value},
                    {"se", se}, {"z", std::isfinite(z) ? json(z) : json(nullptr)}, {"pass", ok}});
    csv << t.order << ',' << t.value << ',' << s->value << ',' << se << ',' << z << '\n';
  }
  const std::string format = cfg.format_or("json");
  if (format == "csv") {
    emit(cfg, out, csv.str());
  } else {
    json j{{"rows", rows}, {"threshold", threshold}, {"pass", pass},
           {"provenance", provenance(cfg, sim.seed, spec_hash(sim.model))}};
    emit(cfg, out, j.dump(2) + "\n");
  }
  return pass ? kOk : kComparisonFailed;
}

int cmd_carleman(const RunConfig& cfg, const std::string& bounds_arg, int K, int ss_max_k,
                 std::ostream& out) {
  std::vector<double> bounds;
  std::stringstream ss(bounds_arg);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) bounds.push_back(std::stod(item));
  } catch (const std::exception&) {
    throw ValidationError("bounds must be comma-separated numbers M_2,M_4,...");
  }
  if (bounds.empty()) throw ValidationError("carleman needs --bounds");
  const CarlemanReport r = carleman_partial_sum(bounds, K, ss_max_k);
  auto finite_or_null = [](const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(std::isfinite(x) ? json(x) : json("inf"));
    return arr;
  };
  json j{{"alpha", finite_or_null(r.alpha)},
         {"partial_sums", finite_or_null(r.partial_sums)},
         {"alpha_ss", finite_or_null(r.alpha_ss)},
         {"partial_sums_ss", finite_or_null(r.partial_sums_ss)},
         {"infinite", r.infinite},
         {"tail_exponent", r.tail_exponent},
         {"trend", r.trend}};
  emit(cfg, out, j.dump(2) + "\n");
  return kOk;
}

int cmd_sample(const RunConfig& cfg, const std::string& model_arg, const std::string& panel,
               std::ostream& out) {
  ModelSpec spec;
  if (!model_arg.empty()) {
    json m = load_json(model_arg);
    if (!m.contains("n")) m["n"] = cfg.n;
    if (!m.contains("seed")) m["seed"] = cfg.seed;
    spec = model_from_json(m);
  } else if (panel.size() == 1) {
    spec = figure_panel(panel[0], cfg.n, cfg.seed);
  } else {
    throw ValidationError("sample needs --model or --panel");
  }
  const SampledMatrix m = sample(spec, cfg.threads);
  const std::string format = cfg.format_or(cfg.out.empty() ? "csv" : "json");
  if (format == "csv") {
    std::ostringstream os;
    write_matrix_csv(os, m);
    emit(cfg, out, os.str());
    return kOk;
  }
  if (cfg.out.empty()) throw ValidationError("binary export needs --out");
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + cfg.out);
  write_matrix_binary(f, m);
  json j{{"out", cfg.out}, {"n", m.n()}, {"model", to_json(spec)},
         {"provenance", provenance(cfg, spec.seed, spec_hash(spec))}};
  out << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limiting spectral moments and simulation for generalized Wigner matrices"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON run config; its keys override flags");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--format", cfg.format, "text, json or csv");
  app.add_option("--out", cfg.out, "Output file (directory for simulate)");
  app.add_option("--threads", cfg.threads, "Worker threads");
  app.add_option("--budget", cfg.budget, "Work budget for circuits or simulation");
  app.add_flag("--reproducible", cfg.reproducible, "Omit timestamps");
  app.add_option("--quad-points", cfg.quad_points, "Gauss-Legendre points per panel");
  app.add_option("--n", cfg.n, "Matrix size");
  app.add_option("--reps", cfg.reps, "Replicates");
  app.add_option("--two-k", cfg.two_k, "Length 2k, or largest moment order");
  app.fallthrough();

  bool by_blocks = false;
  bool list = false;
  bool count_only = false;
  auto* ss = app.add_subcommand("ss", "Count or list special symmetric words");
  ss->add_option("two_k", cfg.two_k, "Length");
  ss->add_flag("--by-blocks", by_blocks, "Counts per block number");
  ss->add_flag("--list", list, "List the words");
  ss->add_flag("--count-only", count_only, "Total count (default)");

  auto* trees = app.add_subcommand("trees", "List colored rooted trees with their words");
  trees->add_option("two_k", cfg.two_k, "Length");

  std::string word;
  std::string n_list;
  auto* circuits = app.add_subcommand("circuits", "Exact circuit counts for a word");
  circuits->add_option("word", word, "Word such as abba or 1,2,2,1")->required();
  circuits->add_option("--sizes", n_list, "Matrix sizes, e.g. 2,3,4 or 2..8");

  std::string theory_arg;
  auto* moments = app.add_subcommand("moments", "Limiting moments from a theory config");
  moments->add_option("--theory", theory_arg, "Theory config file or inline JSON");

  std::string sim_arg;
  std::string panel;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo moments and spectra");
  simulate->add_option("--sim", sim_arg, "Simulation config file or inline JSON");
  simulate->add_option("--panel", panel, "Demonstration ensemble a, b, c or d");

  double threshold = 4.0;
  auto* compare = app.add_subcommand("compare", "Theory versus simulation z-scores");
  compare->add_option("--theory", theory_arg, "Theory config")->required();
  compare->add_option("--sim", sim_arg, "Simulation config")->required();
  compare->add_option("--threshold", threshold, "Largest accepted |z|");

  std::string bounds;
  int K = 12;
  int ss_max_k = 6;
  auto* carleman = app.add_subcommand("carleman", "Partial sums of the Carleman series");
  carleman->add_option("--bounds", bounds, "M_2,M_4,... (missing entries are zero)")->required();
  carleman->add_option("--K", K, "Number of terms");
  carleman->add_option("--ss-max-k", ss_max_k, "Terms for the SS-restricted comparison");

  std::string model_arg;
  auto* sample_cmd = app.add_subcommand("sample", "Sample one matrix and export it");
  sample_cmd->add_option("--model", model_arg, "Model config file or inline JSON");
  sample_cmd->add_option("--panel", panel, "Demonstration ensemble a, b, c or d");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? kOk : kValidation;
  }

  try {
    if (!config_path.empty()) cfg.apply(load_json(config_path));
    if (cfg.threads < 1) throw ValidationError("threads must be at least 1");
    if (*ss) return cmd_ss(cfg, by_blocks, list, out, err);
    if (*trees) return cmd_trees(cfg, out, err);
    if (*circuits) return cmd_circuits(cfg, word, n_list, out);
    if (*moments) return cmd_moments(cfg, theory_arg, out);
    if (*simulate) return cmd_simulate(cfg, sim_arg, panel, out);
    if (*compare) return cmd_compare(cfg, theory_arg, sim_arg, threshold, out);
    if (*carleman) return cmd_carleman(cfg, bounds, K, ss_max_k, out);
    if (*sample_cmd) return cmd_sample(cfg, model_arg, panel, out);
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << " (required about " << e.required() << ")\n";
    return kCapacity;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace wigner::cli
