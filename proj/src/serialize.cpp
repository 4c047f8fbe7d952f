#include "wigner/serialize.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "wigner/errors.hpp"

namespace wigner {

nlohmann::json to_json(const Partition& p) { return p.blocks; }

Partition partition_from_json(const nlohmann::json& j) {
  try {
    return Partition{j.get<std::vector<std::vector<int>>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("partition must be an array of integer arrays: ") + e.what());
  }
}

namespace {

nlohmann::json tree_node(const ColoredRootedTree& t, int i) {
  nlohmann::json kids = nlohmann::json::array();
  for (int c : t.node(i).children) kids.push_back(tree_node(t, c));
  return {{"color", t.node(i).color}, {"children", kids}};
}

void read_children(const nlohmann::json& j, ColoredRootedTree& t, int parent) {
  if (!j.contains("children")) return;
  for (const auto& c : j.at("children")) {
    const int id = t.add_child(parent, c.at("color").get<int>());
    read_children(c, t, id);
  }
}

}  // namespace

nlohmann::json to_json(const ColoredRootedTree& t) { return tree_node(t, 0); }

ColoredRootedTree tree_from_json(const nlohmann::json& j) {
  try {
    if (j.at("color").get<int>() != 0) throw ValidationError("tree root must carry color 0");
    ColoredRootedTree t;
    read_children(j, t, 0);
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed tree JSON: ") + e.what());
  }
}

nlohmann::json to_json(const MomentTerm& t) {
  return {{"order", t.order},
          {"value", t.value},
          {"error", t.error},
          {"provenance", to_string(t.provenance)}};
}

nlohmann::json to_json(const MomentSeries& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : s.terms) terms.push_back(to_json(t));
  return {{"description", s.description}, {"terms", terms}};
}

nlohmann::json to_json(const CircuitCount& c) {
  return {{"word", c.word.to_string()},
          {"n", c.n},
          {"count", c.count},
          {"ratio", c.ratio.to_string()},
          {"ratio_value", c.ratio.to_double()}};
}

nlohmann::json to_json(const Histogram& h) {
  return {{"edges", h.edges}, {"counts", h.counts}, {"density", h.density()}};
}

void write_csv(std::ostream& out, const MomentSeries& s) {
  out << "2k,beta,error_estimate,provenance\n";
  out.precision(17);
  for (const auto& t : s.terms) {
    out << t.order << ',' << t.value << ',' << t.error << ',' << to_string(t.provenance) << '\n';
  }
}

void write_csv(std::ostream& out, std::span<const CircuitCount> rows) {
  out << "word,n,count,ratio\n";
  for (const auto& r : rows) {
    out << r.word.to_string() << ',' << r.n << ',' << r.count << ',' << r.ratio.to_string() << '\n';
  }
}

void write_csv(std::ostream& out, const Histogram& h) {
  out << "bin_left,bin_right,density\n";
  out.precision(17);
  const auto d = h.density();
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << h.edges[i] << ',' << h.edges[i + 1] << ',' << d[i] << '\n';
  }
}

namespace {

constexpr char kMagic[8] = {'W', 'G', 'N', 'R', 'M', 'A', 'T', '1'};

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw ValidationError("truncated matrix file");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_matrix_binary(std::ostream& out, const SampledMatrix& m) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.n()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.spec.variant));
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, m.spec.seed);
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) put<double>(out, m.data(i, j));
  }
}

SampledMatrix read_matrix_binary(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ValidationError("not a matrix file (bad magic)");
  }
  const auto n = get<std::uint64_t>(in);
  const auto variant = get<std::uint32_t>(in);
  get<std::uint32_t>(in);
  const auto seed = get<std::uint64_t>(in);
  if (n > 100000 || variant > static_cast<std::uint32_t>(Variant::Block)) {
    throw ValidationError("matrix header out of range");
  }
  SampledMatrix m;
  m.spec.variant = static_cast<Variant>(variant);
  m.spec.n = static_cast<int>(n);
  m.spec.seed = seed;
  m.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.data.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.data.cols(); ++j) m.data(i, j) = get<double>(in);
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const SampledMatrix& m) {
  if (m.n() > 200) throw CapacityError("CSV export is limited to n <= 200", m.n());
  out.precision(17);
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) out << (j ? "," : "") << m.data(i, j);
    out << '\n';
  }
}

}  // namespace wigner
