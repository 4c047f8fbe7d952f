#include <doctest.h>

#include <sstream>

#include "wigner/errors.hpp"
#include "wigner/serialize.hpp"

using namespace wigner;
using nlohmann::json;

TEST_CASE("partitions and trees") {
  const Partition p{{{1, 4}, {2, 3}}};
  CHECK(to_json(p) == json::parse("[[1,4],[2,3]]"));
  CHECK(partition_from_json(to_json(p)) == p);
  const auto t = ColoredRootedTree::parse_text("0(1,1(2),3)");
  const json j = to_json(t);
  CHECK(j["color"] == 0);
  CHECK(j["children"].size() == 3);
  CHECK(tree_from_json(j) == t);
  CHECK_THROWS_AS(tree_from_json(json::parse(R"({"children":[]})")), ValidationError);
}

TEST_CASE("series CSV and JSON") {
  MomentSeries s{"semi", {{2, 1.0, 0.0, Provenance::Exact}, {4, 2.0, 1e-3, Provenance::Quadrature}}};
  std::ostringstream os;
  write_csv(os, s);
  const std::string text = os.str();
  CHECK(text.rfind("2k,beta,error_estimate,provenance\n", 0) == 0);
  CHECK(text.find("\n4,2,0.001,quadrature") != std::string::npos);
  const json j = to_json(s);
  CHECK(j["description"] == "semi");
  CHECK(j["terms"][1]["value"] == 2.0);
}

TEST_CASE("circuit and histogram CSV") {
  const std::vector<CircuitCount> rows{count_circuits(Word::parse("aa"), 3)};
  std::ostringstream os;
  write_csv(os, std::span<const CircuitCount>(rows));
  CHECK(os.str() == "word,n,count,ratio\naa,3,9,1\n");
  const Histogram h = histogram(ESD{{0.0, 1.0}, ""}, 2);
  std::ostringstream hs;
  write_csv(hs, h);
  CHECK(hs.str().rfind("bin_left,bin_right,density\n", 0) == 0);
}

TEST_CASE("binary matrix round trip") {
  ModelSpec s;
  s.n = 17;
  s.seed = 99;
  const SampledMatrix m = sample(s);
  std::stringstream buf;
  write_matrix_binary(buf, m);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 8) == "WGNRMAT1");
  CHECK(bytes.size() == 8 + 8 + 4 + 4 + 8 + 17 * 17 * 8);
  const SampledMatrix back = read_matrix_binary(buf);
  CHECK(back.data == m.data);
  CHECK(back.spec.seed == 99);
  std::stringstream junk("NOTAMATRIX");
  CHECK_THROWS_AS(read_matrix_binary(junk), ValidationError);
  ModelSpec big;
  big.n = 201;
  std::ostringstream csv;
  CHECK_THROWS_AS(write_matrix_csv(csv, sample(big)), CapacityError);
}
