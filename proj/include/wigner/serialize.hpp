#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "wigner/circuits.hpp"
#include "wigner/moments.hpp"
#include "wigner/spectra.hpp"
#include "wigner/trees.hpp"
#include "wigner/word.hpp"

namespace wigner {

nlohmann::json to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j);

/// {"color": c, "children": [...]}
nlohmann::json to_json(const ColoredRootedTree& t);
ColoredRootedTree tree_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MomentTerm& t);
nlohmann::json to_json(const MomentSeries& s);
nlohmann::json to_json(const CircuitCount& c);
nlohmann::json to_json(const Histogram& h);

/// 2k,beta,error_estimate,provenance
void write_csv(std::ostream& out, const MomentSeries& s);
/// word,n,count,ratio
void write_csv(std::ostream& out, std::span<const CircuitCount> rows);
/// bin_left,bin_right,density
void write_csv(std::ostream& out, const Histogram& h);

/// Little-endian layout: "WGNRMAT1", uint64 n, uint32 variant, uint32 zero,
/// uint64 seed, then n * n float64 in row-major order.
void write_matrix_binary(std::ostream& out, const SampledMatrix& m);
SampledMatrix read_matrix_binary(std::istream& in);

/// Plain comma-separated rows; refuses n > 200.
void write_matrix_csv(std::ostream& out, const SampledMatrix& m);

}  // namespace wigner
