#pragma once

#include <string>

#include "ropit/roabp.hpp"
#include "ropit/sparse.hpp"

namespace ropit {

/// Canonical program file: JSON with keys modulus, num_vars, levels (node-id
/// lists per level), edges ({from, to, label}) where label is {"var": i} or
/// {"const": c} with c already reduced. serialize(parse(text)) is
/// byte-identical for canonical emissions.
std::string serialize_program(const Roabp& program);
Roabp parse_program(const std::string& text);

Roabp load_program_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Expansion dump: one line per term, "coefficient : sorted variable indices",
/// lines sorted lexicographically by the index lists.
std::string expansion_dump(const SparseMultilinear& f);

} // namespace ropit
