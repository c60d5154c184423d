#pragma once

// JSON forms of matrices, states, hashes and report records.
//
// Matrix: {"rows": r, "cols": c, "dims": [...], "data": [[re, im], ...]},
// row-major. States add "kind" ("pure" stores the amplitude column) and
// "subsystems": [["A", 2], ...]. Binary matrices are lists of bitstrings.

#include "palab/distill.hpp"
#include "palab/gf2.hpp"
#include "palab/privstate.hpp"
#include "palab/qmatrix.hpp"
#include "palab/states.hpp"

#include <json.hpp>

namespace palab {

using json = nlohmann::json;

json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json to_json(const MultipartiteState& s);
MultipartiteState state_from_json(const json& j);

json to_json(const BinaryMatrix& b);
BinaryMatrix binary_from_json(const json& j);

json to_json(const PrivacyDiagnostics& d);
json to_json(const SuccessReport& r);
json to_json(const EquivalenceReport& r);
/// The post-state is included only on request; it can be large.
json to_json(const DistillationOutcome& o, bool with_state = false);

/// Low-order bits of `bits` as a string of `width` characters, MSB first.
std::string bitstring(std::uint64_t bits, std::size_t width);

}  // namespace palab
