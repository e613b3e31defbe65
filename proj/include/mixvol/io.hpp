#pragma once

// JSON readers for the file formats accepted by the command-line tools.
//
//   ellipsoid:  {"dim": d, "sigma": [[...], ...]}
//   ellipsoids: [ellipsoid, ...] or {"ellipsoids": [...]}
//   matrices:   [[[...]], ...]   or {"matrices": [...]}
//   points:     [[...], ...]     or {"points": [...]}
//   field:      {"dim": d, "components": [{"kind": "trig",
//                 "atoms": [{"w": 1.0, "omega": [1.0, 0.0]}]}]}
//               polynomial atoms: {"w": 1.0, "degree": 2}
//   region:     {"lower": [...], "upper": [...]}
//
// Malformed documents raise Error(InvalidInput); geometric validation errors
// (NotSymmetric, NotPositiveDefinite, ...) propagate with their own names.

#include <string>
#include <vector>

#include <json.hpp>

#include "mixvol/estimator.hpp"
#include "mixvol/field.hpp"
#include "mixvol/geometry.hpp"

namespace mixvol::io {

using Json = nlohmann::json;

Matrix parse_matrix(const Json& j);
Vector parse_vector(const Json& j);
Ellipsoid parse_ellipsoid(const Json& j);
std::vector<Ellipsoid> parse_ellipsoids(const Json& j);
std::vector<Matrix> parse_matrices(const Json& j);
Matrix parse_points(const Json& j);
FieldSpec parse_field(const Json& j);
Region parse_region(const Json& j);

Json to_json(const Ellipsoid& e);
Json to_json(const FieldSpec& spec);
Json to_json(const MCEstimate& e);

struct Document {
  Json json;
  std::string bytes;
};

/// Reads and parses a file; InvalidInput on I/O or syntax errors.
Document read_document(const std::string& path);

/// 64-bit FNV-1a of the concatenated inputs, as 16 hex digits.
std::string content_digest(const std::vector<std::string>& contents);

}  // namespace mixvol::io
