#pragma once

#include <string>

#include <json.hpp>

#include "suborbit/error.hpp"
#include "suborbit/geometry.hpp"
#include "suborbit/sphere_triangles.hpp"
#include "suborbit/witness.hpp"

namespace suborbit::io {

using Json = nlohmann::ordered_json;

/// Semantic version of every document this library writes.
inline constexpr const char* kVersion = "1.0.0";

/// {"kind": kind, "version": kVersion}
Json document(const std::string& kind);

/// Parses text; throws Error(Parse) on malformed JSON.
Json parse(const std::string& text);
/// Throws Error(Parse) unless doc["kind"] == kind and the major version matches.
void expect_kind(const Json& doc, const std::string& kind);

Json to_json(const Vec& v);
Json to_json(const Mat& m);  // array of rows
Vec vec_from_json(const Json& j);
Mat mat_from_json(const Json& j);

/// {"kind":"config","version":..,"points":[[...]],"labels":[...]}
Json config_document(const PointConfiguration& c);
/// Accepts a config document; labels default to "0", "1", ...
PointConfiguration config_from_json(const Json& j, bool on_unit_sphere = false);

Json witness_document(const GroupWitness& w);
GroupWitness witness_from_json(const Json& j);

Json to_json(const VerificationReport& r);

/// Feasible certificate document (kind "certificate").
Json certificate_document(const sphere::DecompositionCertificate& c, const sphere::TriangleSides& target);
sphere::DecompositionCertificate certificate_from_json(const Json& j);

/// {"kind":"error","version":..,"error":{"type":..,"message":..}}
Json error_document(ErrorKind kind, const std::string& message);

/// Deterministic serialization: two-space indentation, trailing newline.
std::string dump(const Json& j);

}  // namespace suborbit::io
