#pragma once

// JSON exchange for matrices and vector families:
//   {"rows": r, "cols": c, "complex": bool, "data": [x, ...] | [[re, im], ...]}
// row-major. A family is stored as the matrix whose rows are its vectors.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "tripave/linalg.hpp"

namespace tripave {

nlohmann::ordered_json MatrixToJson(const Matrix& m);
Matrix MatrixFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json FamilyToJson(const VectorFamily& f);
VectorFamily FamilyFromJson(const nlohmann::ordered_json& j);

nlohmann::ordered_json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

// Canonical text form used for report bodies: two-space indent, trailing
// newline.
std::string Dump(const nlohmann::ordered_json& j);

// 64-bit FNV-1a, hex encoded.
std::string Fnv1aHex(const std::string& bytes);

}  // namespace tripave
