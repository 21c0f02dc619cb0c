#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "robtrade/linalg.hpp"

namespace robtrade {

/// Shortest decimal that round-trips the double.
std::string format_double(double value);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

inline constexpr const char* kToolVersion = ROBTRADE_VERSION;

}  // namespace robtrade
