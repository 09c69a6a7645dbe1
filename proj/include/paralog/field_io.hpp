#pragma once

// Field files: one JSON header line {version, n, shape, box_len, time_len,
// origin, manifest}, a newline, then little-endian float64 values in
// row-major order.

#include "paralog/grid.hpp"

#include <string>

namespace paralog {

inline constexpr int kFieldFormatVersion = 1;

struct FieldFile {
    Field field;
    std::string manifest;  ///< serialized JSON object, "{}" if absent
};

/// Writes through a temporary file and renames it into place.
void write_field(const std::string& path, const Field& f, const std::string& manifest_json = "{}");

FieldFile read_field(const std::string& path);

/// Atomic text write (temporary file + rename).
void write_text(const std::string& path, const std::string& contents);

}  // namespace paralog
