#pragma once

#include "spg/grid.hpp"

#include <iosfwd>
#include <string>

namespace spg {

/// SPG1 grid dump: four ASCII header lines (magic "SPG1", "dim d",
/// "radius R", "encoding ascii|le32") followed by the heights row-major,
/// last axis fastest. le32 bodies are little-endian 32-bit signed values.
enum class Encoding { Ascii, Le32 };

const char* to_string(Encoding e);
Encoding parse_encoding(const std::string& text);

void write_grid(std::ostream& out, const GridWindow& g, Encoding encoding);
/// Odometer counts are written through the same format; le32 requires
/// every value to fit a signed 32-bit integer.
void write_grid(std::ostream& out, const Odometer& g, Encoding encoding);

/// Throws std::runtime_error on magic mismatch, malformed headers,
/// truncated bodies, trailing data, or out-of-range values.
GridWindow read_grid(std::istream& in);

void write_grid_file(const std::string& path, const GridWindow& g, Encoding encoding);
void write_grid_file(const std::string& path, const Odometer& g, Encoding encoding);
GridWindow read_grid_file(const std::string& path);

}  // namespace spg
