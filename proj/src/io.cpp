#include "spg/io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spg {

const char* to_string(Encoding e) { return e == Encoding::Ascii ? "ascii" : "le32"; }

Encoding parse_encoding(const std::string& text) {
  if (text == "ascii") return Encoding::Ascii;
  if (text == "le32") return Encoding::Le32;
  throw std::runtime_error("unknown encoding '" + text + "' (expected ascii|le32)");
}

namespace {

void put_le32(std::ostream& out, std::int32_t v) {
  const std::uint32_t u = static_cast<std::uint32_t>(v);
  const std::array<char, 4> b{static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                              static_cast<char>((u >> 16) & 0xff),
                              static_cast<char>((u >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::int32_t get_le32(std::istream& in) {
  std::array<char, 4> b{};
  in.read(b.data(), 4);
  if (in.gcount() != 4) throw std::runtime_error("SPG1: truncated le32 body");
  const std::uint32_t u = (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[0]))) |
                          (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[1])) << 8) |
                          (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[2])) << 16) |
                          (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[3])) << 24);
  return static_cast<std::int32_t>(u);
}

template <typename Scalar>
void write_grid_impl(std::ostream& out, const GridField<Scalar>& g, Encoding encoding) {
  out << "SPG1\n";
  out << "dim " << g.dim() << "\n";
  out << "radius " << g.radius() << "\n";
  out << "encoding " << to_string(encoding) << "\n";
  const std::int64_t row = g.side();
  if (encoding == Encoding::Ascii) {
    for (Index i = 0; i < g.size(); ++i) {
      out << static_cast<std::int64_t>(g[i]);
      out << ((i % row == row - 1) ? '\n' : ' ');
    }
  } else {
    for (Index i = 0; i < g.size(); ++i) {
      const std::int64_t v = static_cast<std::int64_t>(g[i]);
      if (v < std::numeric_limits<std::int32_t>::min() ||
          v > std::numeric_limits<std::int32_t>::max())
        throw std::runtime_error("SPG1: value " + std::to_string(v) +
                                 " does not fit le32 encoding");
      put_le32(out, static_cast<std::int32_t>(v));
    }
  }
  if (!out) throw std::runtime_error("SPG1: write failed");
}

std::string read_header_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("SPG1: truncated header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::int64_t header_value(const std::string& line, const std::string& key) {
  if (line.rfind(key + " ", 0) != 0)
    throw std::runtime_error("SPG1: expected '" + key + " <value>', got '" + line + "'");
  try {
    std::size_t pos = 0;
    const std::string rest = line.substr(key.size() + 1);
    const std::int64_t v = std::stoll(rest, &pos);
    if (pos != rest.size()) throw std::runtime_error("");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("SPG1: bad value in header line '" + line + "'");
  }
}

}  // namespace

void write_grid(std::ostream& out, const GridWindow& g, Encoding encoding) {
  write_grid_impl(out, g, encoding);
}

void write_grid(std::ostream& out, const Odometer& g, Encoding encoding) {
  write_grid_impl(out, g, encoding);
}

GridWindow read_grid(std::istream& in) {
  if (read_header_line(in) != "SPG1") throw std::runtime_error("SPG1: magic mismatch");
  const std::int64_t dim = header_value(read_header_line(in), "dim");
  const std::int64_t radius = header_value(read_header_line(in), "radius");
  const std::string enc_line = read_header_line(in);
  if (enc_line.rfind("encoding ", 0) != 0)
    throw std::runtime_error("SPG1: expected encoding header, got '" + enc_line + "'");
  const Encoding encoding = parse_encoding(enc_line.substr(9));

  if (dim < 1 || dim > kMaxDim)
    throw std::runtime_error("SPG1: dim out of range: " + std::to_string(dim));
  if (radius < 0) throw std::runtime_error("SPG1: negative radius");

  GridWindow g(static_cast<int>(dim), radius);
  if (encoding == Encoding::Ascii) {
    for (Index i = 0; i < g.size(); ++i) {
      std::int64_t v;
      if (!(in >> v))
        throw std::runtime_error("SPG1: body ends after " + std::to_string(i) + " of " +
                                 std::to_string(g.size()) + " values");
      if (v < std::numeric_limits<Height>::min() || v > std::numeric_limits<Height>::max())
        throw std::runtime_error("SPG1: value " + std::to_string(v) + " out of height range");
      g[i] = static_cast<Height>(v);
    }
    std::int64_t extra;
    if (in >> extra)
      throw std::runtime_error("SPG1: trailing data after " + std::to_string(g.size()) +
                               " values (radius/length inconsistency)");
  } else {
    for (Index i = 0; i < g.size(); ++i) g[i] = get_le32(in);
    char extra;
    if (in.read(&extra, 1); in.gcount() == 1)
      throw std::runtime_error("SPG1: trailing data (radius/length inconsistency)");
  }
  return g;
}

void write_grid_file(const std::string& path, const GridWindow& g, Encoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_grid(out, g, encoding);
}

void write_grid_file(const std::string& path, const Odometer& g, Encoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_grid(out, g, encoding);
}

GridWindow read_grid_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_grid(in);
}

}  // namespace spg
