#pragma once

#include "spg/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace spg {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Total map from heights to colors: explicit entries plus catch-all bands
/// below the smallest and above the largest entry. Heights falling in a
/// gap between entries take the above-band color.
class Palette {
 public:
  Palette(std::string name, std::map<Height, Rgb> entries, Rgb below, Rgb above);

  Rgb color(Height h) const;

  const std::string& name() const { return name_; }
  const std::map<Height, Rgb>& entries() const { return entries_; }
  Rgb below() const { return below_; }
  Rgb above() const { return above_; }

  /// Built-in palettes: "fig1" (heights 0..3: red, yellow, turquoise,
  /// blue; orange below, black above — the black band doubles as the
  /// unstable-site marker) and "fig4" (heights 0..5: white, gray, red,
  /// yellow, turquoise, blue). "fig2" and "fig3" alias "fig1".
  static const Palette& named(const std::string& name);
  static std::vector<std::string> names();

  std::string to_json_string() const;
  static Palette from_json_string(const std::string& text);
  static Palette load_file(const std::string& path);

 private:
  std::string name_;
  std::map<Height, Rgb> entries_;
  Rgb below_;
  Rgb above_;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, rows top to bottom

  bool operator==(const Image&) const = default;
};

/// Fixes coordinates (1-based axis, value) for rendering d >= 3 windows.
using SliceSpec = std::vector<std::pair<int, std::int64_t>>;

/// One pixel per site. After applying the slice there must be one or two
/// free axes left; the first free axis runs top to bottom, the second left
/// to right (a 1-d window renders as a single pixel row). Deterministic
/// bytes for a given (grid, palette, slice).
Image render(const GridWindow& g, const Palette& palette, const SliceSpec& slice = {});

/// Binary portable pixmap (P6).
void write_ppm(std::ostream& out, const Image& img);
void write_ppm_file(const std::string& path, const Image& img);

}  // namespace spg
