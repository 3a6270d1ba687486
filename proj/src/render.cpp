#include "spg/render.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace spg {

namespace {

constexpr Rgb kBlue{0, 0, 255};
constexpr Rgb kTurquoise{64, 224, 208};
constexpr Rgb kYellow{255, 255, 0};
constexpr Rgb kRed{255, 0, 0};
constexpr Rgb kGray{128, 128, 128};
constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kOrange{255, 165, 0};
constexpr Rgb kBlack{0, 0, 0};

}  // namespace

Palette::Palette(std::string name, std::map<Height, Rgb> entries, Rgb below, Rgb above)
    : name_(std::move(name)), entries_(std::move(entries)), below_(below), above_(above) {
  if (entries_.empty()) throw std::invalid_argument("palette needs at least one entry");
}

Rgb Palette::color(Height h) const {
  const auto it = entries_.find(h);
  if (it != entries_.end()) return it->second;
  return h < entries_.begin()->first ? below_ : above_;
}

const Palette& Palette::named(const std::string& name) {
  static const Palette fig1{
      "fig1", {{0, kRed}, {1, kYellow}, {2, kTurquoise}, {3, kBlue}}, kOrange, kBlack};
  static const Palette fig4{
      "fig4",
      {{0, kWhite}, {1, kGray}, {2, kRed}, {3, kYellow}, {4, kTurquoise}, {5, kBlue}},
      kOrange,
      kBlack};
  if (name == "fig1" || name == "fig2" || name == "fig3") return fig1;
  if (name == "fig4") return fig4;
  throw std::invalid_argument("unknown palette '" + name + "'");
}

std::vector<std::string> Palette::names() { return {"fig1", "fig2", "fig3", "fig4"}; }

std::string Palette::to_json_string() const {
  nlohmann::json j;
  j["name"] = name_;
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [h, c] : entries_)
    entries[std::to_string(h)] = nlohmann::json::array({c.r, c.g, c.b});
  j["entries"] = entries;
  j["below"] = nlohmann::json::array({below_.r, below_.g, below_.b});
  j["above"] = nlohmann::json::array({above_.r, above_.g, above_.b});
  return j.dump(2);
}

namespace {

Rgb rgb_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("palette color must be [r,g,b]");
  return Rgb{j[0].get<std::uint8_t>(), j[1].get<std::uint8_t>(), j[2].get<std::uint8_t>()};
}

}  // namespace

Palette Palette::from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::map<Height, Rgb> entries;
  for (const auto& [key, value] : j.at("entries").items())
    entries[static_cast<Height>(std::stol(key))] = rgb_from_json(value);
  return Palette(j.value("name", "custom"), std::move(entries), rgb_from_json(j.at("below")),
                 rgb_from_json(j.at("above")));
}

Palette Palette::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open palette file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

Image render(const GridWindow& g, const Palette& palette, const SliceSpec& slice) {
  const int d = g.dim();
  std::vector<bool> fixed(static_cast<std::size_t>(d), false);
  Point base = Point::Zero(d);
  for (const auto& [axis, value] : slice) {
    if (axis < 1 || axis > d)
      throw std::invalid_argument("slice axis " + std::to_string(axis) + " out of range");
    if (fixed[static_cast<std::size_t>(axis - 1)])
      throw std::invalid_argument("slice axis " + std::to_string(axis) + " fixed twice");
    if (std::abs(value) > g.radius())
      throw std::invalid_argument("slice value " + std::to_string(value) +
                                  " outside the window");
    fixed[static_cast<std::size_t>(axis - 1)] = true;
    base[axis - 1] = value;
  }
  std::vector<int> free_axes;
  for (int a = 0; a < d; ++a)
    if (!fixed[static_cast<std::size_t>(a)]) free_axes.push_back(a);
  if (free_axes.empty() || free_axes.size() > 2)
    throw std::invalid_argument("rendering needs one or two free axes, got " +
                                std::to_string(free_axes.size()));

  const std::int64_t side = g.side();
  Image img;
  if (free_axes.size() == 1) {
    img.height = 1;
    img.width = static_cast<int>(side);
  } else {
    img.height = static_cast<int>(side);
    img.width = static_cast<int>(side);
  }
  img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);

  std::size_t at = 0;
  Point p = base;
  const int row_axis = free_axes.size() == 2 ? free_axes[0] : -1;
  const int col_axis = free_axes.size() == 2 ? free_axes[1] : free_axes[0];
  for (int row = 0; row < img.height; ++row) {
    if (row_axis >= 0) p[row_axis] = row - g.radius();
    for (int col = 0; col < img.width; ++col) {
      p[col_axis] = col - g.radius();
      const Rgb c = palette.color(g.at(p));
      img.rgb[at++] = c.r;
      img.rgb[at++] = c.g;
      img.rgb[at++] = c.b;
    }
  }
  return img;
}

void write_ppm(std::ostream& out, const Image& img) {
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()),
            static_cast<std::streamsize>(img.rgb.size()));
  if (!out) throw std::runtime_error("ppm write failed");
}

void write_ppm_file(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_ppm(out, img);
}

}  // namespace spg
