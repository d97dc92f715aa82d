#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace ctedit {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster, row-major.
class ImageRGB {
 public:
  ImageRGB() = default;
  ImageRGB(int width, int height, Rgb fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  Rgb& operator[](std::size_t i) { return pixels_[i]; }
  const Rgb& operator[](std::size_t i) const { return pixels_[i]; }
  Rgb& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const Rgb& at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::vector<Rgb>& pixels() const noexcept { return pixels_; }

  friend bool operator==(const ImageRGB&, const ImageRGB&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Channels that carry a contour tree. Hue lives on a circle and has no
/// meaningful sublevel sets, so it is deliberately not representable.
enum class ChannelId { Red, Green, Blue, Saturation, Brightness };

inline constexpr std::array<ChannelId, 5> kAllChannels = {
    ChannelId::Red, ChannelId::Green, ChannelId::Blue, ChannelId::Saturation,
    ChannelId::Brightness};

std::string_view to_string(ChannelId channel);
/// Accepts "red"/"r", "green"/"g", "blue"/"b", "saturation"/"s",
/// "brightness"/"v" (case-insensitive). Throws InvalidArgument otherwise,
/// including for "hue".
ChannelId parse_channel(std::string_view name);

enum class Connectivity { Four = 4, Eight = 8 };

Connectivity parse_connectivity(int n);

/// One real-valued scalar channel over the image grid.
struct ChannelField {
  int width = 0;
  int height = 0;
  ChannelId channel = ChannelId::Red;
  std::vector<double> values;

  ChannelField() = default;
  ChannelField(int w, int h, ChannelId c, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// Real-valued RGB planes. Edits accumulate here; quantization to 8 bits
/// happens only when rendering.
struct WorkingImage {
  int width = 0;
  int height = 0;
  std::vector<double> r, g, b;

  std::size_t size() const noexcept { return r.size(); }
};

WorkingImage to_working(const ImageRGB& image);
/// round(clamp(v, 0, 255)) per component.
ImageRGB quantize(const WorkingImage& image);

ChannelField extract_channel(const ImageRGB& image, ChannelId channel);
ChannelField extract_channel(const WorkingImage& image, ChannelId channel);

/// Writes `field` back as `channel`. R/G/B replace the component; S and B are
/// recombined through HSB using the pixel's current hue and the other HSB
/// component. Values are not clamped here.
void write_channel(WorkingImage& image, const ChannelField& field);
/// Quantizing variant over an 8-bit image.
ImageRGB write_channel(const ImageRGB& image, ChannelId channel,
                       const ChannelField& field);

// HSB with saturation and brightness on [0, 255]; hue is a sector position
// in [0, 6). Achromatic pixels get hue 0.
struct Hsb {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

Hsb rgb_to_hsb(double r, double g, double b);
std::array<double, 3> hsb_to_rgb(const Hsb& hsb);

}  // namespace ctedit
