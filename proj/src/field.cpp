#include "ctedit/field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ctedit/errors.hpp"

namespace ctedit {

ImageRGB::ImageRGB(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

std::string_view to_string(ChannelId channel) {
  switch (channel) {
    case ChannelId::Red: return "red";
    case ChannelId::Green: return "green";
    case ChannelId::Blue: return "blue";
    case ChannelId::Saturation: return "saturation";
    case ChannelId::Brightness: return "brightness";
  }
  return "unknown";
}

ChannelId parse_channel(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "red" || lower == "r") return ChannelId::Red;
  if (lower == "green" || lower == "g") return ChannelId::Green;
  if (lower == "blue" || lower == "b") return ChannelId::Blue;
  if (lower == "saturation" || lower == "s") return ChannelId::Saturation;
  if (lower == "brightness" || lower == "v" || lower == "value") {
    return ChannelId::Brightness;
  }
  if (lower == "hue" || lower == "h") {
    throw Error(ErrorCode::InvalidArgument,
                "hue is circular and has no contour tree; use red, green, blue, "
                "saturation or brightness");
  }
  throw Error(ErrorCode::InvalidArgument, "unknown channel '" + std::string(name) + "'");
}

Connectivity parse_connectivity(int n) {
  if (n == 4) return Connectivity::Four;
  if (n == 8) return Connectivity::Eight;
  throw Error(ErrorCode::InvalidArgument, "connectivity must be 4 or 8");
}

ChannelField::ChannelField(int w, int h, ChannelId c, std::vector<double> v)
    : width(w), height(h), channel(c), values(std::move(v)) {
  if (w < 1 || h < 1 || values.size() != static_cast<std::size_t>(w) * h) {
    throw Error(ErrorCode::DimensionMismatch, "channel field size does not match dimensions");
  }
}

WorkingImage to_working(const ImageRGB& image) {
  WorkingImage out;
  out.width = image.width();
  out.height = image.height();
  out.r.resize(image.size());
  out.g.resize(image.size());
  out.b.resize(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    out.r[i] = image[i].r;
    out.g[i] = image[i].g;
    out.b[i] = image[i].b;
  }
  return out;
}

namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

double channel_value(double r, double g, double b, ChannelId channel) {
  switch (channel) {
    case ChannelId::Red: return r;
    case ChannelId::Green: return g;
    case ChannelId::Blue: return b;
    case ChannelId::Saturation: return rgb_to_hsb(r, g, b).s;
    case ChannelId::Brightness: return std::max({r, g, b});
  }
  return 0.0;
}

}  // namespace

ImageRGB quantize(const WorkingImage& image) {
  ImageRGB out(image.width, image.height);
  for (std::size_t i = 0; i < image.size(); ++i) {
    out[i] = Rgb{to_byte(image.r[i]), to_byte(image.g[i]), to_byte(image.b[i])};
  }
  return out;
}

Hsb rgb_to_hsb(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  Hsb out;
  out.v = mx;
  out.s = mx > 0.0 ? 255.0 * (mx - mn) / mx : 0.0;
  const double chroma = mx - mn;
  if (chroma > 0.0) {
    double h;
    if (mx == r) {
      h = (g - b) / chroma;
      if (h < 0.0) h += 6.0;
    } else if (mx == g) {
      h = (b - r) / chroma + 2.0;
    } else {
      h = (r - g) / chroma + 4.0;
    }
    out.h = h;
  }
  return out;
}

std::array<double, 3> hsb_to_rgb(const Hsb& hsb) {
  const double chroma = hsb.v * hsb.s / 255.0;
  const double low = hsb.v - chroma;
  double h = std::fmod(hsb.h, 6.0);
  if (h < 0.0) h += 6.0;
  const int sector = std::min(static_cast<int>(h), 5);
  const double frac = h - sector;
  // rising / falling edges of the hexcone
  const double up = low + chroma * frac;
  const double down = hsb.v - chroma * frac;
  switch (sector) {
    case 0: return {hsb.v, up, low};
    case 1: return {down, hsb.v, low};
    case 2: return {low, hsb.v, up};
    case 3: return {low, down, hsb.v};
    case 4: return {up, low, hsb.v};
    default: return {hsb.v, low, down};
  }
}

ChannelField extract_channel(const ImageRGB& image, ChannelId channel) {
  std::vector<double> values(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    values[i] = channel_value(image[i].r, image[i].g, image[i].b, channel);
  }
  return ChannelField(image.width(), image.height(), channel, std::move(values));
}

ChannelField extract_channel(const WorkingImage& image, ChannelId channel) {
  std::vector<double> values(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    values[i] = channel_value(image.r[i], image.g[i], image.b[i], channel);
  }
  return ChannelField(image.width, image.height, channel, std::move(values));
}

void write_channel(WorkingImage& image, const ChannelField& field) {
  if (field.width != image.width || field.height != image.height) {
    throw Error(ErrorCode::DimensionMismatch, "channel field does not match image dimensions");
  }
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double v = field.values[i];
    switch (field.channel) {
      case ChannelId::Red: image.r[i] = v; break;
      case ChannelId::Green: image.g[i] = v; break;
      case ChannelId::Blue: image.b[i] = v; break;
      case ChannelId::Saturation:
      case ChannelId::Brightness: {
        Hsb hsb = rgb_to_hsb(image.r[i], image.g[i], image.b[i]);
        double& component = field.channel == ChannelId::Saturation ? hsb.s : hsb.v;
        // unchanged pixels keep their exact RGB instead of a recomposed copy
        if (component == v) break;
        component = v;
        const auto rgb = hsb_to_rgb(hsb);
        image.r[i] = rgb[0];
        image.g[i] = rgb[1];
        image.b[i] = rgb[2];
        break;
      }
    }
  }
}

ImageRGB write_channel(const ImageRGB& image, ChannelId channel,
                       const ChannelField& field) {
  if (field.channel != channel) {
    ChannelField relabeled = field;
    relabeled.channel = channel;
    return write_channel(image, channel, relabeled);
  }
  WorkingImage working = to_working(image);
  write_channel(working, field);
  return quantize(working);
}

}  // namespace ctedit
