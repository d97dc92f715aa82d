#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ctedit/field.hpp"
#include "ctedit/topology.hpp"

namespace fixtures {

inline ctedit::ChannelField field(int w, int h, std::vector<double> values,
                                  ctedit::ChannelId channel = ctedit::ChannelId::Red) {
  return ctedit::ChannelField(w, h, channel, std::move(values));
}

inline ctedit::ImageRGB gray_image(const ctedit::ChannelField& f) {
  ctedit::ImageRGB img(f.width, f.height);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(f.values[i], 0.0, 255.0)));
    img[i] = {v, v, v};
  }
  return img;
}

// Terrain grid with the lettered critical structure worked through in the
// README: minima d < c < m < l, join saddles h and o, maxima a > j with split
// saddle f, and the m/o branch running m -> i -> n -> o. 4-connected.
//
//   d c b o n
//   h g k j i
//   l e a f m
struct Terrain {
  static constexpr int kWidth = 5;
  static constexpr int kHeight = 3;
  std::map<char, int> pixel;  // letter -> raster index
  std::vector<double> values;

  Terrain() {
    const char* letters = "dcbonhgkjileafm";
    const double v[] = {1, 2, 8, 10, 7, 5, 11, 12, 14, 6, 4, 9, 15, 13, 3};
    for (int i = 0; i < kWidth * kHeight; ++i) {
      pixel[letters[i]] = i;
      values.push_back(v[i] * 10.0);
    }
  }

  ctedit::ChannelField field() const { return fixtures::field(kWidth, kHeight, values); }
  double value(char letter) const { return values[pixel.at(letter)]; }
};

// Uniform integer field in [0, levels).
inline ctedit::ChannelField random_field(std::mt19937& rng, int w, int h, int levels) {
  std::uniform_int_distribution<int> dist(0, levels - 1);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = dist(rng);
  return field(w, h, std::move(v));
}

// Field with pairwise distinct values, so plateaus never form.
inline ctedit::ChannelField random_distinct_field(std::mt19937& rng, int w, int h) {
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i) * 3.0;
  std::shuffle(v.begin(), v.end(), rng);
  return field(w, h, std::move(v));
}

// Pixels belonging to the given super-pixels, sorted.
inline std::vector<int> pixels_of(const ctedit::SuperPixelGraph& graph,
                                  const std::vector<int>& nodes) {
  std::vector<int> out;
  for (int n : nodes) {
    for (int p : graph.members(n)) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline const ctedit::FeaturePair* find_pair(const std::vector<ctedit::FeaturePair>& pairs,
                                            ctedit::FeatureKind kind, int extremum_pixel,
                                            const ctedit::SuperPixelGraph& graph) {
  for (const auto& p : pairs) {
    if (p.kind == kind && p.extremum == graph.node_of(extremum_pixel)) return &p;
  }
  return nullptr;
}

// Tilted plane with one single-pixel pit (join) or peak (split) well inside.
// The extremum's only partner is its steepest neighbor, and the plane is far
// enough from the global extrema that stretching by up to `max_scale` keeps
// the pairing intact.
struct IsolatedFeature {
  ctedit::ChannelField field{1, 1, ctedit::ChannelId::Red, {0.0}};
  int extremum_pixel = 0;
  ctedit::FeatureKind kind = ctedit::FeatureKind::Join;
  double max_scale = 1.0;
};

inline IsolatedFeature isolated_feature(std::mt19937& rng, int w, int h) {
  std::uniform_real_distribution<double> slope(3.0, 8.0);
  const double a = slope(rng);
  double b = slope(rng);
  if (std::abs(a - b) < 0.25) b += 0.5;
  // Deeper than a + b would drop below the plane's corner and turn the pit
  // into the global minimum.
  std::uniform_real_distribution<double> depth(1.0, a + b - 1.0);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) v[static_cast<std::size_t>(y) * w + x] = 1000.0 + a * x + b * y;
  }
  std::uniform_int_distribution<int> cx(2, w - 3);
  std::uniform_int_distribution<int> cy(2, h - 3);
  const int x = cx(rng);
  const int y = cy(rng);
  const std::size_t c = static_cast<std::size_t>(y) * w + x;
  IsolatedFeature out;
  out.extremum_pixel = static_cast<int>(c);
  const double d = depth(rng);
  if (rng() % 2) {
    out.kind = ctedit::FeatureKind::Join;
    v[c] -= a + b + d;
    const double saddle = v[c - w - 1];
    out.max_scale = (saddle - v[0] - 1.0) / (saddle - v[c]);
  } else {
    out.kind = ctedit::FeatureKind::Split;
    v[c] += a + b + d;
    const double saddle = v[c + w + 1];
    out.max_scale = (v.back() - saddle - 1.0) / (v[c] - saddle);
  }
  out.field = field(w, h, std::move(v));
  return out;
}

}  // namespace fixtures
