#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ctedit/field.hpp"
#include "ctedit/topology.hpp"

namespace ctedit {

enum class EditOp { Contrast, Denoise, Brightness, Gamma };

std::string_view to_string(EditOp op);
EditOp parse_edit_op(std::string_view name);

/// Throws ScaleOutOfRange when `scale` violates the op's bound:
/// contrast s >= 1, denoise 0 <= s <= 1, brightness -255 <= s <= 255,
/// gamma > 0.
void check_scale(EditOp op, double scale);

// Per-value transfer functions. `birth`/`death` are the feature's values.

/// Contrast and denoise share one formula: death + (f - death) * s.
/// s == 1 returns f untouched (the rounded formula is not always bit-exact).
inline double stretch_value(double f, double death, double s) {
  if (s == 1.0) return f;
  return death + (f - death) * s;
}

inline double shift_value(double f, double s) { return f + s; }

/// Normalizes f to t = (f - death) / (birth - death), raises it to gamma and
/// maps back by linear interpolation between death and birth. Values outside
/// the [death, birth] span (enclosed structures inside the subtree) are left
/// alone; the map stays continuous and monotone because both ends are fixed,
/// and enclosed extrema keep their values, so no elder comparison can flip.
double gamma_value(double f, double birth, double death, double gamma);

struct EditRequest {
  EditOp op = EditOp::Contrast;
  double scale = 1.0;
  std::vector<int> targets;  // pair ids after inclusion filtering
  ChannelId channel = ChannelId::Brightness;
};

// Each applies the transfer to every pixel of every super-pixel in `subtree`
// and returns the edited copy; pixels outside are untouched.
ChannelField apply_contrast(const ChannelField& field, const SuperPixelGraph& graph,
                            std::span<const int> subtree, const FeaturePair& pair, double s);
ChannelField apply_denoise(const ChannelField& field, const SuperPixelGraph& graph,
                           std::span<const int> subtree, const FeaturePair& pair, double s);
ChannelField apply_brightness(const ChannelField& field, const SuperPixelGraph& graph,
                              std::span<const int> subtree, const FeaturePair& pair, double s);
ChannelField apply_gamma(const ChannelField& field, const SuperPixelGraph& graph,
                         std::span<const int> subtree, const FeaturePair& pair, double gamma);

/// In-place dispatch used by multi-pair edits.
void apply_transfer(ChannelField& field, const SuperPixelGraph& graph,
                    std::span<const int> subtree, const FeaturePair& pair, EditOp op,
                    double scale);

}  // namespace ctedit
