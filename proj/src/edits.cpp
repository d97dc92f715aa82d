#include "ctedit/edits.hpp"

#include <cmath>
#include <string>

#include "ctedit/errors.hpp"

namespace ctedit {

std::string_view to_string(EditOp op) {
  switch (op) {
    case EditOp::Contrast: return "contrast";
    case EditOp::Denoise: return "denoise";
    case EditOp::Brightness: return "brightness";
    case EditOp::Gamma: return "gamma";
  }
  return "unknown";
}

EditOp parse_edit_op(std::string_view name) {
  if (name == "contrast") return EditOp::Contrast;
  if (name == "denoise") return EditOp::Denoise;
  if (name == "brightness") return EditOp::Brightness;
  if (name == "gamma") return EditOp::Gamma;
  throw Error(ErrorCode::InvalidArgument, "unknown edit op '" + std::string(name) + "'");
}

void check_scale(EditOp op, double scale) {
  if (!std::isfinite(scale)) {
    throw Error(ErrorCode::ScaleOutOfRange, "scale must be finite");
  }
  switch (op) {
    case EditOp::Contrast:
      if (scale < 1.0) throw Error(ErrorCode::ScaleOutOfRange, "contrast requires s≥1");
      return;
    case EditOp::Denoise:
      if (scale < 0.0 || scale > 1.0) {
        throw Error(ErrorCode::ScaleOutOfRange, "denoise requires 0≤s≤1");
      }
      return;
    case EditOp::Brightness:
      if (scale < -255.0 || scale > 255.0) {
        throw Error(ErrorCode::ScaleOutOfRange, "brightness requires −255≤s≤255");
      }
      return;
    case EditOp::Gamma:
      if (scale <= 0.0) throw Error(ErrorCode::ScaleOutOfRange, "gamma requires γ>0");
      return;
  }
}

double gamma_value(double f, double birth, double death, double gamma) {
  if (gamma == 1.0) return f;
  const double t = (f - death) / (birth - death);
  if (!(t >= 0.0 && t <= 1.0)) return f;
  const double curved = std::pow(t, gamma);
  return death * (1.0 - curved) + birth * curved;
}

namespace {

template <typename Fn>
void transform_subtree(ChannelField& field, const SuperPixelGraph& graph,
                       std::span<const int> subtree, Fn&& fn) {
  if (field.width != graph.width() || field.height != graph.height()) {
    throw Error(ErrorCode::DimensionMismatch, "field and super-pixel graph differ in size");
  }
  for (int node : subtree) {
    if (node < 0 || node >= graph.node_count()) {
      throw Error(ErrorCode::InvalidArgument, "subtree references an unknown super-pixel");
    }
    for (auto p : graph.members(node)) field.values[p] = fn(field.values[p]);
  }
}

}  // namespace

void apply_transfer(ChannelField& field, const SuperPixelGraph& graph,
                    std::span<const int> subtree, const FeaturePair& pair, EditOp op,
                    double scale) {
  check_scale(op, scale);
  const double birth = pair.birth;
  const double death = pair.death;
  switch (op) {
    case EditOp::Contrast:
    case EditOp::Denoise:
      transform_subtree(field, graph, subtree,
                        [&](double f) { return stretch_value(f, death, scale); });
      return;
    case EditOp::Brightness:
      transform_subtree(field, graph, subtree,
                        [&](double f) { return shift_value(f, scale); });
      return;
    case EditOp::Gamma:
      if (birth == death) {
        throw Error(ErrorCode::ZeroPersistenceFeature,
                    "gamma needs a feature with non-zero persistence");
      }
      transform_subtree(field, graph, subtree,
                        [&](double f) { return gamma_value(f, birth, death, scale); });
      return;
  }
}

ChannelField apply_contrast(const ChannelField& field, const SuperPixelGraph& graph,
                            std::span<const int> subtree, const FeaturePair& pair, double s) {
  ChannelField out = field;
  apply_transfer(out, graph, subtree, pair, EditOp::Contrast, s);
  return out;
}

ChannelField apply_denoise(const ChannelField& field, const SuperPixelGraph& graph,
                           std::span<const int> subtree, const FeaturePair& pair, double s) {
  ChannelField out = field;
  apply_transfer(out, graph, subtree, pair, EditOp::Denoise, s);
  return out;
}

ChannelField apply_brightness(const ChannelField& field, const SuperPixelGraph& graph,
                              std::span<const int> subtree, const FeaturePair& pair, double s) {
  ChannelField out = field;
  apply_transfer(out, graph, subtree, pair, EditOp::Brightness, s);
  return out;
}

ChannelField apply_gamma(const ChannelField& field, const SuperPixelGraph& graph,
                         std::span<const int> subtree, const FeaturePair& pair, double gamma) {
  ChannelField out = field;
  apply_transfer(out, graph, subtree, pair, EditOp::Gamma, gamma);
  return out;
}

}  // namespace ctedit
