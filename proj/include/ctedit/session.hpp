#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ctedit/edits.hpp"
#include "ctedit/features.hpp"
#include "ctedit/script.hpp"
#include "ctedit/topology.hpp"

namespace ctedit {

struct Selection {
  ChannelId channel = ChannelId::Brightness;
  DiagramKind diagram = DiagramKind::PV;
  std::vector<BrushRect> rects;
  std::vector<int> brushed;
  std::vector<int> pair_ids;               // outermost, sorted
  std::vector<std::vector<int>> subtrees;  // parallel to pair_ids
  BinaryMask mask;
};

/// One image being edited. Channels are real-valued between edits; every
/// committed edit bumps the revision, clears the selection and invalidates
/// all cached channel topologies. Not safe for concurrent mutation; the
/// topology cache itself is internally locked so const readers may share it.
class Session {
 public:
  explicit Session(const ImageRGB& image, Connectivity connectivity = Connectivity::Eight);

  std::uint64_t revision() const noexcept { return revision_; }
  Connectivity connectivity() const noexcept { return connectivity_; }
  const WorkingImage& working() const noexcept { return working_; }
  int width() const noexcept { return working_.width; }
  int height() const noexcept { return working_.height; }

  /// Current image quantized to 8 bits.
  ImageRGB render() const { return quantize(working_); }

  std::shared_ptr<const ChannelTopology> topology(ChannelId channel) const;

  /// Brushes the channel's diagram and keeps the outermost features.
  const Selection& select(ChannelId channel, DiagramKind diagram,
                          std::vector<BrushRect> rects);
  const std::optional<Selection>& selection() const noexcept { return selection_; }

  /// Applies `op` to the current selection.
  void apply_edit(EditOp op, double scale);
  void apply_edit(const EditRequest& request);

  /// Session history in the edit-script format, replayable by run_script.
  const EditScript& log() const noexcept { return log_; }
  /// Notes about edits worth flagging (e.g. edits on the global pair).
  const std::vector<std::string>& notes() const noexcept { return notes_; }

 private:
  WorkingImage working_;
  Connectivity connectivity_;
  std::uint64_t revision_ = 0;
  std::optional<Selection> selection_;
  EditScript log_;
  std::vector<std::string> notes_;

  mutable std::mutex cache_mutex_;
  mutable std::array<std::shared_ptr<const ChannelTopology>, kAllChannels.size()> cache_;
};

}  // namespace ctedit
