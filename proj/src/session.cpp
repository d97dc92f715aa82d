#include "ctedit/session.hpp"

#include <algorithm>
#include <string>

#include "ctedit/errors.hpp"

namespace ctedit {
namespace {

std::size_t slot(ChannelId channel) { return static_cast<std::size_t>(channel); }

}  // namespace

Session::Session(const ImageRGB& image, Connectivity connectivity)
    : working_(to_working(image)), connectivity_(connectivity) {}

std::shared_ptr<const ChannelTopology> Session::topology(ChannelId channel) const {
  std::lock_guard lock(cache_mutex_);
  auto& entry = cache_[slot(channel)];
  if (!entry) {
    entry = std::make_shared<const ChannelTopology>(
        analyze_channel(extract_channel(working_, channel), connectivity_));
  }
  return entry;
}

const Selection& Session::select(ChannelId channel, DiagramKind diagram,
                                 std::vector<BrushRect> rects) {
  for (const auto& r : rects) {
    if (r.diagram != diagram) {
      throw Error(ErrorCode::InvalidArgument, "brush rect targets a different diagram");
    }
  }
  const auto topo = topology(channel);
  auto resolved = resolve_selection(*topo, rects);

  Selection sel;
  sel.channel = channel;
  sel.diagram = diagram;
  sel.rects = std::move(rects);
  sel.brushed = std::move(resolved.brushed);
  sel.pair_ids = std::move(resolved.outermost);
  sel.subtrees = std::move(resolved.subtrees);
  sel.mask = build_mask(topo->graph, sel.subtrees, width(), height());
  selection_ = std::move(sel);

  log_.steps.push_back(SelectStep{channel, diagram, selection_->rects});
  return *selection_;
}

void Session::apply_edit(EditOp op, double scale) {
  if (!selection_ || selection_->pair_ids.empty()) {
    throw Error(ErrorCode::NoSelection, "no features selected");
  }
  apply_edit(EditRequest{op, scale, selection_->pair_ids, selection_->channel});
}

void Session::apply_edit(const EditRequest& request) {
  check_scale(request.op, request.scale);
  if (request.targets.empty()) throw Error(ErrorCode::NoSelection, "no features selected");
  if (selection_ && selection_->channel != request.channel) {
    throw Error(ErrorCode::InvalidArgument,
                "edits apply to the channel the selection was made on");
  }

  const auto topo = topology(request.channel);
  std::vector<int> targets = request.targets;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (int id : targets) {
    if (id < 0 || id >= static_cast<int>(topo->pairs.size())) {
      throw Error(ErrorCode::InvalidPairId, "pair id " + std::to_string(id) +
                                                " does not exist at revision " +
                                                std::to_string(revision_));
    }
  }

  ChannelField field = extract_channel(working_, request.channel);
  // Validate everything before touching the working image.
  for (int id : targets) {
    const auto& pair = topo->pairs[id];
    if (request.op == EditOp::Gamma && pair.birth == pair.death) {
      throw Error(ErrorCode::ZeroPersistenceFeature,
                  "pair " + std::to_string(id) + " has zero persistence");
    }
  }
  bool global_edited = false;
  for (int id : targets) {
    const auto& pair = topo->pairs[id];
    global_edited |= pair.kind == FeatureKind::Global;
    const auto nodes = topo->subtree(id);
    apply_transfer(field, topo->graph, nodes, pair, request.op, request.scale);
  }
  write_channel(working_, field);

  ++revision_;
  if (global_edited) {
    notes_.push_back("revision " + std::to_string(revision_) + ": " +
                     std::string(to_string(request.op)) + " applied to the global pair of " +
                     std::string(to_string(request.channel)));
  }
  {
    std::lock_guard lock(cache_mutex_);
    for (auto& entry : cache_) entry.reset();
  }
  selection_.reset();
  log_.steps.push_back(EditStep{request.op, request.scale});
  // Recompute the edited channel now; the others are rebuilt on demand.
  topology(request.channel);
}

}  // namespace ctedit
