#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctedit/edits.hpp"
#include "ctedit/features.hpp"
#include "ctedit/field.hpp"

namespace ctedit {

// Edit scripts are JSON lines. The first non-blank line is the header
//   {"format":"ctedit-script","version":1}
// and every following line is one step object with a "step" member:
//   {"step":"select","channel":"brightness","diagram":"pv",
//    "rects":[{"x":[0,10],"y":[0,16]}]}
//   {"step":"edit","op":"denoise","scale":0}
//   {"step":"save_image","path":"after.png"}
//   {"step":"dump_diagrams","channel":"brightness","path":"d.json"}
//   {"step":"dump_mask","path":"mask.png"}
// Blank lines and lines starting with '#' are ignored. Output paths are
// relative to the run's output directory.

inline constexpr int kScriptVersion = 1;

struct SelectStep {
  ChannelId channel = ChannelId::Brightness;
  DiagramKind diagram = DiagramKind::PV;
  std::vector<BrushRect> rects;
};

struct EditStep {
  EditOp op = EditOp::Contrast;
  double scale = 1.0;
};

struct SaveImageStep {
  std::string path;
};

struct DumpDiagramsStep {
  ChannelId channel = ChannelId::Brightness;
  std::string path;
};

struct DumpMaskStep {
  std::string path;
};

using ScriptStep =
    std::variant<SelectStep, EditStep, SaveImageStep, DumpDiagramsStep, DumpMaskStep>;

struct EditScript {
  std::vector<ScriptStep> steps;
};

/// Throws ScriptParseError ("line N: ...") on malformed JSON, unknown steps,
/// out-of-bounds scales, or an edit with no select since the previous edit.
EditScript parse_script(std::string_view text);
EditScript load_script(const std::filesystem::path& path);

std::string script_header();
std::string to_line(const ScriptStep& step);
std::string serialize_script(const EditScript& script);

class Session;

struct RunOptions {
  Connectivity connectivity = Connectivity::Eight;
  bool dump_trees = false;
};

enum ExitStatus : int {
  kExitOk = 0,
  kExitIoError = 1,
  kExitParseError = 2,
  kExitStepFailure = 3,
};

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
};

/// Runs every step against `session`, writing outputs under `out_dir`.
/// Throws StepPreconditionFailed ("step N: ...") when a step cannot run.
void execute_script(Session& session, const EditScript& script,
                    const std::filesystem::path& out_dir, const RunOptions& options);

/// Loads the image and script, executes, and writes `output.png` in
/// `out_dir`. Never throws; failures map to the exit statuses above.
RunResult run_script(const std::filesystem::path& image_path,
                     const std::filesystem::path& script_path,
                     const std::filesystem::path& out_dir, const RunOptions& options = {});

/// Writes the persistence and persistence-volume diagrams of one channel.
RunResult dump_diagrams(const std::filesystem::path& image_path, ChannelId channel,
                        const std::filesystem::path& out_path,
                        Connectivity connectivity = Connectivity::Eight);

}  // namespace ctedit
