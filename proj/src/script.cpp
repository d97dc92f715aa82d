#include "ctedit/script.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ctedit/errors.hpp"
#include "ctedit/image_io.hpp"
#include "ctedit/serialize.hpp"
#include "ctedit/session.hpp"

namespace ctedit {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "ctedit-script";

[[noreturn]] void parse_fail(int line, const std::string& message) {
  throw Error(ErrorCode::ScriptParseError, "line " + std::to_string(line) + ": " + message);
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing \"") + key + "\"");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) {
    throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be a number");
  }
  return v.get<double>();
}

ScriptStep parse_step(const json& obj) {
  const std::string kind = require_string(obj, "step");
  if (kind == "select") {
    SelectStep step;
    step.channel = parse_channel(require_string(obj, "channel"));
    step.diagram = parse_diagram_kind(require_string(obj, "diagram"));
    const auto& rects = require(obj, "rects");
    if (!rects.is_array()) throw Error(ErrorCode::InvalidArgument, "\"rects\" must be an array");
    for (const auto& r : rects) step.rects.push_back(rect_from_json(r, step.diagram));
    return step;
  }
  if (kind == "edit") {
    EditStep step;
    step.op = parse_edit_op(require_string(obj, "op"));
    step.scale = require_number(obj, "scale");
    check_scale(step.op, step.scale);
    return step;
  }
  if (kind == "save_image") return SaveImageStep{require_string(obj, "path")};
  if (kind == "dump_diagrams") {
    return DumpDiagramsStep{parse_channel(require_string(obj, "channel")),
                            require_string(obj, "path")};
  }
  if (kind == "dump_mask") return DumpMaskStep{require_string(obj, "path")};
  throw Error(ErrorCode::InvalidArgument, "unknown step '" + kind + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::filesystem::path output_path(const std::filesystem::path& out_dir,
                                   const std::string& relative) {
  auto path = out_dir / relative;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  return path;
}

bool is_io_error(ErrorCode code) {
  return code == ErrorCode::FileNotFound || code == ErrorCode::UnsupportedFormat ||
         code == ErrorCode::CorruptImage || code == ErrorCode::IoError;
}

}  // namespace

EditScript parse_script(std::string_view text) {
  EditScript script;
  bool header_seen = false;
  bool selected = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const auto raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_fail(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) parse_fail(line_no, "expected a JSON object");

    if (!header_seen) {
      const auto format = obj.find("format");
      const auto version = obj.find("version");
      if (format == obj.end() || *format != kFormatName) {
        parse_fail(line_no, "first line must be the ctedit-script header");
      }
      if (version == obj.end() || !version->is_number_integer() ||
          version->get<int>() != kScriptVersion) {
        parse_fail(line_no, "unsupported script version");
      }
      header_seen = true;
      continue;
    }

    ScriptStep step;
    try {
      step = parse_step(obj);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    if (std::holds_alternative<SelectStep>(step)) {
      selected = true;
    } else if (std::holds_alternative<EditStep>(step)) {
      if (!selected) parse_fail(line_no, "edit without a select since the previous edit");
      selected = false;
    }
    script.steps.push_back(std::move(step));
  }
  if (!header_seen && !script.steps.empty()) parse_fail(1, "missing header");
  return script;
}

EditScript load_script(const std::filesystem::path& path) { return parse_script(read_text(path)); }

std::string script_header() {
  return json{{"format", kFormatName}, {"version", kScriptVersion}}.dump();
}

std::string to_line(const ScriptStep& step) {
  json obj = std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SelectStep>) {
          json rects = json::array();
          for (const auto& r : s.rects) rects.push_back(to_json(r));
          return {{"step", "select"},
                  {"channel", to_string(s.channel)},
                  {"diagram", to_string(s.diagram)},
                  {"rects", std::move(rects)}};
        } else if constexpr (std::is_same_v<T, EditStep>) {
          return {{"step", "edit"}, {"op", to_string(s.op)}, {"scale", s.scale}};
        } else if constexpr (std::is_same_v<T, SaveImageStep>) {
          return {{"step", "save_image"}, {"path", s.path}};
        } else if constexpr (std::is_same_v<T, DumpDiagramsStep>) {
          return {{"step", "dump_diagrams"}, {"channel", to_string(s.channel)}, {"path", s.path}};
        } else {
          return {{"step", "dump_mask"}, {"path", s.path}};
        }
      },
      step);
  return obj.dump();
}

std::string serialize_script(const EditScript& script) {
  std::string out = script_header() + "\n";
  for (const auto& step : script.steps) out += to_line(step) + "\n";
  return out;
}

void execute_script(Session& session, const EditScript& script,
                    const std::filesystem::path& out_dir, const RunOptions& options) {
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    try {
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SelectStep>) {
              session.select(s.channel, s.diagram, s.rects);
              if (options.dump_trees) {
                const auto topo = session.topology(s.channel);
                write_text(output_path(out_dir, "trees_step" + std::to_string(index) + ".json"),
                           trees_json(*topo).dump() + "\n");
              }
            } else if constexpr (std::is_same_v<T, EditStep>) {
              session.apply_edit(s.op, s.scale);
            } else if constexpr (std::is_same_v<T, SaveImageStep>) {
              save_image(session.render(), output_path(out_dir, s.path));
            } else if constexpr (std::is_same_v<T, DumpDiagramsStep>) {
              const auto topo = session.topology(s.channel);
              write_text(output_path(out_dir, s.path),
                         diagrams_json(*topo, s.channel).dump() + "\n");
            } else {
              if (!session.selection()) {
                throw Error(ErrorCode::NoSelection, "dump_mask needs an active selection");
              }
              save_mask(session.selection()->mask, output_path(out_dir, s.path));
            }
          },
          script.steps[i]);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      throw Error(ErrorCode::StepPreconditionFailed,
                  "step " + std::to_string(index) + ": " + e.what());
    }
  }
}

RunResult run_script(const std::filesystem::path& image_path,
                     const std::filesystem::path& script_path,
                     const std::filesystem::path& out_dir, const RunOptions& options) {
  try {
    const ImageRGB image = load_image(image_path);
    const EditScript script = load_script(script_path);
    std::filesystem::create_directories(out_dir);
    Session session(image, options.connectivity);
    execute_script(session, script, out_dir, options);
    save_image(session.render(), out_dir / "output.png");
    return {kExitOk, {}};
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ScriptParseError) return {kExitParseError, e.what()};
    if (is_io_error(e.code())) return {kExitIoError, e.what()};
    return {kExitStepFailure, e.what()};
  } catch (const std::filesystem::filesystem_error& e) {
    return {kExitIoError, e.what()};
  } catch (const std::exception& e) {
    return {kExitStepFailure, e.what()};
  }
}

RunResult dump_diagrams(const std::filesystem::path& image_path, ChannelId channel,
                        const std::filesystem::path& out_path, Connectivity connectivity) {
  try {
    const ImageRGB image = load_image(image_path);
    const auto topo = analyze_channel(extract_channel(image, channel), connectivity);
    if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
    write_text(out_path, diagrams_json(topo, channel).dump() + "\n");
    return {kExitOk, {}};
  } catch (const Error& e) {
    return {is_io_error(e.code()) ? kExitIoError : kExitStepFailure, e.what()};
  } catch (const std::exception& e) {
    return {kExitIoError, e.what()};
  }
}

}  // namespace ctedit
