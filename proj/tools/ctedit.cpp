#include <algorithm>
#include <csignal>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctedit/errors.hpp"
#include "ctedit/image_io.hpp"
#include "ctedit/oracle.hpp"
#include "ctedit/script.hpp"
#include "ctedit/server.hpp"

namespace {

ctedit::SessionServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

// Strided sample of at most `limit` x `limit` pixels.
ctedit::ChannelField downsample(const ctedit::ChannelField& field, int limit) {
  const int sx = (field.width + limit - 1) / limit;
  const int sy = (field.height + limit - 1) / limit;
  const int w = (field.width + sx - 1) / sx;
  const int h = (field.height + sy - 1) / sy;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < field.height; y += sy) {
    for (int x = 0; x < field.width; x += sx) {
      values.push_back(field.values[static_cast<std::size_t>(y) * field.width + x]);
    }
  }
  return ctedit::ChannelField(w, h, field.channel, std::move(values));
}

int seed_check(const std::string& input, ctedit::Connectivity connectivity) {
  try {
    const auto image = ctedit::load_image(input);
    for (auto channel : ctedit::kAllChannels) {
      const auto small = downsample(ctedit::extract_channel(image, channel), 16);
      const auto report = ctedit::oracle::check_field(small, connectivity);
      if (!report.ok) {
        std::cerr << "seed check failed on " << ctedit::to_string(channel) << ": "
                  << report.message << "\n";
        return ctedit::kExitStepFailure;
      }
    }
    std::cerr << "seed check passed\n";
    return ctedit::kExitOk;
  } catch (const ctedit::Error& e) {
    std::cerr << e.what() << "\n";
    return ctedit::kExitIoError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contour-tree feature editing for images"};
  app.require_subcommand(1);

  std::string input;
  std::string script;
  std::string out_dir = "out";
  int connectivity = 8;
  bool dump_trees = false;
  bool check = false;
  auto* run = app.add_subcommand("run", "run an edit script against an image");
  run->add_option("--input", input, "PNG or PPM image")->required();
  run->add_option("--script", script, "edit script (JSON lines)")->required();
  run->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  run->add_option("--connectivity", connectivity, "pixel connectivity")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  run->add_flag("--dump-trees", dump_trees, "write trees JSON after every select step");
  run->add_flag("--seed-check", check,
                "compare trees against the brute-force oracle on a 16x16 sample first");

  std::string channel_name = "brightness";
  std::string out_path = "diagrams.json";
  auto* diagrams = app.add_subcommand("diagrams", "write PD and PV diagrams of one channel");
  diagrams->add_option("--input", input, "PNG or PPM image")->required();
  diagrams->add_option("--channel", channel_name)->capture_default_str();
  diagrams->add_option("--out", out_path)->capture_default_str();
  diagrams->add_option("--connectivity", connectivity)
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();

  int port = ctedit::kDefaultPort;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "serve one editing session over HTTP");
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--connectivity", connectivity)
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ctedit::kExitParseError;
  }
  const auto conn = ctedit::parse_connectivity(connectivity);

  if (*run) {
    if (check) {
      const int status = seed_check(input, conn);
      if (status != ctedit::kExitOk) return status;
    }
    const auto result = ctedit::run_script(input, script, out_dir, {conn, dump_trees});
    if (result.exit_code != ctedit::kExitOk) std::cerr << result.message << "\n";
    return result.exit_code;
  }

  if (*diagrams) {
    ctedit::ChannelId channel;
    try {
      channel = ctedit::parse_channel(channel_name);
    } catch (const ctedit::Error& e) {
      std::cerr << e.what() << "\n";
      return ctedit::kExitParseError;
    }
    const auto result = ctedit::dump_diagrams(input, channel, out_path, conn);
    if (result.exit_code != ctedit::kExitOk) std::cerr << result.message << "\n";
    return result.exit_code;
  }

  ctedit::SessionServer server(conn);
  if (server.bind(host, port) < 0) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return ctedit::kExitIoError;
  }
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "serving on http://" << host << ":" << port << "\n";
  server.run();
  g_server = nullptr;
  return 0;
}
