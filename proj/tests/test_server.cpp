#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ctedit/image_io.hpp"
#include "ctedit/script.hpp"
#include "ctedit/server.hpp"

using namespace ctedit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string png_body(unsigned seed, int w, int h) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  ImageRGB img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)),
              static_cast<std::uint8_t>(d(rng))};
  }
  const auto png = encode_png(img);
  return {png.begin(), png.end()};
}

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    port_ = server_.bind("127.0.0.1", 0);
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.run(); });
    server_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  json post_json(const std::string& path, const json& body, int want_status = 200) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, want_status) << res->body;
    return json::parse(res->body);
  }

  json get_json(const std::string& path, int want_status = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, want_status) << res->body;
    return json::parse(res->body);
  }

  json open_session(const std::string& body) {
    auto res = client_->Post("/session", body, "image/png");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 200) << res->body;
    return json::parse(res->body);
  }

  json select_all(std::uint64_t revision, const std::string& channel = "brightness") {
    return post_json("/select", {{"channel", channel},
                                 {"kind", "pv"},
                                 {"rects", json::array({{{"x", {-1, 300}}, {"y", {0, 1e9}}}})},
                                 {"revision", revision}});
  }

  SessionServer server_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace

TEST_F(ServerTest, NoSessionYet) {
  const auto err = get_json("/diagram?channel=red&kind=pd", 404);
  EXPECT_EQ(err["error"], "NoSession");
  EXPECT_EQ(client_->Get("/image.png")->status, 404);
}

TEST_F(ServerTest, SessionAndDiagram) {
  const auto info = open_session(png_body(1, 9, 7));
  EXPECT_EQ(info["revision"], 0);
  EXPECT_EQ(info["width"], 9);
  EXPECT_EQ(info["connectivity"], 8);
  const auto pd = get_json("/diagram?channel=red&kind=pd");
  const auto pv = get_json("/diagram?channel=red&kind=pv");
  EXPECT_EQ(pd["points"].size(), pd["pairs"].size() + 1);  // global pair drawn twice
  EXPECT_EQ(pv["points"].size(), pv["pairs"].size());
  EXPECT_EQ(pv["points"][0]["y"], 63);
  get_json("/diagram?channel=hue&kind=pd", 400);

  auto img = client_->Get("/image.png");
  ASSERT_TRUE(img);
  EXPECT_EQ(img->get_header_value("X-Revision"), "0");
  EXPECT_EQ(img->body, png_body(1, 9, 7));

  const auto four = client_->Post("/session?connectivity=4", png_body(1, 9, 7), "image/png");
  EXPECT_EQ(json::parse(four->body)["connectivity"], 4);
  EXPECT_EQ(client_->Post("/session", "garbage", "image/png")->status, 400);
}

TEST_F(ServerTest, SelectEditAndRevisions) {
  open_session(png_body(2, 10, 10));
  EXPECT_EQ(get_json("/mask.png", 404)["error"], "NoSelection");
  const auto sel = select_all(0);
  EXPECT_EQ(sel["mask_pixels"], 100);
  EXPECT_FALSE(sel["pairs"].empty());
  auto mask = client_->Get("/mask.png");
  ASSERT_TRUE(mask);
  EXPECT_EQ(mask->status, 200);
  EXPECT_EQ(mask->get_header_value("Content-Type"), "image/png");

  const auto bad = post_json("/edit", {{"op", "contrast"}, {"scale", 0.5}}, 400);
  EXPECT_EQ(bad["error"], "ScaleOutOfRange");
  EXPECT_NE(bad["message"].get<std::string>().find("s≥1"), std::string::npos);

  const auto done = post_json("/edit", {{"op", "contrast"}, {"scale", 1.75}, {"revision", 0}});
  EXPECT_EQ(done["revision"], 1);
  EXPECT_EQ(done["notes"].size(), 1u);  // the select-all included the global pair

  // Stale revisions are refused for both reads and writes.
  EXPECT_EQ(post_json("/edit", {{"op", "brightness"}, {"scale", 3}, {"revision", 0}}, 409)["error"],
            "RevisionMismatch");
  EXPECT_EQ(client_->Get("/image.png?revision=0")->status, 409);
  EXPECT_EQ(client_->Get("/image.png?revision=1")->status, 200);

  // The edit cleared the selection.
  EXPECT_EQ(post_json("/edit", {{"op", "brightness"}, {"scale", 3}}, 400)["error"], "NoSelection");
  EXPECT_EQ(client_->Get("/mask.png")->status, 404);

  post_json("/select",
            {{"channel", "red"},
             {"kind", "pd"},
             {"rects", json::array({{{"x", {1, 1}}, {"y", {0, 1}}}})}},
            400);
  post_json("/select", {{"channel", "red"}, {"kind", "pd"}}, 400);
  EXPECT_EQ(client_->Post("/select", "{not json", "application/json")->status, 400);
}

TEST_F(ServerTest, LogReplaysThroughTheCli) {
  const auto body = png_body(3, 16, 12);
  open_session(body);
  select_all(0, "green");
  post_json("/edit", {{"op", "denoise"}, {"scale", 0.3}});
  post_json("/select", {{"channel", "saturation"},
                        {"kind", "pd"},
                        {"rects", json::array({{{"x", {-1, 256}}, {"y", {-1, 256}}}})}});
  post_json("/edit", {{"op", "gamma"}, {"scale", 2.5}});
  const auto log = client_->Get("/log");
  ASSERT_TRUE(log);
  EXPECT_EQ(log->get_header_value("X-Revision"), "2");
  const auto preview = client_->Get("/image.png");

  const auto dir = fs::temp_directory_path() / "ctedit_server_replay";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "in.png", std::ios::binary) << body;
  std::ofstream(dir / "log.ndjson", std::ios::binary) << log->body;
  const auto r = run_script(dir / "in.png", dir / "log.ndjson", dir / "out");
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  std::ifstream out(dir / "out" / "output.png", std::ios::binary);
  const std::string replayed((std::istreambuf_iterator<char>(out)), {});
  EXPECT_EQ(replayed, preview->body);
  fs::remove_all(dir);
}

TEST_F(ServerTest, ConcurrentReadersDuringEdits) {
  open_session(png_body(4, 24, 24));
  std::atomic<int> failures{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&, t] {
      httplib::Client c("127.0.0.1", port_);
      for (int i = 0; i < 10; ++i) {
        auto res = (t + i) % 2 ? c.Get("/diagram?channel=brightness&kind=pv") : c.Get("/image.png");
        if (!res || res->status != 200) ++failures;
      }
    });
  }
  for (int round = 0; round < 3; ++round) {
    select_all(round);
    const auto done = post_json("/edit", {{"op", "brightness"}, {"scale", 1}});
    EXPECT_EQ(done["revision"], round + 1);
  }
  for (auto& r : readers) r.join();
  EXPECT_EQ(failures.load(), 0);
}
