#include "ctedit/server.hpp"

#include <mutex>
#include <optional>
#include <shared_mutex>

#include <httplib.h>
#include <json.hpp>

#include "ctedit/errors.hpp"
#include "ctedit/image_io.hpp"
#include "ctedit/serialize.hpp"
#include "ctedit/session.hpp"

namespace ctedit {

using nlohmann::json;

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::RevisionMismatch: return 409;
    case ErrorCode::FileNotFound:
    case ErrorCode::IoError:
    case ErrorCode::MalformedTrees:
    case ErrorCode::SaddleNotFound: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code,
                const std::string& message) {
  send_json(res, json{{"error", code}, {"message", message}}, status);
}

void send_png(httplib::Response& res, const std::vector<std::uint8_t>& bytes,
              std::uint64_t revision) {
  res.set_header("X-Revision", std::to_string(revision));
  res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
}

json parse_body(const httplib::Request& req) {
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "body must be a JSON object");
    return body;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid JSON body: ") + e.what());
  }
}

std::string string_member(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

std::string query_param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing query parameter ") + key);
  }
  return req.get_param_value(key);
}

std::optional<std::uint64_t> requested_revision(const httplib::Request& req,
                                                const json* body) {
  if (body) {
    const auto it = body->find("revision");
    if (it == body->end() || it->is_null()) return std::nullopt;
    if (!it->is_number_unsigned()) {
      throw Error(ErrorCode::InvalidArgument, "\"revision\" must be a non-negative integer");
    }
    return it->get<std::uint64_t>();
  }
  if (!req.has_param("revision")) return std::nullopt;
  try {
    return std::stoull(req.get_param_value("revision"));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "revision must be a non-negative integer");
  }
}

void check_revision(const Session& session, std::optional<std::uint64_t> requested) {
  if (requested && *requested != session.revision()) {
    throw Error(ErrorCode::RevisionMismatch,
                "request is for revision " + std::to_string(*requested) +
                    " but the session is at " + std::to_string(session.revision()));
  }
}

}  // namespace

struct SessionServer::Impl {
  Connectivity default_connectivity;
  httplib::Server http;
  mutable std::shared_mutex mutex;
  std::unique_ptr<Session> session;

  // Runs fn on the session under the given lock; 404 when none is loaded.
  template <typename Lock, typename Fn>
  void with_session(httplib::Response& res, Fn&& fn) {
    Lock lock(mutex);
    if (!session) {
      send_error(res, 404, "NoSession", "no image loaded; POST /session first");
      return;
    }
    fn(*session);
  }

  void install_routes();
};

void SessionServer::Impl::install_routes() {
  using Shared = std::shared_lock<std::shared_mutex>;
  using Exclusive = std::unique_lock<std::shared_mutex>;

  http.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  });

  http.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
    const auto* data = reinterpret_cast<const std::uint8_t*>(req.body.data());
    const ImageRGB image = decode_image(std::span(data, req.body.size()));
    Connectivity connectivity = default_connectivity;
    if (req.has_param("connectivity")) {
      const std::string value = req.get_param_value("connectivity");
      connectivity = parse_connectivity(value == "4" ? 4 : value == "8" ? 8 : 0);
    }
    auto fresh = std::make_unique<Session>(image, connectivity);
    Exclusive lock(mutex);
    session = std::move(fresh);
    send_json(res, json{{"revision", session->revision()},
                        {"width", session->width()},
                        {"height", session->height()},
                        {"connectivity", static_cast<int>(connectivity)}});
  });

  http.Get("/image.png", [this](const httplib::Request& req, httplib::Response& res) {
    with_session<Shared>(res, [&](Session& s) {
      check_revision(s, requested_revision(req, nullptr));
      send_png(res, encode_png(s.render()), s.revision());
    });
  });

  http.Get("/diagram", [this](const httplib::Request& req, httplib::Response& res) {
    const ChannelId channel = parse_channel(query_param(req, "channel"));
    const DiagramKind kind = parse_diagram_kind(query_param(req, "kind"));
    with_session<Shared>(res, [&](Session& s) {
      check_revision(s, requested_revision(req, nullptr));
      const auto topo = s.topology(channel);
      json points = kind == DiagramKind::PD ? to_json(persistence_diagram(topo->pairs))
                                            : to_json(persistence_volume_diagram(topo->pairs));
      json pairs = json::array();
      for (const auto& p : topo->pairs) pairs.push_back(to_json(p));
      send_json(res, json{{"revision", s.revision()},
                          {"channel", to_string(channel)},
                          {"kind", to_string(kind)},
                          {"points", std::move(points)},
                          {"pairs", std::move(pairs)}});
    });
  });

  http.Post("/select", [this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const ChannelId channel = parse_channel(string_member(body, "channel"));
    const DiagramKind kind = parse_diagram_kind(string_member(body, "kind"));
    const auto rects_it = body.find("rects");
    if (rects_it == body.end() || !rects_it->is_array()) {
      throw Error(ErrorCode::InvalidArgument, "\"rects\" must be an array");
    }
    std::vector<BrushRect> rects;
    for (const auto& r : *rects_it) rects.push_back(rect_from_json(r, kind));

    with_session<Exclusive>(res, [&](Session& s) {
      check_revision(s, requested_revision(req, &body));
      const Selection& sel = s.select(channel, kind, std::move(rects));
      const auto topo = s.topology(channel);
      json features = json::array();
      for (int id : sel.pair_ids) features.push_back(to_json(topo->pairs[id]));
      send_json(res, json{{"revision", s.revision()},
                          {"channel", to_string(channel)},
                          {"kind", to_string(kind)},
                          {"brushed", sel.brushed},
                          {"pairs", sel.pair_ids},
                          {"features", std::move(features)},
                          {"mask", "/mask.png"},
                          {"mask_pixels", sel.mask.popcount()}});
    });
  });

  http.Post("/edit", [this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const EditOp op = parse_edit_op(string_member(body, "op"));
    const auto scale_it = body.find("scale");
    if (scale_it == body.end() || !scale_it->is_number()) {
      throw Error(ErrorCode::InvalidArgument, "\"scale\" must be a number");
    }
    const double scale = scale_it->get<double>();
    check_scale(op, scale);

    with_session<Exclusive>(res, [&](Session& s) {
      check_revision(s, requested_revision(req, &body));
      const std::size_t notes_before = s.notes().size();
      s.apply_edit(op, scale);
      const std::vector<std::string> notes(s.notes().begin() + notes_before, s.notes().end());
      send_json(res, json{{"revision", s.revision()}, {"notes", notes}});
    });
  });

  http.Get("/mask.png", [this](const httplib::Request& req, httplib::Response& res) {
    with_session<Shared>(res, [&](Session& s) {
      check_revision(s, requested_revision(req, nullptr));
      if (!s.selection()) {
        send_error(res, 404, to_string(ErrorCode::NoSelection), "no active selection");
        return;
      }
      send_png(res, encode_mask_png(s.selection()->mask), s.revision());
    });
  });

  http.Get("/log", [this](const httplib::Request&, httplib::Response& res) {
    with_session<Shared>(res, [&](Session& s) {
      res.set_header("X-Revision", std::to_string(s.revision()));
      res.set_header("Content-Disposition", "attachment; filename=\"session.ctedit\"");
      res.set_content(serialize_script(s.log()), "application/x-ndjson");
    });
  });
}

SessionServer::SessionServer(Connectivity default_connectivity)
    : impl_(std::make_unique<Impl>()) {
  impl_->default_connectivity = default_connectivity;
  impl_->install_routes();
}

SessionServer::~SessionServer() { stop(); }

int SessionServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool SessionServer::run() { return impl_->http.listen_after_bind(); }

void SessionServer::stop() {
  if (impl_) impl_->http.stop();
}

void SessionServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace ctedit
