#pragma once

#include <memory>
#include <string>

#include "ctedit/field.hpp"

namespace ctedit {

inline constexpr int kDefaultPort = 7230;

// HTTP/1.1 front end for one editing session.
//
//   POST /session          raw PNG/PPM body, optional ?connectivity=4|8
//   GET  /image.png        current render
//   GET  /diagram          ?channel=&kind=pd|pv
//   POST /select           {"channel","kind","rects":[{"x":[a,b],"y":[c,d]}]}
//   POST /edit             {"op","scale"}
//   GET  /mask.png         mask of the current selection
//   GET  /log              edit script recorded so far
//
// JSON responses carry "revision". Requests may carry "revision" (body
// member, or query parameter on GETs); a stale one gets 409. Constraint
// violations get 400 with {"error","message"}. Mutations are serialized by
// a single-writer lock; readers always see one committed revision.
class SessionServer {
 public:
  explicit SessionServer(Connectivity default_connectivity = Connectivity::Eight);
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds without serving. Port 0 picks a free port. Returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ctedit
