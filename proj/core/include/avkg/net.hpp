#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "avkg/graphio.hpp"
#include "avkg/reasoner.hpp"

namespace avkg {

/// Frames are a 4-byte big-endian length prefix followed by that many bytes
/// of UTF-8 text.
inline constexpr std::size_t kMaxFramePayload = 1u << 20;  // 1 MiB

class NetError : public std::runtime_error {
 public:
  explicit NetError(const std::string& message);
};

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7070;
};

/// Parses "host:port". Throws std::invalid_argument on malformed input.
Endpoint parse_endpoint(std::string_view text);

/// Blocking framed-message client connection. Movable; closes on destruction.
class Connection {
 public:
  static Connection open(const Endpoint& endpoint);  // throws NetError

  Connection(Connection&& other) noexcept;
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;
  ~Connection();

  void send(std::string_view payload);             // throws NetError
  std::optional<std::string> receive();            // nullopt on orderly close
  std::string roundtrip(std::string_view payload); // send + receive, throws on close
  void close();

 private:
  explicit Connection(int fd) : fd_(fd) {}
  int fd_ = -1;
};

/// One-shot request over a fresh connection.
std::string request(const Endpoint& endpoint, std::string_view message);

/// Framed TCP server answering decision queries and accepting segmented
/// graph uploads.
///
/// Requests (one frame each, except PUT_SEGMENT which carries a second
/// payload frame):
///   PING                                    -> OK PONG
///   DECIDE <obstacle_id> <FEASIBLE|RESTRICTED>
///     -> OK <LANE_CHANGE|SUDDEN_BRAKE|PROCEED> TRACE <comma-joined node ids>
///   PUT_SEGMENT <index> <total>  + segment text frame -> OK STORED <index>
///   COMMIT                                  -> OK GRAPH <nodes> <edges>
/// Errors: ERR BAD_REQUEST <detail>, ERR UNKNOWN_OBSTACLE <id>,
/// ERR INCOMPLETE_SEGMENTS, ERR FRAME_TOO_LARGE. A malformed frame closes
/// the connection.
///
/// Connections may be concurrent but requests are processed under one global
/// lock, so they are totally ordered and COMMIT swaps the active graph
/// atomically with respect to every other request.
class DecisionServer {
 public:
  DecisionServer(Catalog catalog, KnowledgeGraph graph, Endpoint endpoint);
  ~DecisionServer();

  DecisionServer(const DecisionServer&) = delete;
  DecisionServer& operator=(const DecisionServer&) = delete;

  void start();  // bind + listen + accept in a background thread
  void stop();   // idempotent
  void wait();   // block until the accept loop exits

  /// Bound port; useful when constructed with port 0 (ephemeral).
  std::uint16_t port() const { return bound_port_; }

 private:
  void accept_loop();
  void serve_connection(int fd);
  std::string handle_request(const std::string& message, int fd, bool& keep_open);
  std::string handle_put_segment(const std::vector<std::string>& tokens,
                                 const std::string& payload);
  std::string handle_commit();

  Catalog catalog_;
  std::shared_ptr<const KnowledgeGraph> graph_;
  Endpoint endpoint_;
  std::uint16_t bound_port_ = 0;

  std::map<std::size_t, GraphSegment> staged_;
  std::size_t staged_total_ = 0;

  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex request_mutex_;  // orders request processing and guards state
  std::mutex conn_mutex_;     // guards client fd / thread bookkeeping
  std::vector<int> client_fds_;
  std::vector<std::thread> workers_;
};

}  // namespace avkg
