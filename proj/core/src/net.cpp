#include "avkg/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace avkg {

NetError::NetError(const std::string& message) : std::runtime_error(message) {}

Endpoint parse_endpoint(std::string_view text) {
  std::size_t colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    throw std::invalid_argument("expected <host>:<port>, got '" + std::string(text) + "'");
  }
  std::string_view port_tok = text.substr(colon + 1);
  unsigned port = 0;
  auto [ptr, ec] = std::from_chars(port_tok.data(), port_tok.data() + port_tok.size(), port);
  if (ec != std::errc{} || ptr != port_tok.data() + port_tok.size() || port > 65535) {
    throw std::invalid_argument("bad port '" + std::string(port_tok) + "'");
  }
  return {std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

namespace {

// Restart-on-EINTR full read; returns false on EOF or error.
bool read_full(int fd, void* buf, std::size_t n) {
  auto* p = static_cast<char*>(buf);
  while (n > 0) {
    ssize_t rv = ::read(fd, p, n);
    if (rv < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    if (rv == 0) return false;
    p += rv;
    n -= static_cast<std::size_t>(rv);
  }
  return true;
}

bool write_all(int fd, const void* buf, std::size_t n) {
  const auto* p = static_cast<const char*>(buf);
  while (n > 0) {
    ssize_t rv = ::send(fd, p, n, MSG_NOSIGNAL);
    if (rv < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    p += rv;
    n -= static_cast<std::size_t>(rv);
  }
  return true;
}

enum class FrameStatus { Ok, Closed, TooLarge, Truncated };

// Reads one length-prefixed frame. Closed means clean EOF at a frame
// boundary; Truncated means the stream died mid-frame.
FrameStatus read_frame(int fd, std::string& payload) {
  std::uint32_t net_len = 0;
  {
    auto* p = reinterpret_cast<char*>(&net_len);
    std::size_t n = sizeof(net_len);
    bool first = true;
    while (n > 0) {
      ssize_t rv = ::read(fd, p, n);
      if (rv < 0) {
        if (errno == EINTR) continue;
        return first ? FrameStatus::Closed : FrameStatus::Truncated;
      }
      if (rv == 0) return first ? FrameStatus::Closed : FrameStatus::Truncated;
      first = false;
      p += rv;
      n -= static_cast<std::size_t>(rv);
    }
  }
  const std::uint32_t len = ntohl(net_len);
  if (len > kMaxFramePayload) return FrameStatus::TooLarge;
  payload.resize(len);
  if (len > 0 && !read_full(fd, payload.data(), len)) return FrameStatus::Truncated;
  return FrameStatus::Ok;
}

bool write_frame(int fd, std::string_view payload) {
  std::uint32_t net_len = htonl(static_cast<std::uint32_t>(payload.size()));
  if (!write_all(fd, &net_len, sizeof(net_len))) return false;
  return payload.empty() || write_all(fd, payload.data(), payload.size());
}

int connect_to(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  std::string host = endpoint.host == "localhost" ? "127.0.0.1" : endpoint.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw NetError("cannot resolve host '" + endpoint.host + "'");
  }
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw NetError("socket: " + std::string(std::strerror(errno)));
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    int err = errno;
    ::close(fd);
    throw NetError("connect to " + endpoint.host + ":" + std::to_string(endpoint.port) + ": " +
                   std::strerror(err));
  }
  return fd;
}

std::vector<std::string> tokenize(const std::string& message, bool& well_formed) {
  std::vector<std::string> tokens;
  well_formed = true;
  std::size_t pos = 0;
  while (pos <= message.size()) {
    std::size_t sp = message.find(' ', pos);
    std::string token = (sp == std::string::npos) ? message.substr(pos)
                                                  : message.substr(pos, sp - pos);
    if (token.empty()) well_formed = false;
    tokens.push_back(std::move(token));
    if (sp == std::string::npos) break;
    pos = sp + 1;
  }
  if (message.empty()) {
    tokens.clear();
    well_formed = false;
  }
  return tokens;
}

}  // namespace

Connection Connection::open(const Endpoint& endpoint) {
  return Connection(connect_to(endpoint));
}

Connection::Connection(Connection&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

Connection::~Connection() { close(); }

void Connection::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Connection::send(std::string_view payload) {
  if (fd_ < 0) throw NetError("connection is closed");
  if (payload.size() > kMaxFramePayload) throw NetError("payload exceeds frame limit");
  if (!write_frame(fd_, payload)) throw NetError("send failed: " + std::string(std::strerror(errno)));
}

std::optional<std::string> Connection::receive() {
  if (fd_ < 0) throw NetError("connection is closed");
  std::string payload;
  switch (read_frame(fd_, payload)) {
    case FrameStatus::Ok: return payload;
    case FrameStatus::Closed:
    case FrameStatus::Truncated: return std::nullopt;
    case FrameStatus::TooLarge: throw NetError("peer sent an oversized frame");
  }
  return std::nullopt;
}

std::string Connection::roundtrip(std::string_view payload) {
  send(payload);
  auto response = receive();
  if (!response) throw NetError("connection closed before a response arrived");
  return *response;
}

std::string request(const Endpoint& endpoint, std::string_view message) {
  Connection conn = Connection::open(endpoint);
  return conn.roundtrip(message);
}

DecisionServer::DecisionServer(Catalog catalog, KnowledgeGraph graph, Endpoint endpoint)
    : catalog_(std::move(catalog)), endpoint_(std::move(endpoint)) {
  ValidationReport report = validate_graph(graph);
  if (!report.ok()) {
    throw std::invalid_argument("server graph fails validation: " + report.to_string());
  }
  graph_ = std::make_shared<const KnowledgeGraph>(std::move(graph));
}

DecisionServer::~DecisionServer() { stop(); }

void DecisionServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw NetError("socket: " + std::string(std::strerror(errno)));
  int opt = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &opt, sizeof(opt));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint_.port);
  std::string host = endpoint_.host == "localhost" ? "127.0.0.1" : endpoint_.host;
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw NetError("cannot resolve host '" + endpoint_.host + "'");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    int err = errno;
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw NetError("bind " + endpoint_.host + ":" + std::to_string(endpoint_.port) + ": " +
                   std::strerror(err));
  }

  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  bound_port_ = ntohs(bound.sin_port);

  stopping_ = false;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void DecisionServer::stop() {
  if (listen_fd_ < 0 && !accept_thread_.joinable()) return;
  stopping_ = true;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  {
    std::lock_guard lock(conn_mutex_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(conn_mutex_);
    workers.swap(workers_);
  }
  for (auto& w : workers) {
    if (w.joinable()) w.join();
  }
}

void DecisionServer::wait() {
  if (accept_thread_.joinable()) accept_thread_.join();
}

void DecisionServer::accept_loop() {
  while (!stopping_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;  // listen socket closed or broken
    }
    std::lock_guard lock(conn_mutex_);
    client_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void DecisionServer::serve_connection(int fd) {
  std::string payload;
  bool keep_open = true;
  while (keep_open && !stopping_) {
    switch (read_frame(fd, payload)) {
      case FrameStatus::Ok:
        break;
      case FrameStatus::TooLarge:
        write_frame(fd, "ERR FRAME_TOO_LARGE");
        keep_open = false;
        continue;
      case FrameStatus::Closed:
      case FrameStatus::Truncated:
        keep_open = false;
        continue;
    }
    std::string response = handle_request(payload, fd, keep_open);
    if (!response.empty() && !write_frame(fd, response)) keep_open = false;
  }
  {
    // Unregister before closing so stop() never touches a recycled fd.
    std::lock_guard lock(conn_mutex_);
    std::erase(client_fds_, fd);
  }
  ::close(fd);
}

std::string DecisionServer::handle_request(const std::string& message, int fd, bool& keep_open) {
  bool well_formed = false;
  std::vector<std::string> tokens = tokenize(message, well_formed);
  if (tokens.empty() || !well_formed) return "ERR BAD_REQUEST malformed request text";

  const std::string& verb = tokens[0];

  if (verb == "PING") {
    if (tokens.size() != 1) return "ERR BAD_REQUEST PING takes no arguments";
    return "OK PONG";
  }

  if (verb == "DECIDE") {
    if (tokens.size() != 3) return "ERR BAD_REQUEST expected DECIDE <obstacle_id> <FEASIBLE|RESTRICTED>";
    bool feasible;
    if (tokens[2] == "FEASIBLE") {
      feasible = true;
    } else if (tokens[2] == "RESTRICTED") {
      feasible = false;
    } else {
      return "ERR BAD_REQUEST bad flag '" + tokens[2] + "', expected FEASIBLE or RESTRICTED";
    }
    std::lock_guard lock(request_mutex_);
    const ObstacleClass* ob = catalog_.find(tokens[1]);
    if (!ob) return "ERR UNKNOWN_OBSTACLE " + tokens[1];
    Verdict verdict = decide(*ob, feasible);
    return "OK " + std::string(decision_token(verdict.decision)) + " TRACE " +
           verdict.trace.joined_ids();
  }

  if (verb == "PUT_SEGMENT") {
    if (tokens.size() != 3) return "ERR BAD_REQUEST expected PUT_SEGMENT <index> <total>";
    // The segment body arrives in a second frame, subject to the same
    // framing rules as the request itself.
    std::string body;
    switch (read_frame(fd, body)) {
      case FrameStatus::Ok:
        break;
      case FrameStatus::TooLarge:
        write_frame(fd, "ERR FRAME_TOO_LARGE");
        keep_open = false;
        return "";
      case FrameStatus::Closed:
      case FrameStatus::Truncated:
        keep_open = false;
        return "";
    }
    std::lock_guard lock(request_mutex_);
    return handle_put_segment(tokens, body);
  }

  if (verb == "COMMIT") {
    if (tokens.size() != 1) return "ERR BAD_REQUEST COMMIT takes no arguments";
    std::lock_guard lock(request_mutex_);
    return handle_commit();
  }

  return "ERR BAD_REQUEST unknown command '" + verb + "'";
}

std::string DecisionServer::handle_put_segment(const std::vector<std::string>& tokens,
                                               const std::string& payload) {
  std::size_t index = 0;
  std::size_t total = 0;
  auto parse_size = [](const std::string& tok, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
  };
  if (!parse_size(tokens[1], index) || !parse_size(tokens[2], total)) {
    return "ERR BAD_REQUEST index and total must be non-negative integers";
  }
  if (total == 0 || index >= total) {
    return "ERR BAD_REQUEST segment index " + tokens[1] + " out of range for total " + tokens[2];
  }
  if (!staged_.empty() && staged_total_ != total) {
    return "ERR BAD_REQUEST segment total " + tokens[2] + " conflicts with staged total " +
           std::to_string(staged_total_);
  }

  GraphSegment seg;
  try {
    seg = deserialize_segment(payload);
  } catch (const ParseError& e) {
    return std::string("ERR BAD_REQUEST segment parse error: ") + e.what();
  }
  if (seg.index != index || seg.total != total) {
    return "ERR BAD_REQUEST segment header disagrees with request line";
  }

  staged_total_ = total;
  staged_[index] = std::move(seg);
  return "OK STORED " + std::to_string(index);
}

std::string DecisionServer::handle_commit() {
  if (staged_.empty() || staged_.size() < staged_total_) {
    return "ERR INCOMPLETE_SEGMENTS";
  }
  std::vector<GraphSegment> segments;
  segments.reserve(staged_.size());
  for (auto& [index, seg] : staged_) segments.push_back(std::move(seg));

  KnowledgeGraph rebuilt;
  try {
    rebuilt = reconstruct(segments);
  } catch (const ReconstructError& e) {
    staged_.clear();
    staged_total_ = 0;
    return std::string("ERR BAD_REQUEST ") + e.what();
  }
  ValidationReport report = validate_graph(rebuilt);
  if (!report.ok()) {
    staged_.clear();
    staged_total_ = 0;
    return "ERR BAD_REQUEST reconstructed graph fails validation: " + report.to_string();
  }

  graph_ = std::make_shared<const KnowledgeGraph>(std::move(rebuilt));
  staged_.clear();
  staged_total_ = 0;
  return "OK GRAPH " + std::to_string(graph_->node_count()) + ' ' +
         std::to_string(graph_->edge_count());
}

}  // namespace avkg
