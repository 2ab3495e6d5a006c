#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>

#include "prism/nodes.hpp"
#include "prism/protocol.hpp"
#include "prism/query.hpp"
#include "prism/sim.hpp"

namespace prism {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

Endpoint parse_endpoint(const std::string& text);  // "host:port"

/// Blocking request/response client over one TCP connection.
class TcpClient {
 public:
  TcpClient() = default;
  ~TcpClient();
  TcpClient(TcpClient&&) noexcept;
  TcpClient& operator=(TcpClient&&) noexcept;
  TcpClient(const TcpClient&) = delete;
  TcpClient& operator=(const TcpClient&) = delete;

  static TcpClient connect_to(const Endpoint& ep, double timeout_sec);
  Frame request(const Frame& f);

 private:
  int fd_ = -1;
};

struct ServeOptions {
  std::uint16_t port = 0;  // 0 picks a free port
  std::optional<Endpoint> announcer;  // server roles push max rounds here
  std::function<void(std::uint16_t)> on_listen;
  std::atomic<bool>* stop = nullptr;
};

// Accept loop around a node handler; one thread per connection, handler
// calls serialized. Returns when *stop is set (checked between accepts).
void serve_server(ServerNode& node, const ServeOptions& opts);
void serve_announcer(AnnouncerNode& node, const ServeOptions& opts);

struct NetEndpoints {
  std::array<Endpoint, 3> servers;
};

// One owner's side of a networked query: uploads its own shares, then walks
// the same round schedule as the in-process driver, polling until the
// servers have heard from every owner. Produces the identical QueryResult.
QueryResult run_owner_agent(const QuerySpec& spec, const RoleView& owner_view,
                            const OwnerInputs& own, const NetEndpoints& eps,
                            double timeout_sec = 30.0);

}  // namespace prism
