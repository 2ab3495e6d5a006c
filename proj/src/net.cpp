#include "prism/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>

namespace prism {

namespace {

struct net_error : protocol_error {
  using protocol_error::protocol_error;
};

void write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w <= 0) throw net_error("connection closed while writing");
    data += w;
    n -= static_cast<std::size_t>(w);
  }
}

bool read_all(int fd, std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    ssize_t r = ::recv(fd, data, n, 0);
    if (r == 0) return false;
    if (r < 0) throw net_error("connection error while reading");
    data += r;
    n -= static_cast<std::size_t>(r);
  }
  return true;
}

void write_frame(int fd, const Frame& f) {
  auto bytes = encode_frame(f);
  write_all(fd, bytes.data(), bytes.size());
}

std::optional<Frame> read_frame(int fd) {
  std::uint8_t len_buf[4];
  if (!read_all(fd, len_buf, 4)) return std::nullopt;
  std::uint32_t len = (static_cast<std::uint32_t>(len_buf[0]) << 24) |
                      (static_cast<std::uint32_t>(len_buf[1]) << 16) |
                      (static_cast<std::uint32_t>(len_buf[2]) << 8) | len_buf[3];
  if (len < 9 || len > (1u << 30)) throw net_error("bad frame length");
  std::vector<std::uint8_t> body(len);
  if (!read_all(fd, body.data(), len)) throw net_error("truncated frame");
  return decode_frame(body);
}

int listen_on(std::uint16_t port, std::uint16_t& bound) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw net_error("socket() failed");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(fd);
    throw net_error("bind() failed on port " + std::to_string(port));
  }
  if (::listen(fd, 16) < 0) {
    ::close(fd);
    throw net_error("listen() failed");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  bound = ntohs(addr.sin_port);
  return fd;
}

int connect_fd(const Endpoint& ep, double timeout_sec) {
  auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_sec);
  for (;;) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* info = nullptr;
    std::string port = std::to_string(ep.port);
    if (::getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &info) == 0 && info) {
      int fd = ::socket(info->ai_family, info->ai_socktype, info->ai_protocol);
      if (fd >= 0 && ::connect(fd, info->ai_addr, info->ai_addrlen) == 0) {
        ::freeaddrinfo(info);
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        return fd;
      }
      if (fd >= 0) ::close(fd);
      ::freeaddrinfo(info);
    }
    if (std::chrono::steady_clock::now() > deadline)
      throw net_error("cannot connect to " + ep.host + ":" + port);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

template <typename Node>
void serve_loop(Node& node, const ServeOptions& opts,
                const std::function<void(Node&)>& wire_announcer) {
  std::uint16_t bound = 0;
  int listener = listen_on(opts.port, bound);
  if (wire_announcer) wire_announcer(node);
  if (opts.on_listen) opts.on_listen(bound);

  auto handler_mutex = std::make_shared<std::mutex>();
  std::vector<std::thread> workers;
  for (;;) {
    if (opts.stop && opts.stop->load()) break;
    timeval tv{0, 200000};
    fd_set fds;
    FD_ZERO(&fds);
    FD_SET(listener, &fds);
    if (::select(listener + 1, &fds, nullptr, nullptr, &tv) <= 0) continue;
    int conn = ::accept(listener, nullptr, nullptr);
    if (conn < 0) continue;
    workers.emplace_back([conn, &node, handler_mutex] {
      try {
        for (;;) {
          auto frame = read_frame(conn);
          if (!frame) break;
          Frame reply;
          {
            std::lock_guard<std::mutex> lock(*handler_mutex);
            reply = node.handle(*frame);
          }
          write_frame(conn, reply);
        }
      } catch (const std::exception&) {
        // connection-level failure: drop the session
      }
      ::close(conn);
    });
  }
  ::close(listener);
  for (auto& w : workers)
    if (w.joinable()) w.join();
}

}  // namespace

Endpoint parse_endpoint(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) throw parameter_error("endpoint must be host:port");
  Endpoint ep;
  ep.host = text.substr(0, colon);
  ep.port = static_cast<std::uint16_t>(std::stoi(text.substr(colon + 1)));
  if (ep.host.empty()) ep.host = "127.0.0.1";
  return ep;
}

TcpClient::~TcpClient() {
  if (fd_ >= 0) ::close(fd_);
}

TcpClient::TcpClient(TcpClient&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

TcpClient& TcpClient::operator=(TcpClient&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    other.fd_ = -1;
  }
  return *this;
}

TcpClient TcpClient::connect_to(const Endpoint& ep, double timeout_sec) {
  TcpClient c;
  c.fd_ = connect_fd(ep, timeout_sec);
  return c;
}

Frame TcpClient::request(const Frame& f) {
  if (fd_ < 0) throw net_error("not connected");
  write_frame(fd_, f);
  auto reply = read_frame(fd_);
  if (!reply) throw net_error("server closed the connection");
  return *reply;
}

void serve_server(ServerNode& node, const ServeOptions& opts) {
  std::function<void(ServerNode&)> wire = [&opts](ServerNode& n) {
    if (!opts.announcer) return;
    Endpoint ep = *opts.announcer;
    // one lazy connection per server, re-established on failure
    auto client = std::make_shared<std::optional<TcpClient>>();
    auto mutex = std::make_shared<std::mutex>();
    n.set_announcer_send([ep, client, mutex](const Frame& f) -> Frame {
      std::lock_guard<std::mutex> lock(*mutex);
      for (int attempt = 0; attempt < 2; ++attempt) {
        try {
          if (!client->has_value()) *client = TcpClient::connect_to(ep, 10.0);
          return (*client)->request(f);
        } catch (const std::exception&) {
          client->reset();
        }
      }
      throw net_error("announcer unreachable");
    });
  };
  serve_loop(node, opts, wire);
}

void serve_announcer(AnnouncerNode& node, const ServeOptions& opts) {
  serve_loop<AnnouncerNode>(node, opts, nullptr);
}

namespace {

Frame poll_request(TcpClient& client, const Frame& f, double timeout_sec, const char* what) {
  auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_sec);
  for (;;) {
    Frame reply = client.request(f);
    Status s = result_status(reply);
    if (s == Status::ok) return reply;
    if (s == Status::error) throw protocol_error(std::string("server rejected ") + what);
    if (std::chrono::steady_clock::now() > deadline)
      throw protocol_error(std::string("timed out waiting for ") + what);
    std::this_thread::sleep_for(std::chrono::milliseconds(25));
  }
}

std::vector<u64> body_vector(const Frame& reply) {
  auto body = result_body(reply);
  if (body.empty() || body.size() != 1 + body[0]) throw protocol_error("malformed eval reply");
  return {body.begin() + 1, body.end()};
}

}  // namespace

QueryResult run_owner_agent(const QuerySpec& spec, const RoleView& owner_view,
                            const OwnerInputs& own, const NetEndpoints& eps,
                            double timeout_sec) {
  spec.validate();
  if (spec.bucket_fanout)
    throw parameter_error("bucketized queries run in simulation mode only");
  auto start = std::chrono::steady_clock::now();
  const u64 qid = spec.query_id();
  const u64 m = owner_view.m;
  const std::uint32_t self = own.bundle.owner_index;
  const bool needs_server3 = spec.op == Op::sum || spec.op == Op::avg;

  std::array<std::optional<TcpClient>, 3> conn;
  for (std::uint32_t s = 1; s <= (needs_server3 ? 3u : 2u); ++s)
    conn[s - 1] = TcpClient::connect_to(eps.servers[s - 1], timeout_sec);
  auto c = [&](std::uint32_t s) -> TcpClient& { return *conn[s - 1]; };

  // outsource this owner's columns
  for (std::uint32_t s = 1; s <= (needs_server3 ? 3u : 2u); ++s) {
    ServerShareSet subset = protocol::column_subset(own.bundle.per_server[s - 1], spec);
    if (s == 3) subset.presence.clear();
    Frame ack = c(s).request(make_store_table(qid, self, subset));
    if (result_status(ack) != Status::ok) throw protocol_error("share upload rejected");
  }

  QueryResult res;
  res.query_id = qid;
  res.op = spec.op;

  switch (spec.op) {
    case Op::psi: {
      auto out1 = body_vector(poll_request(c(1), make_psi_eval(qid, false), timeout_sec, "psi"));
      auto out2 = body_vector(poll_request(c(2), make_psi_eval(qid, false), timeout_sec, "psi"));
      PsiResult psi = psi_finalize(out1, out2, owner_view);
      for (u64 cell = 0; cell < psi.common.size(); ++cell)
        if (psi.common[cell]) res.member_cells.push_back(cell);
      if (spec.verify) {
        auto v1 = body_vector(poll_request(c(1), make_vout_eval(qid), timeout_sec, "vout"));
        auto v2 = body_vector(poll_request(c(2), make_vout_eval(qid), timeout_sec, "vout"));
        res.verification = verify_psi(psi.fop, v1, v2, owner_view);
      }
      break;
    }
    case Op::psu: {
      auto out1 = body_vector(poll_request(c(1), make_psu_eval(qid), timeout_sec, "psu"));
      auto out2 = body_vector(poll_request(c(2), make_psu_eval(qid), timeout_sec, "psu"));
      auto present = psu_finalize(out1, out2, owner_view.delta);
      for (u64 cell = 0; cell < present.size(); ++cell)
        if (present[cell]) res.member_cells.push_back(cell);
      break;
    }
    case Op::count: {
      auto out1 = body_vector(poll_request(c(1), make_psi_eval(qid, true), timeout_sec, "count"));
      auto out2 = body_vector(poll_request(c(2), make_psi_eval(qid, true), timeout_sec, "count"));
      res.count = count_finalize(out1, out2, owner_view);
      break;
    }
    case Op::sum:
    case Op::avg: {
      std::uint32_t sel = static_cast<std::uint32_t>(protocol::sum_selected_owner(qid, m)) + 1;
      if (sel == self) {
        auto out1 = body_vector(poll_request(c(1), make_psi_eval(qid, false), timeout_sec, "psi"));
        auto out2 = body_vector(poll_request(c(2), make_psi_eval(qid, false), timeout_sec, "psi"));
        PsiResult psi = psi_finalize(out1, out2, owner_view);
        auto z = make_z_shares(psi.common, owner_view, derive_seed(spec.seed, 0x7a736565));
        for (std::uint32_t s = 1; s <= 3; ++s) {
          Frame ack = c(s).request(make_store_z(qid, self, z[s - 1]));
          if (result_status(ack) != Status::ok) throw protocol_error("z upload rejected");
        }
      }
      protocol::SumVectors v[3];
      for (std::uint32_t s = 1; s <= 3; ++s)
        v[s - 1] = protocol::split_sum_reply(parse_vector_list(
            result_body(poll_request(c(s), make_sum_eval(qid), timeout_sec, "sum"))));
      QueryResult agg = protocol::assemble_sum_result(spec, owner_view, v[0], v[1], v[2]);
      res.aggregates = std::move(agg.aggregates);
      break;
    }
    case Op::max:
    case Op::median: {
      auto out1 = body_vector(poll_request(c(1), make_psi_eval(qid, false), timeout_sec, "psi"));
      auto out2 = body_vector(poll_request(c(2), make_psi_eval(qid, false), timeout_sec, "psi"));
      PsiResult psi = psi_finalize(out1, out2, owner_view);
      std::vector<u64> common_cells;
      for (u64 cell = 0; cell < psi.common.size(); ++cell)
        if (psi.common[cell]) common_cells.push_back(cell);

      u64 agg_kind = spec.op == Op::median ? kAggMedian : kAggMax;
      SplitMix64 rng(protocol::owner_round_seed(spec.seed, self, 0x6d617865));
      std::vector<u64> sh1, sh2;
      for (u64 cell : common_cells)
        for (std::uint32_t a = 0; a < spec.num_agg_attrs; ++a) {
          u64 stat = protocol::round2_stat(own.data, spec.op, cell, a);
          MaxEncodeResult enc = max_encode(stat, owner_view, rng);
          sh1.push_back(enc.shares[0]);
          sh2.push_back(enc.shares[1]);
        }
      c(1).request(make_max_upload(qid, self, agg_kind, spec.reveal_max_identity, sh1));
      c(2).request(make_max_upload(qid, self, agg_kind, spec.reveal_max_identity, sh2));
      auto s1 = protocol::parse_max_reply(
          result_body(poll_request(c(1), make_max_fetch(qid), timeout_sec, "max")));
      auto s2 = protocol::parse_max_reply(
          result_body(poll_request(c(2), make_max_fetch(qid), timeout_sec, "max")));
      auto outcome =
          protocol::finalize_max_round(spec, owner_view, own.data, common_cells, s1, s2);

      std::vector<std::vector<std::uint8_t>> holders;
      if (spec.op == Op::max && spec.reveal_max_identity) {
        SplitMix64 frng(protocol::owner_round_seed(spec.seed, self, 0x666c6167));
        std::vector<u64> a1, a2;
        std::size_t k = 0;
        for (u64 cell : common_cells)
          for (std::uint32_t a = 0; a < spec.num_agg_attrs; ++a, ++k) {
            bool holds = protocol::round2_stat(own.data, spec.op, cell, a) ==
                         outcome.per_instance[k].value;
            auto shares = max_round3_flag(holds, owner_view, frng);
            a1.push_back(shares[0]);
            a2.push_back(shares[1]);
          }
        c(1).request(make_fpos_upload(qid, self, a1));
        c(2).request(make_fpos_upload(qid, self, a2));
        auto r1 = poll_request(c(1), make_fpos_fetch(qid), timeout_sec, "fpos");
        auto r2 = poll_request(c(2), make_fpos_fetch(qid), timeout_sec, "fpos");
        auto f1 = result_body(r1);
        auto f2 = result_body(r2);
        if (f1.size() < 2 || f1.size() != f2.size()) throw protocol_error("malformed fpos reply");
        u64 groups = f1[0];
        for (u64 grp = 0; grp < groups; ++grp)
          holders.push_back(fpos_combine(std::span<const u64>(f1.data() + 2 + grp * m, m),
                                         std::span<const u64>(f2.data() + 2 + grp * m, m),
                                         *owner_view.max_modulus));
      }
      QueryResult agg = protocol::assemble_max_result(spec, outcome, holders);
      res.aggregates = std::move(agg.aggregates);
      break;
    }
  }
  res.rounds = spec.expected_rounds();
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace prism
