#include <doctest.h>

#include <atomic>
#include <thread>

#include "prism/net.hpp"
#include "test_support.hpp"

using namespace prism;
using namespace prism::testsupport;

TEST_CASE("frames survive the wire encoding") {
  SplitMix64 rng(71);
  for (int t = 0; t < 50; ++t) {
    Frame f;
    f.type = static_cast<MsgType>(1 + rng.uniform(8));
    f.query_id = rng.next();
    f.payload.resize(rng.uniform(64));
    for (auto& v : f.payload) v = rng.next();

    auto bytes = encode_frame(f);
    // 4-byte big-endian length prefix covers type + query id + payload
    u64 len = (u64(bytes[0]) << 24) | (u64(bytes[1]) << 16) | (u64(bytes[2]) << 8) | bytes[3];
    CHECK(len == 9 + 8 * f.payload.size());
    CHECK(bytes.size() == 4 + len);
    CHECK(bytes[4] == static_cast<std::uint8_t>(f.type));

    Frame back = decode_frame(std::span<const std::uint8_t>(bytes).subspan(4));
    CHECK(back.type == f.type);
    CHECK(back.query_id == f.query_id);
    CHECK(back.payload == f.payload);
    CHECK(back.digest() == f.digest());
  }
}

TEST_CASE("malformed frame bodies are rejected") {
  std::vector<std::uint8_t> tiny{1, 2, 3};
  CHECK_THROWS_AS(decode_frame(tiny), protocol_error);
  std::vector<std::uint8_t> bad_type(9, 0);
  bad_type[0] = 99;
  CHECK_THROWS_AS(decode_frame(bad_type), protocol_error);
  std::vector<std::uint8_t> ragged(12, 0);
  ragged[0] = 2;
  CHECK_THROWS_AS(decode_frame(ragged), protocol_error);
}

TEST_CASE("store frame round trip") {
  ServerShareSet s;
  s.presence = {1, 2, 3};
  s.complement = {4, 0, 1};
  s.payload = {{9, 9, 9}, {5, 6, 7}};
  s.counts = {1, 0, 2};
  Frame f = make_store_table(42, 7, s);
  std::uint32_t owner = 0;
  ServerShareSet back = parse_store_table(f, owner);
  CHECK(owner == 7);
  CHECK(back.presence == s.presence);
  CHECK(back.complement == s.complement);
  CHECK(back.payload == s.payload);
  CHECK(back.counts == s.counts);
}

TEST_CASE("networked deployment matches the simulation bit for bit") {
  PlainInstance inst = random_instance(2025, 2, 8, 1, 30);
  PublicParams params = generate_params(2, 8, instance_domain_max(inst) + 1, 2026);
  ParamsSet views = views_from(params);
  auto owners = owner_inputs_from(inst, views.owner_view, 2027);

  // announcer plus three servers on loopback
  std::atomic<bool> stop{false};
  std::uint16_t ann_port = 0, server_ports[3] = {0, 0, 0};
  std::atomic<int> ready{0};

  AnnouncerNode ann(views.announcer_view);
  std::thread ann_thread([&] {
    ServeOptions o;
    o.stop = &stop;
    o.on_listen = [&](std::uint16_t p) {
      ann_port = p;
      ++ready;
    };
    serve_announcer(ann, o);
  });
  while (ready.load() < 1) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  std::array<std::unique_ptr<ServerNode>, 3> nodes;
  std::vector<std::thread> server_threads;
  for (int s = 0; s < 3; ++s) {
    nodes[s] = std::make_unique<ServerNode>(views.server_views[s]);
    server_threads.emplace_back([&, s] {
      ServeOptions o;
      o.stop = &stop;
      o.announcer = Endpoint{"127.0.0.1", ann_port};
      o.on_listen = [&, s](std::uint16_t p) {
        server_ports[s] = p;
        ++ready;
      };
      serve_server(*nodes[s], o);
    });
  }
  while (ready.load() < 4) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  NetEndpoints eps;
  for (int s = 0; s < 3; ++s) eps.servers[s] = {"127.0.0.1", server_ports[s]};

  for (Op op : {Op::psi, Op::max}) {
    QuerySpec spec;
    spec.op = op;
    spec.num_agg_attrs = op == Op::max ? 1 : 0;
    spec.reveal_max_identity = op == Op::max;
    spec.verify = op == Op::psi;
    spec.seed = 2028 + static_cast<u64>(op);

    QueryResult sim_res = run_query(spec, views, owners);

    // both owner agents run concurrently, as separate parties would
    QueryResult agent_res[2];
    std::thread a1([&] { agent_res[0] = run_owner_agent(spec, views.owner_view, owners[0], eps); });
    std::thread a2([&] { agent_res[1] = run_owner_agent(spec, views.owner_view, owners[1], eps); });
    a1.join();
    a2.join();

    std::vector<std::string> labels;
    std::string want = result_to_json(sim_res, labels, false);
    CHECK(result_to_json(agent_res[0], labels, false) == want);
    CHECK(result_to_json(agent_res[1], labels, false) == want);
  }

  stop = true;
  ann_thread.join();
  for (auto& t : server_threads) t.join();
}
