#include "prism/sim.hpp"

#include <chrono>
#include <memory>

#include "prism/nodes.hpp"

namespace prism {

namespace {

using protocol::AnnShareHalf;
using protocol::SumVectors;

/// Moves frames between in-process role nodes in parallel-round bursts:
/// every queued request is recorded before any handler runs, so the
/// transcript shows one owner->server burst per protocol round exactly as a
/// synchronized deployment would.
class Driver {
 public:
  Driver(const ParamsSet& views, const SimOptions& opts, Transcript& tr)
      : announcer_(views.announcer_view), tr_(tr) {
    for (std::uint32_t s = 0; s < 3; ++s) {
      servers_[s] = std::make_unique<ServerNode>(views.server_views[s]);
      servers_[s]->engine().set_threads(opts.threads);
      servers_[s]->engine().set_tamper(opts.tamper[s]);
      std::uint32_t index = s + 1;
      servers_[s]->set_announcer_send([this, index](const Frame& f) {
        tr_.add({Actor::server, index, Actor::announcer, 0, f.type, f.query_id, f.digest(), false});
        Frame reply = announcer_.handle(f);
        if (reply.payload.size() > 1)
          tr_.add({Actor::announcer, 0, Actor::server, index, reply.type, reply.query_id,
                   reply.digest(), false});
        return reply;
      });
    }
  }

  void enqueue(std::uint32_t owner, std::uint32_t server, Frame frame, bool preload = false) {
    pending_.push_back({owner, server, std::move(frame), preload});
  }

  // One round: record all requests, then handle them in order.
  std::vector<Frame> flush() {
    for (const auto& p : pending_)
      tr_.add({Actor::owner, p.owner, Actor::server, p.server, p.frame.type, p.frame.query_id,
               p.frame.digest(), p.preload});
    std::vector<Frame> replies;
    replies.reserve(pending_.size());
    for (const auto& p : pending_) {
      Frame reply = servers_[p.server - 1]->handle(p.frame);
      if (result_status(reply) == Status::error)
        throw protocol_error("server " + std::to_string(p.server) + " rejected a " +
                             msg_type_name(p.frame.type) + " frame");
      if (result_status(reply) == Status::not_ready)
        throw protocol_error("server not ready inside a simulated round");
      if (reply.payload.size() > 1)
        tr_.add({Actor::server, p.server, Actor::owner, p.owner, reply.type, reply.query_id,
                 reply.digest(), p.preload});
      replies.push_back(std::move(reply));
    }
    pending_.clear();
    return replies;
  }

 private:
  struct Pending {
    std::uint32_t owner;
    std::uint32_t server;
    Frame frame;
    bool preload;
  };

  std::array<std::unique_ptr<ServerNode>, 3> servers_;
  AnnouncerNode announcer_;
  Transcript& tr_;
  std::vector<Pending> pending_;
};

bool is_aggregate(Op op) {
  return op == Op::sum || op == Op::avg || op == Op::max || op == Op::median;
}

void upload_bundles(Driver& driver, const QuerySpec& spec, u64 qid,
                    const std::vector<OwnerInputs>& owners) {
  bool needs_server3 = spec.op == Op::sum || spec.op == Op::avg;
  for (const auto& in : owners) {
    for (std::uint32_t s = 1; s <= (needs_server3 ? 3u : 2u); ++s) {
      ServerShareSet subset = protocol::column_subset(in.bundle.per_server[s - 1], spec);
      if (s == 3) subset.presence.clear();  // server 3 holds Shamir columns only
      driver.enqueue(in.bundle.owner_index, s,
                     make_store_table(qid, in.bundle.owner_index, subset), /*preload=*/true);
    }
  }
  driver.flush();
}

std::vector<u64> body_vector(const Frame& reply) {
  auto body = result_body(reply);
  if (body.empty() || body.size() != 1 + body[0])
    throw protocol_error("malformed eval reply");
  return {body.begin() + 1, body.end()};
}

// All owners fetch both servers' eval outputs; returns the pair of output
// vectors (identical for every owner).
std::pair<std::vector<u64>, std::vector<u64>> fetch_all(Driver& driver, u64 qid, MsgType type,
                                                        bool permute, u64 m) {
  for (std::uint32_t j = 1; j <= m; ++j)
    for (std::uint32_t s = 1; s <= 2; ++s) {
      Frame f = type == MsgType::psi_eval ? make_psi_eval(qid, permute)
                : type == MsgType::psu_eval ? make_psu_eval(qid)
                                            : make_vout_eval(qid);
      driver.enqueue(j, s, std::move(f));
    }
  auto replies = driver.flush();
  return {body_vector(replies[0]), body_vector(replies[1])};
}

QueryResult run_plain(const QuerySpec& spec, const ParamsSet& views,
                      const std::vector<OwnerInputs>& owners, Transcript& tr,
                      const SimOptions& opts) {
  const u64 qid = spec.query_id();
  const u64 m = views.owner_view.m;
  Driver driver(views, opts, tr);
  upload_bundles(driver, spec, qid, owners);

  QueryResult res;
  res.query_id = qid;
  res.op = spec.op;
  const RoleView& ov = views.owner_view;

  switch (spec.op) {
    case Op::psi: {
      // round 1: every owner requests both servers' outputs (with the
      // complement outputs when verifying)
      for (std::uint32_t j = 1; j <= m; ++j)
        for (std::uint32_t s = 1; s <= 2; ++s) {
          driver.enqueue(j, s, make_psi_eval(qid, false));
          if (spec.verify) driver.enqueue(j, s, make_vout_eval(qid));
        }
      auto replies = driver.flush();
      std::vector<u64> out1 = body_vector(replies[0]);
      std::vector<u64> out2 = body_vector(replies[spec.verify ? 2 : 1]);
      PsiResult psi = psi_finalize(out1, out2, ov);
      for (u64 c = 0; c < psi.common.size(); ++c)
        if (psi.common[c]) res.member_cells.push_back(c);
      if (spec.verify) {
        std::vector<u64> vout1 = body_vector(replies[1]);
        std::vector<u64> vout2 = body_vector(replies[3]);
        res.verification = verify_psi(psi.fop, vout1, vout2, ov);
      }
      break;
    }
    case Op::psu: {
      auto [out1, out2] = fetch_all(driver, qid, MsgType::psu_eval, false, m);
      auto present = psu_finalize(out1, out2, ov.delta);
      for (u64 c = 0; c < present.size(); ++c)
        if (present[c]) res.member_cells.push_back(c);
      break;
    }
    case Op::count: {
      auto [out1, out2] = fetch_all(driver, qid, MsgType::psi_eval, true, m);
      res.count = count_finalize(out1, out2, ov);
      break;
    }
    case Op::sum:
    case Op::avg: {
      // round 1: the seeded owner alone receives the PSI output
      std::uint32_t sel = static_cast<std::uint32_t>(protocol::sum_selected_owner(qid, m)) + 1;
      driver.enqueue(sel, 1, make_psi_eval(qid, false));
      driver.enqueue(sel, 2, make_psi_eval(qid, false));
      auto r1 = driver.flush();
      PsiResult psi = psi_finalize(body_vector(r1[0]), body_vector(r1[1]), ov);
      // round 2: z shares up, aggregate vectors down to everyone
      auto z = make_z_shares(psi.common, ov, derive_seed(spec.seed, 0x7a736565));
      for (std::uint32_t s = 1; s <= 3; ++s)
        driver.enqueue(sel, s, make_store_z(qid, sel, z[s - 1]));
      for (std::uint32_t j = 1; j <= m; ++j)
        for (std::uint32_t s = 1; s <= 3; ++s) driver.enqueue(j, s, make_sum_eval(qid));
      auto r2 = driver.flush();
      SumVectors v1 = protocol::split_sum_reply(parse_vector_list(result_body(r2[3])));
      SumVectors v2 = protocol::split_sum_reply(parse_vector_list(result_body(r2[4])));
      SumVectors v3 = protocol::split_sum_reply(parse_vector_list(result_body(r2[5])));
      QueryResult agg = protocol::assemble_sum_result(spec, ov, v1, v2, v3);
      res.aggregates = std::move(agg.aggregates);
      break;
    }
    case Op::max:
    case Op::median: {
      auto [out1, out2] = fetch_all(driver, qid, MsgType::psi_eval, false, m);
      PsiResult psi = psi_finalize(out1, out2, ov);
      std::vector<u64> common_cells;
      for (u64 c = 0; c < psi.common.size(); ++c)
        if (psi.common[c]) common_cells.push_back(c);

      // round 2: encoded per-group statistics to the servers, announced
      // winner shares back
      u64 agg_kind = spec.op == Op::median ? kAggMedian : kAggMax;
      for (std::uint32_t j = 1; j <= m; ++j) {
        SplitMix64 rng(protocol::owner_round_seed(spec.seed, j, 0x6d617865));
        std::vector<u64> sh1, sh2;
        for (u64 cell : common_cells)
          for (std::uint32_t a = 0; a < spec.num_agg_attrs; ++a) {
            u64 stat = protocol::round2_stat(owners[j - 1].data, spec.op, cell, a);
            MaxEncodeResult enc = max_encode(stat, ov, rng);
            sh1.push_back(enc.shares[0]);
            sh2.push_back(enc.shares[1]);
          }
        driver.enqueue(j, 1, make_max_upload(qid, j, agg_kind, spec.reveal_max_identity, sh1));
        driver.enqueue(j, 2, make_max_upload(qid, j, agg_kind, spec.reveal_max_identity, sh2));
      }
      for (std::uint32_t j = 1; j <= m; ++j)
        for (std::uint32_t s = 1; s <= 2; ++s) driver.enqueue(j, s, make_max_fetch(qid));
      auto replies = driver.flush();
      std::size_t base = 2 * m;  // fetch replies follow the upload acks
      auto s1 = protocol::parse_max_reply(result_body(replies[base]));
      auto s2 = protocol::parse_max_reply(result_body(replies[base + 1]));
      auto outcome = protocol::finalize_max_round(spec, ov, owners[0].data, common_cells, s1, s2);

      std::vector<std::vector<std::uint8_t>> holders;
      if (spec.op == Op::max && spec.reveal_max_identity) {
        // round 3: each owner flags whether it attains the announced value
        for (std::uint32_t j = 1; j <= m; ++j) {
          SplitMix64 rng(protocol::owner_round_seed(spec.seed, j, 0x666c6167));
          std::vector<u64> a1, a2;
          std::size_t k = 0;
          for (u64 cell : common_cells)
            for (std::uint32_t a = 0; a < spec.num_agg_attrs; ++a, ++k) {
              bool holds = protocol::round2_stat(owners[j - 1].data, spec.op, cell, a) ==
                           outcome.per_instance[k].value;
              auto shares = max_round3_flag(holds, ov, rng);
              a1.push_back(shares[0]);
              a2.push_back(shares[1]);
            }
          driver.enqueue(j, 1, make_fpos_upload(qid, j, a1));
          driver.enqueue(j, 2, make_fpos_upload(qid, j, a2));
        }
        for (std::uint32_t j = 1; j <= m; ++j)
          for (std::uint32_t s = 1; s <= 2; ++s) driver.enqueue(j, s, make_fpos_fetch(qid));
        auto r3 = driver.flush();
        auto fbody1 = result_body(r3[2 * m]);
        auto fbody2 = result_body(r3[2 * m + 1]);
        if (fbody1.size() < 2 || fbody1.size() != fbody2.size())
          throw protocol_error("malformed fpos reply");
        u64 groups = fbody1[0];
        for (u64 grp = 0; grp < groups; ++grp) {
          std::span<const u64> f1(fbody1.data() + 2 + grp * m, m);
          std::span<const u64> f2(fbody2.data() + 2 + grp * m, m);
          holders.push_back(fpos_combine(f1, f2, *ov.max_modulus));
        }
      }
      QueryResult agg = protocol::assemble_max_result(spec, outcome, holders);
      res.aggregates = std::move(agg.aggregates);
      break;
    }
  }
  res.rounds = tr.owner_server_rounds();
  return res;
}

}  // namespace

QueryResult run_query(const QuerySpec& spec, const ParamsSet& views,
                      const std::vector<OwnerInputs>& owners, Transcript* transcript,
                      const SimOptions& opts) {
  spec.validate();
  if (views.owner_view.m != owners.size())
    throw parameter_error("owner count does not match the parameter files");
  if (spec.bucket_fanout) return run_bucketized_query(spec, views, owners, transcript, opts);

  auto start = std::chrono::steady_clock::now();
  Transcript local;
  QueryResult res = run_plain(spec, views, owners, local, opts);
  res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (transcript) *transcript = std::move(local);
  return res;
}

QueryResult run_bucketized_query(const QuerySpec& spec, const ParamsSet& views,
                                 const std::vector<OwnerInputs>& owners, Transcript* transcript,
                                 const SimOptions& opts) {
  spec.validate();
  if (!spec.bucket_fanout) throw parameter_error("bucketized run needs a fanout");
  if (spec.verify) throw parameter_error("verification is not defined for bucketized runs");
  if (spec.op == Op::max || spec.op == Op::median)
    throw parameter_error("bucketized max/median is not supported");
  auto start = std::chrono::steady_clock::now();
  const u64 qid = spec.query_id();
  const u64 m = views.owner_view.m;
  const u64 b = views.owner_view.b;
  const RoleView& ov = views.owner_view;
  Transcript tr;
  Driver driver(views, opts, tr);

  // identical tree shape at every owner
  std::vector<BucketTree> trees;
  trees.reserve(owners.size());
  for (const auto& in : owners) trees.push_back(build_bucket_tree(in.data.table.bits, *spec.bucket_fanout));
  const std::size_t num_levels = trees[0].levels.size();

  QueryResult res;
  res.query_id = qid;
  res.op = spec.op;

  // start just below the root; a 1-cell level carries no information
  std::size_t level = num_levels >= 2 ? num_levels - 2 : 0;
  std::vector<u64> alive(trees[0].levels[level].size());
  for (u64 i = 0; i < alive.size(); ++i) alive[i] = i;

  std::vector<u64> common_cells;
  bool reached_leaf = false;
  for (;; --level) {
    const bool leaf = level == 0;
    u64 level_qid = derive_seed(qid, 0xb0000 + level);
    // fresh additive shares of the restricted level bits
    for (std::uint32_t j = 1; j <= m; ++j) {
      SplitMix64 rng(protocol::owner_round_seed(spec.seed, j, 0xb1000 + level));
      ServerShareSet s1, s2;
      s1.presence.reserve(alive.size());
      s2.presence.reserve(alive.size());
      for (u64 cell : alive) {
        u64 bit = trees[j - 1].levels[level][cell];
        u64 first = rng.uniform(ov.delta);
        s1.presence.push_back(first);
        s2.presence.push_back(sub_mod(bit, first, ov.delta));
      }
      if (leaf && (spec.op == Op::sum || spec.op == Op::avg)) {
        // leaf aggregates reuse the outsourced Shamir columns, restricted
        for (std::uint32_t s = 1; s <= 3; ++s) {
          ServerShareSet subset;
          const ServerShareSet& full = owners[j - 1].bundle.per_server[s - 1];
          for (std::uint32_t a = 0; a < spec.num_agg_attrs; ++a) {
            std::vector<u64> col;
            col.reserve(alive.size());
            for (u64 cell : alive) col.push_back(full.payload[a][cell]);
            subset.payload.push_back(std::move(col));
          }
          std::vector<u64> counts;
          counts.reserve(alive.size());
          for (u64 cell : alive) counts.push_back(full.counts[cell]);
          subset.counts = std::move(counts);
          if (s == 1) subset.presence = s1.presence;
          if (s == 2) subset.presence = s2.presence;
          driver.enqueue(j, s, make_store_table(level_qid, j, subset));
        }
      } else {
        driver.enqueue(j, 1, make_store_table(level_qid, j, s1));
        driver.enqueue(j, 2, make_store_table(level_qid, j, s2));
      }
    }
    for (std::uint32_t j = 1; j <= m; ++j)
      for (std::uint32_t s = 1; s <= 2; ++s) driver.enqueue(j, s, make_psi_eval(level_qid, false));
    auto replies = driver.flush();
    std::size_t uploads = (leaf && (spec.op == Op::sum || spec.op == Op::avg)) ? 3 * m : 2 * m;
    PsiResult psi =
        psi_finalize(body_vector(replies[uploads]), body_vector(replies[uploads + 1]), ov);
    res.level_transmissions.push_back(alive.size());

    std::vector<u64> survivors;
    for (std::size_t i = 0; i < alive.size(); ++i)
      if (psi.common[i]) survivors.push_back(alive[i]);

    if (leaf) {
      reached_leaf = true;
      common_cells = survivors;
      break;
    }
    // children of surviving buckets, clamped to real cells at the leaf level
    std::vector<u64> next;
    const u64 fan = *spec.bucket_fanout;
    u64 child_width = trees[0].levels[level - 1].size();
    for (u64 cell : survivors)
      for (u64 k = cell * fan; k < std::min(cell * fan + fan, child_width); ++k)
        if (level - 1 != 0 || k < b) next.push_back(k);
    alive = std::move(next);
    if (alive.empty()) break;  // whole tree pruned
  }

  if (spec.op == Op::psi) {
    res.member_cells = common_cells;
  } else if (reached_leaf && (spec.op == Op::sum || spec.op == Op::avg)) {
    u64 leaf_qid = derive_seed(qid, 0xb0000);
    std::uint32_t sel = static_cast<std::uint32_t>(protocol::sum_selected_owner(qid, m)) + 1;
    std::vector<std::uint8_t> common(alive.size(), 0);
    for (std::size_t i = 0; i < alive.size(); ++i)
      for (u64 cell : common_cells)
        if (alive[i] == cell) common[i] = 1;
    auto z = make_z_shares(common, ov, derive_seed(spec.seed, 0x7a736565));
    for (std::uint32_t s = 1; s <= 3; ++s)
      driver.enqueue(sel, s, make_store_z(leaf_qid, sel, z[s - 1]));
    for (std::uint32_t j = 1; j <= m; ++j)
      for (std::uint32_t s = 1; s <= 3; ++s) driver.enqueue(j, s, make_sum_eval(leaf_qid));
    auto r2 = driver.flush();
    SumVectors v1 = protocol::split_sum_reply(parse_vector_list(result_body(r2[3])));
    SumVectors v2 = protocol::split_sum_reply(parse_vector_list(result_body(r2[4])));
    SumVectors v3 = protocol::split_sum_reply(parse_vector_list(result_body(r2[5])));
    QueryResult agg = protocol::assemble_sum_result(spec, ov, v1, v2, v3);
    // positions are relative to the surviving leaf set; map back
    for (auto& g : agg.aggregates) g.cell = alive[g.cell];
    res.aggregates = std::move(agg.aggregates);
  }

  res.rounds = tr.owner_server_rounds();
  res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (transcript) *transcript = std::move(tr);
  return res;
}

}  // namespace prism
