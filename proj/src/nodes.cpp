#include "prism/nodes.hpp"

namespace prism {

namespace {

struct Reader {
  std::span<const u64> data;
  std::size_t pos = 0;

  u64 next() {
    if (pos >= data.size()) throw protocol_error("frame payload truncated");
    return data[pos++];
  }
  std::vector<u64> take(u64 n) {
    if (pos + n > data.size()) throw protocol_error("frame payload truncated");
    std::vector<u64> v(data.begin() + pos, data.begin() + pos + n);
    pos += n;
    return v;
  }
};

}  // namespace

ServerShareSet parse_store_table(const Frame& f, std::uint32_t& owner_out) {
  Reader r{f.payload};
  if (r.next() != kStoreTable) throw protocol_error("not a table store frame");
  owner_out = static_cast<std::uint32_t>(r.next());
  u64 b = r.next();
  u64 num_attrs = r.next();
  bool has_complement = r.next() != 0;
  bool has_counts = r.next() != 0;
  bool has_presence = r.next() != 0;
  ServerShareSet s;
  if (has_presence) s.presence = r.take(b);
  if (has_complement) s.complement = r.take(b);
  for (u64 a = 0; a < num_attrs; ++a) s.payload.push_back(r.take(b));
  if (has_counts) s.counts = r.take(b);
  return s;
}

Frame ServerNode::handle(const Frame& request) {
  try {
    switch (request.type) {
      case MsgType::store_shares:
        return handle_store(request);
      case MsgType::psi_eval:
      case MsgType::psu_eval:
      case MsgType::vout_eval:
      case MsgType::sum_eval:
        return handle_eval(request);
      case MsgType::max_round:
        return handle_max(request);
      case MsgType::fpos:
        return handle_fpos(request);
      case MsgType::result:
        break;
    }
  } catch (const std::exception&) {
    return make_result(request.query_id, Status::error);
  }
  return make_result(request.query_id, Status::error);
}

Frame ServerNode::handle_store(const Frame& f) {
  Reader r{f.payload};
  u64 kind = r.next();
  if (kind == kStoreTable) {
    std::uint32_t owner = 0;
    ServerShareSet shares = parse_store_table(f, owner);
    engine_.store_shares(f.query_id, owner, std::move(shares));
  } else if (kind == kStoreZ) {
    r.next();  // owner, informational
    u64 n = r.next();
    engine_.store_z(f.query_id, r.take(n));
  } else {
    return make_result(f.query_id, Status::error);
  }
  return make_result(f.query_id, Status::ok);
}

Frame ServerNode::handle_eval(const Frame& f) {
  const u64 qid = f.query_id;
  if (!engine_.all_shares_present(qid)) return make_result(qid, Status::not_ready);

  if (f.type == MsgType::psi_eval) {
    bool permute = !f.payload.empty() && f.payload[0] != 0;
    if (!psi_cache_.count(qid)) psi_cache_[qid] = engine_.psi_eval(qid);
    if (!permute) {
      std::vector<u64> body{psi_cache_[qid].size()};
      body.insert(body.end(), psi_cache_[qid].begin(), psi_cache_[qid].end());
      return make_result(qid, Status::ok, std::move(body));
    }
    if (!psi_permuted_cache_.count(qid))
      psi_permuted_cache_[qid] = engine_.count_permute(psi_cache_[qid]);
    std::vector<u64> body{psi_permuted_cache_[qid].size()};
    body.insert(body.end(), psi_permuted_cache_[qid].begin(), psi_permuted_cache_[qid].end());
    return make_result(qid, Status::ok, std::move(body));
  }
  if (f.type == MsgType::vout_eval) {
    if (!vout_cache_.count(qid)) vout_cache_[qid] = engine_.vout_eval(qid);
    std::vector<u64> body{vout_cache_[qid].size()};
    body.insert(body.end(), vout_cache_[qid].begin(), vout_cache_[qid].end());
    return make_result(qid, Status::ok, std::move(body));
  }
  if (f.type == MsgType::psu_eval) {
    if (!psu_cache_.count(qid)) psu_cache_[qid] = engine_.psu_eval(qid);
    std::vector<u64> body{psu_cache_[qid].size()};
    body.insert(body.end(), psu_cache_[qid].begin(), psu_cache_[qid].end());
    return make_result(qid, Status::ok, std::move(body));
  }
  // sum_eval
  if (!engine_.z_present(qid)) return make_result(qid, Status::not_ready);
  if (!sum_cache_.count(qid)) sum_cache_[qid] = engine_.sum_eval(qid);
  return make_result(qid, Status::ok, pack_vector_list(sum_cache_[qid]));
}

Frame ServerNode::handle_max(const Frame& f) {
  Reader r{f.payload};
  u64 sub = r.next();
  const u64 qid = f.query_id;
  if (sub == kMaxUpload) {
    auto owner = static_cast<std::uint32_t>(r.next());
    auto& st = max_state_[qid];
    st.agg_kind = r.next();
    st.reveal = r.next() != 0;
    u64 groups = r.next();
    engine_.store_max_share(qid, owner, r.take(groups));
    if (engine_.max_shares_present(qid) && !st.pushed) {
      // eager push: by the time owners fetch, the announcer has both vectors
      push_to_announcer(qid, st);
    }
    return make_result(qid, Status::ok);
  }
  if (sub == kMaxFetch) {
    if (!engine_.max_shares_present(qid)) return make_result(qid, Status::not_ready);
    auto& st = max_state_[qid];
    if (!st.announcer_reply) {
      Frame reply = push_to_announcer(qid, st);
      if (result_status(reply) != Status::ok) return make_result(qid, Status::not_ready);
    }
    return make_result(qid, Status::ok, *st.announcer_reply);
  }
  return make_result(qid, Status::error);
}

Frame ServerNode::push_to_announcer(u64 qid, MaxState& st) {
  if (!announcer_send_) throw protocol_error("no announcer reachable");
  std::vector<u64> flat = engine_.max_collect_permute(qid);
  u64 m = engine_.expected_owners();
  Frame f{MsgType::max_round, qid,
          {kMaxToAnnouncer, engine_.index(), st.agg_kind, st.reveal ? 1ull : 0ull,
           flat.size() / m, m}};
  f.payload.insert(f.payload.end(), flat.begin(), flat.end());
  st.pushed = true;
  Frame reply = announcer_send_(f);
  if (result_status(reply) == Status::ok) {
    auto body = result_body(reply);
    st.announcer_reply = std::vector<u64>(body.begin(), body.end());
  }
  return reply;
}

Frame ServerNode::handle_fpos(const Frame& f) {
  Reader r{f.payload};
  u64 sub = r.next();
  const u64 qid = f.query_id;
  if (sub == kFposUpload) {
    auto owner = static_cast<std::uint32_t>(r.next());
    u64 groups = r.next();
    engine_.store_alpha_share(qid, owner, r.take(groups));
    return make_result(qid, Status::ok);
  }
  if (sub == kFposFetch) {
    if (!engine_.alpha_shares_present(qid)) return make_result(qid, Status::not_ready);
    std::vector<u64> flat = engine_.fpos_assemble(qid);
    std::vector<u64> body{flat.size() / engine_.expected_owners(), engine_.expected_owners()};
    body.insert(body.end(), flat.begin(), flat.end());
    return make_result(qid, Status::ok, std::move(body));
  }
  return make_result(qid, Status::error);
}

Frame AnnouncerNode::handle(const Frame& request) {
  try {
    if (request.type != MsgType::max_round) return make_result(request.query_id, Status::error);
    Reader r{request.payload};
    if (r.next() != kMaxToAnnouncer) return make_result(request.query_id, Status::error);
    auto server = static_cast<std::uint32_t>(r.next());
    if (server != 1 && server != 2) return make_result(request.query_id, Status::error);
    auto& q = queries_[request.query_id];
    q.agg_kind = r.next();
    q.reveal = r.next() != 0;
    q.groups = r.next();
    q.m = r.next();
    q.vectors[server] = r.take(q.groups * q.m);

    if (q.vectors.size() < 2) return make_result(request.query_id, Status::not_ready);
    if (!q.results) {
      if (!view_.max_modulus) throw parameter_error("announcer view lacks max_modulus");
      // seeded from the query id so both modes re-share identically
      SplitMix64 rng(derive_seed(request.query_id, 0x616e6e63));
      std::vector<AnnouncerResult> results;
      results.reserve(q.groups);
      for (u64 grp = 0; grp < q.groups; ++grp) {
        std::span<const u64> v1(q.vectors.at(1).data() + grp * q.m, q.m);
        std::span<const u64> v2(q.vectors.at(2).data() + grp * q.m, q.m);
        if (q.agg_kind == kAggMedian)
          results.push_back(median_select(v1, v2, *view_.max_modulus, rng));
        else
          results.push_back(
              combine_and_findmax(v1, v2, *view_.max_modulus, q.reveal, rng));
      }
      q.results = std::move(results);
    }
    std::vector<u64> body{q.groups};
    for (const auto& res : *q.results) {
      body.push_back(res.max_shares[server - 1]);
      body.push_back(res.index_shares ? 1 : 0);
      body.push_back(res.index_shares ? (*res.index_shares)[server - 1] : 0);
    }
    return make_result(request.query_id, Status::ok, std::move(body));
  } catch (const std::exception&) {
    return make_result(request.query_id, Status::error);
  }
}

}  // namespace prism
