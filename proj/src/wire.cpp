#include "prism/wire.hpp"

namespace prism {

u64 Frame::digest() const {
  return fnv1a64(payload.data(), payload.size() * sizeof(u64));
}

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  const u64 body_len = 1 + 8 + f.payload.size() * 8;
  if (body_len > 0xffffffffull) throw protocol_error("frame too large");
  std::vector<std::uint8_t> out;
  out.reserve(4 + body_len);
  for (int i = 3; i >= 0; --i)
    out.push_back(static_cast<std::uint8_t>((body_len >> (8 * i)) & 0xff));
  out.push_back(static_cast<std::uint8_t>(f.type));
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>((f.query_id >> (8 * i)) & 0xff));
  for (u64 v : f.payload)
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> body) {
  if (body.size() < 9 || (body.size() - 9) % 8 != 0)
    throw protocol_error("malformed frame body");
  Frame f;
  auto type = body[0];
  if (type < 1 || type > 8) throw protocol_error("unknown message type");
  f.type = static_cast<MsgType>(type);
  for (int i = 0; i < 8; ++i) f.query_id |= static_cast<u64>(body[1 + i]) << (8 * i);
  const std::size_t n = (body.size() - 9) / 8;
  f.payload.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(body[9 + k * 8 + i]) << (8 * i);
    f.payload[k] = v;
  }
  return f;
}

Frame make_store_table(u64 qid, std::uint32_t owner, const ServerShareSet& shares) {
  Frame f{MsgType::store_shares, qid, {}};
  const u64 b = shares.presence.empty() && !shares.payload.empty() ? shares.payload[0].size()
                                                                   : shares.presence.size();
  f.payload = {kStoreTable,
               owner,
               b,
               shares.payload.size(),
               shares.complement.empty() ? 0ull : 1ull,
               shares.counts.empty() ? 0ull : 1ull,
               shares.presence.empty() ? 0ull : 1ull};
  auto append = [&](const std::vector<u64>& v) {
    f.payload.insert(f.payload.end(), v.begin(), v.end());
  };
  append(shares.presence);
  append(shares.complement);
  for (const auto& col : shares.payload) append(col);
  append(shares.counts);
  return f;
}

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

Frame make_store_z(u64 qid, std::uint32_t owner, const std::vector<u64>& z) {
  Frame f{MsgType::store_shares, qid, {kStoreZ, owner, z.size()}};
  f.payload.insert(f.payload.end(), z.begin(), z.end());
  return f;
}

Frame make_psi_eval(u64 qid, bool permute) {
  return {MsgType::psi_eval, qid, {permute ? 1ull : 0ull}};
}

Frame make_psu_eval(u64 qid) { return {MsgType::psu_eval, qid, {}}; }

Frame make_vout_eval(u64 qid) { return {MsgType::vout_eval, qid, {}}; }

Frame make_sum_eval(u64 qid) { return {MsgType::sum_eval, qid, {}}; }

Frame make_max_upload(u64 qid, std::uint32_t owner, u64 agg_kind, bool reveal,
                      const std::vector<u64>& per_group) {
  Frame f{MsgType::max_round, qid,
          {kMaxUpload, owner, agg_kind, reveal ? 1ull : 0ull, per_group.size()}};
  f.payload.insert(f.payload.end(), per_group.begin(), per_group.end());
  return f;
}

Frame make_max_fetch(u64 qid) { return {MsgType::max_round, qid, {kMaxFetch}}; }

Frame make_fpos_upload(u64 qid, std::uint32_t owner, const std::vector<u64>& per_group) {
  Frame f{MsgType::fpos, qid, {kFposUpload, owner, per_group.size()}};
  f.payload.insert(f.payload.end(), per_group.begin(), per_group.end());
  return f;
}

Frame make_fpos_fetch(u64 qid) { return {MsgType::fpos, qid, {kFposFetch}}; }

Frame make_result(u64 qid, Status status, std::vector<u64> body) {
  Frame f{MsgType::result, qid, {static_cast<u64>(status)}};
  f.payload.insert(f.payload.end(), body.begin(), body.end());
  return f;
}

Status result_status(const Frame& f) {
  if (f.type != MsgType::result || f.payload.empty())
    throw protocol_error("expected a RESULT frame");
  return static_cast<Status>(f.payload[0]);
}

std::span<const u64> result_body(const Frame& f) {
  if (f.type != MsgType::result || f.payload.empty())
    throw protocol_error("expected a RESULT frame");
  return std::span<const u64>(f.payload).subspan(1);
}

std::vector<std::vector<u64>> parse_vector_list(std::span<const u64> body) {
  Reader r{body};
  u64 n = r.next();
  u64 len = r.next();
  std::vector<std::vector<u64>> out;
  out.reserve(n);
  for (u64 i = 0; i < n; ++i) out.push_back(r.take(len));
  return out;
}

std::vector<u64> pack_vector_list(const std::vector<std::vector<u64>>& vecs) {
  std::vector<u64> out{vecs.size(), vecs.empty() ? 0 : vecs[0].size()};
  for (const auto& v : vecs) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace prism
