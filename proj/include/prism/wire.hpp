#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prism/owner.hpp"
#include "prism/transcript.hpp"

namespace prism {

enum class Status : u64 { ok = 0, not_ready = 1, error = 2 };

/// One protocol message. On the wire: 4-byte big-endian length, 1-byte
/// message type, 8-byte little-endian query id, then the payload as
/// little-endian 64-bit integers.
struct Frame {
  MsgType type = MsgType::result;
  u64 query_id = 0;
  std::vector<u64> payload;

  u64 digest() const;
};

std::vector<std::uint8_t> encode_frame(const Frame& f);
// body = everything after the length prefix
Frame decode_frame(std::span<const std::uint8_t> body);

// Store-table and store-z sub-kinds of STORE_SHARES.
inline constexpr u64 kStoreTable = 0;
inline constexpr u64 kStoreZ = 1;

// MAX_ROUND sub-ops.
inline constexpr u64 kMaxUpload = 0;        // owner -> server
inline constexpr u64 kMaxToAnnouncer = 1;   // server -> announcer
inline constexpr u64 kMaxFetch = 2;         // owner -> server

// FPOS sub-ops.
inline constexpr u64 kFposUpload = 0;
inline constexpr u64 kFposFetch = 1;

// Aggregate kind carried through the max round.
inline constexpr u64 kAggMax = 0;
inline constexpr u64 kAggMedian = 1;

Frame make_store_table(u64 qid, std::uint32_t owner, const ServerShareSet& shares);
Frame make_store_z(u64 qid, std::uint32_t owner, const std::vector<u64>& z);
Frame make_psi_eval(u64 qid, bool permute);
Frame make_psu_eval(u64 qid);
Frame make_vout_eval(u64 qid);
Frame make_sum_eval(u64 qid);
Frame make_max_upload(u64 qid, std::uint32_t owner, u64 agg_kind, bool reveal,
                      const std::vector<u64>& per_group);
Frame make_max_fetch(u64 qid);
Frame make_fpos_upload(u64 qid, std::uint32_t owner, const std::vector<u64>& per_group);
Frame make_fpos_fetch(u64 qid);
Frame make_result(u64 qid, Status status, std::vector<u64> body = {});

Status result_status(const Frame& f);
// payload after the status word
std::span<const u64> result_body(const Frame& f);

// Splits a RESULT body of the form [n][len][vec0][vec1]... as sum_eval replies use.
std::vector<std::vector<u64>> parse_vector_list(std::span<const u64> body);
std::vector<u64> pack_vector_list(const std::vector<std::vector<u64>>& vecs);

}  // namespace prism
