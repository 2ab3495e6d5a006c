#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prism/algebra.hpp"

namespace prism {

enum class Actor : std::uint8_t { owner, server, announcer };

enum class MsgType : std::uint8_t {
  store_shares = 1,
  psi_eval = 2,
  psu_eval = 3,
  vout_eval = 4,
  sum_eval = 5,
  max_round = 6,
  fpos = 7,
  result = 8,
};

std::string msg_type_name(MsgType t);

struct TranscriptEntry {
  Actor from = Actor::owner;
  std::uint32_t from_index = 0;  // owner 1..m / server 1..3 / 0
  Actor to = Actor::owner;
  std::uint32_t to_index = 0;
  MsgType type = MsgType::result;
  u64 query_id = 0;
  u64 digest = 0;       // FNV-1a of the payload bytes
  bool preload = false;  // phase-1 data outsourcing, not query traffic
};

/// Ordered record of every message the orchestrator moved. Round counts and
/// the non-communication property are read off this record.
struct Transcript {
  std::vector<TranscriptEntry> entries;

  void add(TranscriptEntry e) { entries.push_back(std::move(e)); }

  // Number of maximal owner->server bursts among non-preload owner<->server
  // messages: one burst of uploads/requests per protocol round.
  std::size_t owner_server_rounds() const;

  bool has_server_server_edge() const;
  // true when every announcer edge has a server on the other end
  bool announcer_talks_only_to_servers() const;
};

}  // namespace prism
