#include "prism/transcript.hpp"

namespace prism {

std::string msg_type_name(MsgType t) {
  switch (t) {
    case MsgType::store_shares: return "STORE_SHARES";
    case MsgType::psi_eval: return "PSI_EVAL";
    case MsgType::psu_eval: return "PSU_EVAL";
    case MsgType::vout_eval: return "VOUT_EVAL";
    case MsgType::sum_eval: return "SUM_EVAL";
    case MsgType::max_round: return "MAX_ROUND";
    case MsgType::fpos: return "FPOS";
    case MsgType::result: return "RESULT";
  }
  return "?";
}

std::size_t Transcript::owner_server_rounds() const {
  std::size_t rounds = 0;
  bool in_upload_burst = false;
  for (const auto& e : entries) {
    if (e.preload) continue;
    bool owner_to_server = e.from == Actor::owner && e.to == Actor::server;
    bool server_to_owner = e.from == Actor::server && e.to == Actor::owner;
    if (!owner_to_server && !server_to_owner) continue;  // announcer legs
    if (owner_to_server) {
      if (!in_upload_burst) {
        ++rounds;
        in_upload_burst = true;
      }
    } else {
      in_upload_burst = false;
    }
  }
  return rounds;
}

bool Transcript::has_server_server_edge() const {
  for (const auto& e : entries)
    if (e.from == Actor::server && e.to == Actor::server) return true;
  return false;
}

bool Transcript::announcer_talks_only_to_servers() const {
  for (const auto& e : entries) {
    if (e.from == Actor::announcer && e.to != Actor::server) return false;
    if (e.to == Actor::announcer && e.from != Actor::server) return false;
  }
  return true;
}

}  // namespace prism
