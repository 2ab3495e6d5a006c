#pragma once

#include <functional>
#include <map>
#include <optional>

#include "prism/announcer.hpp"
#include "prism/server.hpp"
#include "prism/wire.hpp"

namespace prism {

/// Request/response state machine around ServerEngine. The in-process
/// simulator and the TCP server drive the same handler, so both deployments
/// run identical server code. The only outbound edge is the announcer
/// callback used by the max/median round.
class ServerNode {
 public:
  using AnnouncerSend = std::function<Frame(const Frame&)>;

  explicit ServerNode(RoleView view) : engine_(std::move(view)) {}

  ServerEngine& engine() { return engine_; }
  void set_announcer_send(AnnouncerSend fn) { announcer_send_ = std::move(fn); }

  Frame handle(const Frame& request);

 private:
  struct MaxState {
    u64 agg_kind = kAggMax;
    bool reveal = false;
    bool pushed = false;
    std::optional<std::vector<u64>> announcer_reply;  // per group: share, has_index, index
  };

  Frame handle_store(const Frame& f);
  Frame handle_eval(const Frame& f);
  Frame handle_max(const Frame& f);
  Frame handle_fpos(const Frame& f);
  Frame push_to_announcer(u64 qid, MaxState& st);

  ServerEngine engine_;
  AnnouncerSend announcer_send_;
  std::map<u64, MaxState> max_state_;
  // memoized eval outputs so every owner fetch returns identical bytes
  std::map<u64, std::vector<u64>> psi_cache_, psi_permuted_cache_, vout_cache_, psu_cache_;
  std::map<u64, std::vector<std::vector<u64>>> sum_cache_;
};

/// The announcer: combines the two servers' permuted vectors, finds the
/// max/median per group, and re-shares. Speaks only to servers.
class AnnouncerNode {
 public:
  explicit AnnouncerNode(RoleView view) : view_(std::move(view)) {}

  Frame handle(const Frame& request);

 private:
  struct PendingQuery {
    u64 agg_kind = kAggMax;
    bool reveal = false;
    u64 groups = 0;
    u64 m = 0;
    std::map<std::uint32_t, std::vector<u64>> vectors;  // by server index
    std::optional<std::vector<AnnouncerResult>> results;
  };

  RoleView view_;
  std::map<u64, PendingQuery> queries_;
};

ServerShareSet parse_store_table(const Frame& f, std::uint32_t& owner_out);

}  // namespace prism
