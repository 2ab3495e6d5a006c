#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "prism/owner.hpp"
#include "prism/params.hpp"

namespace prism {

enum class TamperAttack : std::uint8_t { none, drop_cell, replay_cell, forge_cell, skip_all };

TamperAttack tamper_from_name(const std::string& name);

struct TamperSpec {
  TamperAttack attack = TamperAttack::none;
  u64 seed = 0;
};

/// One oblivious server. Holds only its own share columns and its role view;
/// there is no interface taking another server's state, so the
/// no-server-communication property holds by construction.
class ServerEngine {
 public:
  explicit ServerEngine(RoleView view);

  std::uint32_t index() const { return view_.server_index; }
  u64 expected_owners() const { return view_.m; }

  void set_threads(unsigned threads) { threads_ = threads; }
  void set_tamper(const TamperSpec& spec) { tamper_ = spec; }

  void store_shares(u64 qid, std::uint32_t owner_index, ServerShareSet shares);
  bool all_shares_present(u64 qid) const;

  // output[i] = g^((sum of owner shares - m_share) mod delta) mod eta',
  // the same instruction sequence for every cell.
  std::vector<u64> psi_eval(u64 qid);
  // complement columns, no m subtraction
  std::vector<u64> vout_eval(u64 qid);
  // ((sum of owner shares) * rand[i]) mod delta with the shared PRG stream
  std::vector<u64> psu_eval(u64 qid);

  std::vector<u64> count_permute(const std::vector<u64>& output) const;

  void store_z(u64 qid, std::vector<u64> z_shares);
  bool z_present(u64 qid) const;
  // per attribute (plus the count column last when present):
  // result[i] = sum over owners of payload_share[i] * z_share[i] in F_p
  std::vector<std::vector<u64>> sum_eval(u64 qid);

  // max/median round: per-owner encoded shares, one value per group
  void store_max_share(u64 qid, std::uint32_t owner_index, std::vector<u64> per_group);
  bool max_shares_present(u64 qid) const;
  // for each group, the m owner shares permuted by the shared permutation,
  // flattened group-major for the announcer
  std::vector<u64> max_collect_permute(u64 qid);

  void store_alpha_share(u64 qid, std::uint32_t owner_index, std::vector<u64> per_group);
  bool alpha_shares_present(u64 qid) const;
  // owner-order share vectors, flattened group-major; no permutation here
  std::vector<u64> fpos_assemble(u64 qid);

  void drop_query(u64 qid);

 private:
  struct QueryStore {
    std::map<std::uint32_t, ServerShareSet> owners;
    std::optional<std::vector<u64>> z;
    std::map<std::uint32_t, std::vector<u64>> max_shares;
    std::map<std::uint32_t, std::vector<u64>> alpha_shares;
  };

  const QueryStore& stored(u64 qid) const;
  std::vector<u64> exponent_eval(u64 qid, bool complement, bool subtract_m);
  void apply_tamper(std::vector<u64>& out, bool complement_pass);

  RoleView view_;
  unsigned threads_ = 1;
  TamperSpec tamper_;
  std::map<u64, QueryStore> store_;
};

}  // namespace prism
