#include "prism/server.hpp"

#include <bit>

#include "prism/parallel.hpp"

namespace prism {

TamperAttack tamper_from_name(const std::string& name) {
  if (name == "none") return TamperAttack::none;
  if (name == "drop_cell") return TamperAttack::drop_cell;
  if (name == "replay_cell") return TamperAttack::replay_cell;
  if (name == "forge_cell") return TamperAttack::forge_cell;
  if (name == "skip_all") return TamperAttack::skip_all;
  throw parameter_error("unknown tamper attack '" + name + "'");
}

ServerEngine::ServerEngine(RoleView view) : view_(std::move(view)) {
  if (view_.server_index < 1 || view_.server_index > 3)
    throw parameter_error("ServerEngine needs a server role view");
}

void ServerEngine::store_shares(u64 qid, std::uint32_t owner_index, ServerShareSet shares) {
  store_[qid].owners[owner_index] = std::move(shares);
}

bool ServerEngine::all_shares_present(u64 qid) const {
  auto it = store_.find(qid);
  return it != store_.end() && it->second.owners.size() == view_.m;
}

const ServerEngine::QueryStore& ServerEngine::stored(u64 qid) const {
  auto it = store_.find(qid);
  if (it == store_.end() || it->second.owners.size() != view_.m)
    throw protocol_error("server is missing owner shares for this query");
  return it->second;
}

std::vector<u64> ServerEngine::exponent_eval(u64 qid, bool complement, bool subtract_m) {
  if (!view_.g || !view_.eta_prime)
    throw parameter_error("server view lacks group parameters");
  const auto& q = stored(qid);
  const u64 delta = view_.delta;
  const u64 g = *view_.g;
  const u64 eta_prime = *view_.eta_prime;
  u64 m_share = 0;
  if (subtract_m) {
    if (!view_.m_share) throw parameter_error("server has no additive share of m");
    m_share = *view_.m_share % delta;
  }

  std::vector<const std::vector<u64>*> cols;
  cols.reserve(q.owners.size());
  std::size_t b = 0;
  for (const auto& [owner, shares] : q.owners) {
    const auto& col = complement ? shares.complement : shares.presence;
    if (cols.empty())
      b = col.size();
    else if (col.size() != b)
      throw protocol_error("owner share vectors differ in length");
    cols.push_back(&col);
  }
  if (b == 0 && complement) throw protocol_error("no verification columns stored");

  // fixed exponent width keeps per-cell work independent of the data
  const unsigned bits = std::bit_width(delta - 1);
  std::vector<u64> out(b);
  parallel_for(b, kEvalChunk, threads_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      u64 e = 0;
      for (const auto* col : cols) e = add_mod(e, (*col)[i], delta);
      e = sub_mod(e, m_share, delta);
      out[i] = mod_pow_uniform(g, e, eta_prime, bits);
    }
  });
  apply_tamper(out, complement);
  return out;
}

std::vector<u64> ServerEngine::psi_eval(u64 qid) { return exponent_eval(qid, false, true); }

std::vector<u64> ServerEngine::vout_eval(u64 qid) { return exponent_eval(qid, true, false); }

std::vector<u64> ServerEngine::psu_eval(u64 qid) {
  if (!view_.prg_seed) throw parameter_error("server view lacks the PRG seed");
  const auto& q = stored(qid);
  const u64 delta = view_.delta;
  std::vector<const std::vector<u64>*> cols;
  std::size_t b = 0;
  for (const auto& [owner, shares] : q.owners) {
    if (cols.empty())
      b = shares.presence.size();
    else if (shares.presence.size() != b)
      throw protocol_error("owner share vectors differ in length");
    cols.push_back(&shares.presence);
  }
  std::vector<u64> rand = prg_sequence(*view_.prg_seed, b, delta);
  std::vector<u64> out(b);
  parallel_for(b, kEvalChunk, threads_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      u64 s = 0;
      for (const auto* col : cols) s = add_mod(s, (*col)[i], delta);
      out[i] = mul_mod(s, rand[i], delta);
    }
  });
  return out;
}

std::vector<u64> ServerEngine::count_permute(const std::vector<u64>& output) const {
  if (!view_.pf_s1) throw parameter_error("server view lacks pf_s1");
  return view_.pf_s1->apply(output);
}

void ServerEngine::store_z(u64 qid, std::vector<u64> z_shares) {
  store_[qid].z = std::move(z_shares);
}

bool ServerEngine::z_present(u64 qid) const {
  auto it = store_.find(qid);
  return it != store_.end() && it->second.z.has_value();
}

std::vector<std::vector<u64>> ServerEngine::sum_eval(u64 qid) {
  if (!view_.shamir_p) throw parameter_error("server view lacks the Shamir field");
  const auto& q = stored(qid);
  if (!q.z) throw protocol_error("no z shares stored for this query");
  const u64 p = *view_.shamir_p;
  const auto& z = *q.z;

  std::size_t num_attrs = q.owners.begin()->second.payload.size();
  bool with_counts = !q.owners.begin()->second.counts.empty();
  for (const auto& [owner, shares] : q.owners) {
    if (shares.payload.size() != num_attrs || (!shares.counts.empty()) != with_counts)
      throw protocol_error("owners disagree on payload columns");
  }

  std::vector<std::vector<u64>> results;
  auto accumulate = [&](auto column_of) {
    std::vector<const std::vector<u64>*> cols;
    for (const auto& [owner, shares] : q.owners) {
      const std::vector<u64>& col = column_of(shares);
      if (col.size() != z.size()) throw protocol_error("payload column length mismatch");
      cols.push_back(&col);
    }
    std::vector<u64> res(z.size());
    parallel_for(z.size(), kEvalChunk, threads_, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        u64 acc = 0;
        for (const auto* col : cols) acc = add_mod(acc, mul_mod((*col)[i], z[i], p), p);
        res[i] = acc;
      }
    });
    results.push_back(std::move(res));
  };
  for (std::size_t a = 0; a < num_attrs; ++a)
    accumulate([a](const ServerShareSet& s) -> const std::vector<u64>& { return s.payload[a]; });
  if (with_counts)
    accumulate([](const ServerShareSet& s) -> const std::vector<u64>& { return s.counts; });
  return results;
}

void ServerEngine::store_max_share(u64 qid, std::uint32_t owner_index,
                                   std::vector<u64> per_group) {
  store_[qid].max_shares[owner_index] = std::move(per_group);
}

bool ServerEngine::max_shares_present(u64 qid) const {
  auto it = store_.find(qid);
  return it != store_.end() && it->second.max_shares.size() == view_.m;
}

std::vector<u64> ServerEngine::max_collect_permute(u64 qid) {
  if (!view_.pf_shared) throw parameter_error("server view lacks the shared permutation");
  auto it = store_.find(qid);
  if (it == store_.end() || it->second.max_shares.size() != view_.m)
    throw protocol_error("missing owner shares for the max round");
  const auto& by_owner = it->second.max_shares;
  std::size_t groups = by_owner.begin()->second.size();
  std::vector<u64> flat;
  flat.reserve(groups * view_.m);
  for (std::size_t grp = 0; grp < groups; ++grp) {
    std::vector<u64> in_owner_order;
    in_owner_order.reserve(view_.m);
    for (const auto& [owner, vals] : by_owner) {
      if (vals.size() != groups) throw protocol_error("owners disagree on group count");
      in_owner_order.push_back(vals[grp]);
    }
    std::vector<u64> permuted = view_.pf_shared->apply(in_owner_order);
    flat.insert(flat.end(), permuted.begin(), permuted.end());
  }
  return flat;
}

void ServerEngine::store_alpha_share(u64 qid, std::uint32_t owner_index,
                                     std::vector<u64> per_group) {
  store_[qid].alpha_shares[owner_index] = std::move(per_group);
}

bool ServerEngine::alpha_shares_present(u64 qid) const {
  auto it = store_.find(qid);
  return it != store_.end() && it->second.alpha_shares.size() == view_.m;
}

std::vector<u64> ServerEngine::fpos_assemble(u64 qid) {
  auto it = store_.find(qid);
  if (it == store_.end() || it->second.alpha_shares.size() != view_.m)
    throw protocol_error("missing owner flags for the holder round");
  const auto& by_owner = it->second.alpha_shares;
  std::size_t groups = by_owner.begin()->second.size();
  std::vector<u64> flat;
  flat.reserve(groups * view_.m);
  for (std::size_t grp = 0; grp < groups; ++grp)
    for (const auto& [owner, vals] : by_owner) {
      if (vals.size() != groups) throw protocol_error("owners disagree on group count");
      flat.push_back(vals[grp]);
    }
  return flat;
}

void ServerEngine::drop_query(u64 qid) { store_.erase(qid); }

void ServerEngine::apply_tamper(std::vector<u64>& out, bool complement_pass) {
  if (tamper_.attack == TamperAttack::none || out.empty()) return;
  // two independent sub-streams so the presence pass and the complement pass
  // mutate independently chosen cells
  SplitMix64 rng(derive_seed(tamper_.seed, complement_pass ? 2 : 1));
  const u64 b = out.size();
  switch (tamper_.attack) {
    case TamperAttack::none:
      return;
    case TamperAttack::drop_cell: {
      // same physical row skipped in both passes
      SplitMix64 shared(derive_seed(tamper_.seed, 3));
      out[shared.uniform(b)] = 1;
      return;
    }
    case TamperAttack::replay_cell: {
      u64 dst = rng.uniform(b);
      u64 src = b == 1 ? dst : (dst + 1 + rng.uniform(b - 1)) % b;
      out[dst] = out[src];
      return;
    }
    case TamperAttack::forge_cell: {
      if (!view_.g || !view_.eta_prime) return;
      u64 cell = rng.uniform(b);
      out[cell] = mod_pow(*view_.g, rng.uniform(view_.delta), *view_.eta_prime);
      return;
    }
    case TamperAttack::skip_all: {
      for (auto& v : out) v = out[0];
      return;
    }
  }
}

}  // namespace prism
