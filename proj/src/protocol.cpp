#include "prism/protocol.hpp"

namespace prism::protocol {

u64 sum_selected_owner(u64 qid, u64 m) {
  SplitMix64 rng(derive_seed(qid, 0x6f73656c));
  return rng.uniform(m);
}

u64 owner_round_seed(u64 query_seed, std::uint32_t owner_index, u64 tag) {
  return derive_seed(derive_seed(query_seed, tag), owner_index);
}

ServerShareSet column_subset(const ServerShareSet& full, const QuerySpec& spec) {
  bool aggregate =
      spec.op == Op::sum || spec.op == Op::avg || spec.op == Op::max || spec.op == Op::median;
  ServerShareSet out;
  out.presence = full.presence;
  if (spec.verify) {
    if (full.complement.empty())
      throw protocol_error("verification requested but the bundle has no complement column");
    out.complement = full.complement;
  }
  if (aggregate && (spec.op == Op::sum || spec.op == Op::avg)) {
    if (full.payload.size() < spec.num_agg_attrs || full.counts.empty())
      throw protocol_error("bundle lacks the requested aggregate columns");
    out.payload.assign(full.payload.begin(), full.payload.begin() + spec.num_agg_attrs);
    out.counts = full.counts;
  }
  return out;
}

u64 round2_stat(const OwnerData& data, Op op, u64 cell, std::uint32_t attr) {
  if (attr >= data.table.payload_sum.size())
    throw parameter_error("aggregate attribute index out of range");
  return op == Op::median ? data.table.payload_sum[attr][cell]
                          : data.table.payload_max[attr][cell];
}

std::vector<AnnShareHalf> parse_max_reply(std::span<const u64> body) {
  if (body.empty()) throw protocol_error("malformed announcer reply");
  u64 groups = body[0];
  if (body.size() != 1 + groups * 3) throw protocol_error("malformed announcer reply");
  std::vector<AnnShareHalf> out(groups);
  for (u64 i = 0; i < groups; ++i) {
    out[i].value_share = body[1 + i * 3];
    out[i].has_index = body[2 + i * 3] != 0;
    out[i].index_share = body[3 + i * 3];
  }
  return out;
}

SumVectors split_sum_reply(std::vector<std::vector<u64>> vectors) {
  if (vectors.empty()) throw protocol_error("sum reply carries no vectors");
  SumVectors out;
  out.counts = std::move(vectors.back());
  vectors.pop_back();
  out.per_attr = std::move(vectors);
  return out;
}

QueryResult assemble_sum_result(const QuerySpec& spec, const RoleView& owner_view,
                                const SumVectors& r1, const SumVectors& r2,
                                const SumVectors& r3) {
  QueryResult res;
  res.query_id = spec.query_id();
  res.op = spec.op;
  std::vector<std::vector<u64>> values;
  for (std::size_t a = 0; a < r1.per_attr.size(); ++a)
    values.push_back(sum_finalize(r1.per_attr[a], r2.per_attr[a], r3.per_attr[a], owner_view));
  std::vector<u64> counts = sum_finalize(r1.counts, r2.counts, r3.counts, owner_view);
  // a zero tuple count marks a cell outside the intersection: common cells
  // have at least one tuple per owner
  for (u64 c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    GroupAggregate g;
    g.cell = c;
    for (const auto& v : values) {
      g.values.push_back(v[c]);
      g.counts.push_back(counts[c]);
    }
    res.aggregates.push_back(std::move(g));
  }
  return res;
}

MaxRoundOutcome finalize_max_round(const QuerySpec& spec, const RoleView& owner_view,
                                   const OwnerData& own_data,
                                   const std::vector<u64>& common_cells,
                                   const std::vector<AnnShareHalf>& s1,
                                   const std::vector<AnnShareHalf>& s2) {
  const std::size_t instances = common_cells.size() * spec.num_agg_attrs;
  if (s1.size() != instances || s2.size() != instances)
    throw protocol_error("announcer reply has the wrong instance count");
  MaxRoundOutcome out;
  out.common_cells = common_cells;
  out.per_instance.reserve(instances);
  std::size_t k = 0;
  for (u64 cell : common_cells) {
    for (std::uint32_t a = 0; a < spec.num_agg_attrs; ++a, ++k) {
      std::optional<std::array<u64, 2>> index_shares;
      if (s1[k].has_index != s2[k].has_index)
        throw protocol_error("servers disagree on identity reveal");
      if (s1[k].has_index) index_shares = {{s1[k].index_share, s2[k].index_share}};
      u64 own_stat = round2_stat(own_data, spec.op, cell, a);
      out.per_instance.push_back(max_finalize({s1[k].value_share, s2[k].value_share},
                                              index_shares, own_stat, owner_view));
    }
  }
  return out;
}

QueryResult assemble_max_result(
    const QuerySpec& spec, const MaxRoundOutcome& outcome,
    const std::vector<std::vector<std::uint8_t>>& holders_per_instance) {
  QueryResult res;
  res.query_id = spec.query_id();
  res.op = spec.op;
  std::size_t k = 0;
  for (u64 cell : outcome.common_cells) {
    GroupAggregate g;
    g.cell = cell;
    for (std::uint32_t a = 0; a < spec.num_agg_attrs; ++a, ++k) {
      const MaxOutcome& inst = outcome.per_instance[k];
      g.values.push_back(inst.value);
      if (spec.op == Op::max) {
        g.announced.push_back(inst.announced_owner);
        if (!holders_per_instance.empty()) {
          std::vector<u64> holders;
          for (std::size_t j = 0; j < holders_per_instance[k].size(); ++j)
            if (holders_per_instance[k][j]) holders.push_back(j);
          g.holders.push_back(std::move(holders));
        }
      }
    }
    res.aggregates.push_back(std::move(g));
  }
  return res;
}

}  // namespace prism::protocol
