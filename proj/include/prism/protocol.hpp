#pragma once

#include <span>

#include "prism/dataset.hpp"
#include "prism/query.hpp"
#include "prism/wire.hpp"

namespace prism {

// Helpers shared by the in-process driver and the networked owner agent so
// both assemble bit-identical results.
namespace protocol {

// The one owner the servers hand the first-round PSI output to in sum/avg
// queries (a seeded draw; any owner would do). 0-based.
u64 sum_selected_owner(u64 qid, u64 m);

// Per-owner share randomness for query-time columns.
u64 owner_round_seed(u64 query_seed, std::uint32_t owner_index, u64 tag);

// The columns of the full bundle a query actually ships to one server.
// Server 3 only ever receives Shamir columns; complement columns travel only
// when verification is on.
ServerShareSet column_subset(const ServerShareSet& full, const QuerySpec& spec);

// Encoded per-instance statistic for the max/median round: group max for
// max queries, per-owner group sum for medians.
u64 round2_stat(const OwnerData& data, Op op, u64 cell, std::uint32_t attr);

// Parsed announcer reply as relayed by one server.
struct AnnShareHalf {
  u64 value_share = 0;
  bool has_index = false;
  u64 index_share = 0;
};
std::vector<AnnShareHalf> parse_max_reply(std::span<const u64> body);

struct SumVectors {
  std::vector<std::vector<u64>> per_attr;
  std::vector<u64> counts;
};
SumVectors split_sum_reply(std::vector<std::vector<u64>> vectors);

// Membership plus aggregate assembly used by both drivers.
QueryResult assemble_sum_result(const QuerySpec& spec, const RoleView& owner_view,
                                const SumVectors& r1, const SumVectors& r2,
                                const SumVectors& r3);

struct MaxRoundOutcome {
  std::vector<u64> common_cells;
  std::vector<MaxOutcome> per_instance;  // cell-major, attr-minor
};
MaxRoundOutcome finalize_max_round(const QuerySpec& spec, const RoleView& owner_view,
                                   const OwnerData& own_data,
                                   const std::vector<u64>& common_cells,
                                   const std::vector<AnnShareHalf>& s1,
                                   const std::vector<AnnShareHalf>& s2);

QueryResult assemble_max_result(const QuerySpec& spec, const MaxRoundOutcome& outcome,
                                const std::vector<std::vector<std::uint8_t>>& holders_per_instance);

}  // namespace protocol

}  // namespace prism
