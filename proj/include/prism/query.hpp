#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prism/algebra.hpp"

namespace prism {

enum class Op : std::uint8_t { psi, psu, count, sum, avg, max, median };

std::string op_name(Op op);
Op op_from_name(const std::string& name);

/// What to run and how. Aggregates (sum/avg/max/median) act on the groups in
/// the intersection of the set attribute.
struct QuerySpec {
  Op op = Op::psi;
  std::uint32_t num_agg_attrs = 0;  // nonzero only for sum/avg/max/median
  bool verify = false;              // PSI result verification
  bool reveal_max_identity = false;
  std::optional<u64> bucket_fanout;
  std::uint32_t decimal_scale = 0;
  u64 seed = 0;

  u64 query_id() const;
  void validate() const;
  // owner<->server rounds the protocol schedule uses for this spec
  std::size_t expected_rounds() const;
};

struct VerificationVerdict {
  bool checked = false;
  bool passed = false;
  std::vector<u64> failing_cells;
};

/// Per-group aggregate output. `holders` only carries data for max with
/// identity reveal; `announced holder` is the single owner the announcer
/// points at.
struct GroupAggregate {
  u64 cell = 0;
  std::vector<u64> values;  // one per aggregate attribute
  std::vector<u64> counts;  // avg only: tuple counts per attribute divisor
  std::vector<std::vector<u64>> holders;        // max only, per attribute owner indices
  std::vector<std::optional<u64>> announced;    // max with identity, per attribute
};

struct QueryResult {
  u64 query_id = 0;
  Op op = Op::psi;
  std::size_t rounds = 0;
  std::vector<u64> member_cells;  // psi / psu membership
  std::optional<u64> count;
  std::vector<GroupAggregate> aggregates;
  VerificationVerdict verification;
  // bucketized runs: cells evaluated per level, top level first
  std::vector<u64> level_transmissions;

  // wall-clock, never part of the canonical JSON
  double elapsed_seconds = 0;
};

// Canonical JSON rendering. Deterministic: identical results serialize to
// identical bytes. Timings are appended only when include_timings is set.
std::string result_to_json(const QueryResult& r, const std::vector<std::string>& labels,
                           bool include_timings);

}  // namespace prism
