#pragma once

#include <vector>

#include "prism/query.hpp"
#include "prism/tables.hpp"

namespace prism {

/// Cleartext instance: every owner's rows plus the shared domain size.
/// The brute-force reference all protocol runs are checked against.
struct PlainInstance {
  u64 domain_size = 0;
  std::size_t num_attrs = 0;
  std::vector<std::vector<PlainRow>> owners;
};

struct OracleResult {
  std::vector<u64> member_cells;
  std::optional<u64> count;
  std::vector<GroupAggregate> aggregates;
};

// sum/avg aggregate every qualifying row across owners; max takes the
// maximum of per-owner group maxima (with the holder set); median takes the
// lower median of per-owner group sums.
OracleResult oracle_eval(const PlainInstance& inst, const QuerySpec& spec);

}  // namespace prism
