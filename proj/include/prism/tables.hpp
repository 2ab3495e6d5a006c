#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prism/algebra.hpp"

namespace prism {

/// One relational row after ingestion: the flattened domain cell of the set
/// attribute(s) plus one scaled integer per aggregation attribute.
struct PlainRow {
  u64 cell = 0;
  std::vector<u64> values;
};

/// Per-owner domain table: presence bits over the enumerated domain plus the
/// per-cell aggregates every protocol draws from. Cell assignment is the
/// shared dictionary index, so all owners map a value to the same slot.
struct PresenceTable {
  std::vector<std::uint8_t> bits;             // length b
  std::vector<std::vector<u64>> payload_sum;  // per aggregate attribute
  std::vector<std::vector<u64>> payload_max;  // per aggregate attribute
  std::vector<u64> payload_count;             // tuples per cell

  std::size_t size() const { return bits.size(); }
};

PresenceTable build_presence_table(const std::vector<u64>& cells, u64 domain_size);

PresenceTable build_sum_table(const std::vector<PlainRow>& rows, u64 domain_size,
                              std::size_t num_attrs);

/// OR-aggregation tree over the presence bits. levels[0] is the leaf level
/// (the bits themselves, padded with zeros to a full tree); the last entry
/// is the single root cell.
struct BucketTree {
  u64 fanout = 0;
  std::vector<std::vector<std::uint8_t>> levels;
};

BucketTree build_bucket_tree(const std::vector<std::uint8_t>& bits, u64 fanout);

}  // namespace prism
