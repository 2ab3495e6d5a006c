#include "prism/tables.hpp"

#include <algorithm>

namespace prism {

PresenceTable build_presence_table(const std::vector<u64>& cells, u64 domain_size) {
  PresenceTable t;
  t.bits.assign(domain_size, 0);
  for (u64 c : cells) {
    if (c >= domain_size)
      throw parameter_error("value maps outside the declared domain (cell " +
                            std::to_string(c) + ")");
    t.bits[c] = 1;  // duplicates collapse: the table covers distinct values
  }
  return t;
}

PresenceTable build_sum_table(const std::vector<PlainRow>& rows, u64 domain_size,
                              std::size_t num_attrs) {
  PresenceTable t;
  t.bits.assign(domain_size, 0);
  t.payload_sum.assign(num_attrs, std::vector<u64>(domain_size, 0));
  t.payload_max.assign(num_attrs, std::vector<u64>(domain_size, 0));
  t.payload_count.assign(domain_size, 0);
  for (const auto& row : rows) {
    if (row.cell >= domain_size)
      throw parameter_error("value maps outside the declared domain (cell " +
                            std::to_string(row.cell) + ")");
    if (row.values.size() != num_attrs)
      throw parameter_error("row has wrong number of aggregate values");
    t.bits[row.cell] = 1;
    t.payload_count[row.cell] += 1;
    for (std::size_t a = 0; a < num_attrs; ++a) {
      t.payload_sum[a][row.cell] += row.values[a];
      t.payload_max[a][row.cell] = std::max(t.payload_max[a][row.cell], row.values[a]);
    }
  }
  return t;
}

BucketTree build_bucket_tree(const std::vector<std::uint8_t>& bits, u64 fanout) {
  if (fanout < 2) throw parameter_error("bucket tree fanout must be >= 2");
  BucketTree tree;
  tree.fanout = fanout;

  u64 width = 1;
  while (width < bits.size()) width *= fanout;
  std::vector<std::uint8_t> level(bits);
  level.resize(width, 0);
  tree.levels.push_back(level);
  while (tree.levels.back().size() > 1) {
    const auto& child = tree.levels.back();
    std::vector<std::uint8_t> parent((child.size() + fanout - 1) / fanout, 0);
    for (std::size_t i = 0; i < child.size(); ++i)
      if (child[i]) parent[i / fanout] = 1;
    tree.levels.push_back(std::move(parent));
  }
  return tree;
}

}  // namespace prism
