#include "prism/oracle.hpp"

#include <algorithm>

namespace prism {

OracleResult oracle_eval(const PlainInstance& inst, const QuerySpec& spec) {
  const std::size_t m = inst.owners.size();
  std::vector<PresenceTable> tables;
  tables.reserve(m);
  for (const auto& rows : inst.owners)
    tables.push_back(build_sum_table(rows, inst.domain_size, inst.num_attrs));

  std::vector<u64> intersection, uni;
  for (u64 c = 0; c < inst.domain_size; ++c) {
    std::size_t holders = 0;
    for (const auto& t : tables) holders += t.bits[c];
    if (holders == m) intersection.push_back(c);
    if (holders > 0) uni.push_back(c);
  }

  OracleResult res;
  switch (spec.op) {
    case Op::psi:
      res.member_cells = intersection;
      break;
    case Op::psu:
      res.member_cells = uni;
      break;
    case Op::count:
      res.count = intersection.size();
      break;
    case Op::sum:
    case Op::avg:
      for (u64 c : intersection) {
        GroupAggregate g;
        g.cell = c;
        for (std::size_t a = 0; a < inst.num_attrs; ++a) {
          u64 total = 0, tuples = 0;
          for (const auto& t : tables) {
            total += t.payload_sum[a][c];
            tuples += t.payload_count[c];
          }
          g.values.push_back(total);
          g.counts.push_back(tuples);
        }
        res.aggregates.push_back(std::move(g));
      }
      break;
    case Op::max:
      for (u64 c : intersection) {
        GroupAggregate g;
        g.cell = c;
        for (std::size_t a = 0; a < inst.num_attrs; ++a) {
          u64 best = 0;
          for (const auto& t : tables) best = std::max(best, t.payload_max[a][c]);
          g.values.push_back(best);
          std::vector<u64> holders;
          for (std::size_t j = 0; j < m; ++j)
            if (tables[j].payload_max[a][c] == best) holders.push_back(j);
          g.holders.push_back(std::move(holders));
        }
        res.aggregates.push_back(std::move(g));
      }
      break;
    case Op::median:
      for (u64 c : intersection) {
        GroupAggregate g;
        g.cell = c;
        for (std::size_t a = 0; a < inst.num_attrs; ++a) {
          std::vector<u64> per_owner;
          for (const auto& t : tables) per_owner.push_back(t.payload_sum[a][c]);
          std::sort(per_owner.begin(), per_owner.end());
          // even m: the lower of the two middle values
          g.values.push_back(per_owner[(per_owner.size() - 1) / 2]);
        }
        res.aggregates.push_back(std::move(g));
      }
      break;
  }
  return res;
}

}  // namespace prism
