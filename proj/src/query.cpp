#include "prism/query.hpp"

#include <json.hpp>

namespace prism {

std::string op_name(Op op) {
  switch (op) {
    case Op::psi: return "psi";
    case Op::psu: return "psu";
    case Op::count: return "count";
    case Op::sum: return "sum";
    case Op::avg: return "avg";
    case Op::max: return "max";
    case Op::median: return "median";
  }
  throw parameter_error("unknown op");
}

Op op_from_name(const std::string& name) {
  for (Op op : {Op::psi, Op::psu, Op::count, Op::sum, Op::avg, Op::max, Op::median})
    if (op_name(op) == name) return op;
  throw parameter_error("unknown op '" + name + "'");
}

u64 QuerySpec::query_id() const {
  u64 h = derive_seed(seed, 0x71696400 + static_cast<u64>(op));
  h = derive_seed(h, num_agg_attrs);
  h = derive_seed(h, (verify ? 1 : 0) | (reveal_max_identity ? 2 : 0));
  if (bucket_fanout) h = derive_seed(h, *bucket_fanout);
  return h;
}

void QuerySpec::validate() const {
  bool aggregate = op == Op::sum || op == Op::avg || op == Op::max || op == Op::median;
  if (aggregate && num_agg_attrs == 0)
    throw parameter_error("aggregation query needs at least one aggregate attribute");
  if (!aggregate && num_agg_attrs != 0)
    throw parameter_error("set-only query cannot name aggregate attributes");
  if (verify && op != Op::psi) throw parameter_error("verification is defined for psi only");
  if (reveal_max_identity && op != Op::max)
    throw parameter_error("identity reveal is a max-query option");
  if (bucket_fanout) {
    if (*bucket_fanout < 2) throw parameter_error("bucket fanout must be >= 2");
    if (op == Op::psu || op == Op::count)
      throw parameter_error("bucketization applies to psi and psi-prefixed aggregates");
  }
}

std::size_t QuerySpec::expected_rounds() const {
  switch (op) {
    case Op::psi:
    case Op::psu:
    case Op::count:
      return 1;
    case Op::sum:
    case Op::avg:
      return 2;
    case Op::max:
      return reveal_max_identity ? 3 : 2;
    case Op::median:
      return 2;
  }
  return 0;
}

std::string result_to_json(const QueryResult& r, const std::vector<std::string>& labels,
                           bool include_timings) {
  using json = nlohmann::ordered_json;
  auto label = [&](u64 cell) -> std::string {
    if (cell < labels.size()) return labels[cell];
    return std::to_string(cell);
  };

  json j;
  j["query_id"] = r.query_id;
  j["op"] = op_name(r.op);
  j["rounds"] = r.rounds;

  if (r.op == Op::psi || r.op == Op::psu) {
    json groups = json::array();
    for (u64 c : r.member_cells) groups.push_back(label(c));
    j["groups"] = groups;
  }
  if (r.count) j["count"] = *r.count;
  if (!r.aggregates.empty() || r.op == Op::sum || r.op == Op::avg || r.op == Op::max ||
      r.op == Op::median) {
    json rows = json::array();
    for (const auto& g : r.aggregates) {
      json row;
      row["group"] = label(g.cell);
      if (r.op == Op::avg) {
        json vals = json::array();
        for (std::size_t a = 0; a < g.values.size(); ++a) {
          json v;
          v["sum"] = g.values[a];
          v["count"] = g.counts[a];
          v["avg"] = static_cast<double>(g.values[a]) / static_cast<double>(g.counts[a]);
          vals.push_back(v);
        }
        row["values"] = vals;
      } else {
        row["values"] = g.values;
      }
      if (r.op == Op::max) {
        if (!g.announced.empty() && g.announced[0]) {
          json ann = json::array();
          for (const auto& a : g.announced) ann.push_back(a ? json(*a + 1) : json(nullptr));
          row["announced_holder"] = ann;
        }
        if (!g.holders.empty()) {
          json hs = json::array();
          for (const auto& attr_holders : g.holders) {
            json h = json::array();
            for (u64 o : attr_holders) h.push_back(o + 1);  // 1-based owners
            hs.push_back(h);
          }
          row["holders"] = hs;
        }
      }
      rows.push_back(row);
    }
    j["aggregates"] = rows;
  }
  if (r.verification.checked) {
    json v;
    v["passed"] = r.verification.passed;
    v["failing_cells"] = r.verification.failing_cells;
    j["verification"] = v;
  }
  if (!r.level_transmissions.empty()) {
    j["level_transmissions"] = r.level_transmissions;
    u64 total = 0;
    for (u64 t : r.level_transmissions) total += t;
    j["actual_domain_size"] = total;
  }
  if (include_timings) j["elapsed_seconds"] = r.elapsed_seconds;
  return j.dump(2) + "\n";
}

}  // namespace prism
