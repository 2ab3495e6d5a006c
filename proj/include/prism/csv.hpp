#pragma once

#include <string>
#include <vector>

#include "prism/dataset.hpp"

namespace prism {

struct ingest_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Declared domain of one set attribute: the canonically ordered value list
/// whose index is the shared cell assignment.
struct DomainDecl {
  std::string attr;
  std::vector<std::string> values;
};

struct IngestSpec {
  std::string csv_path;
  std::vector<std::string> set_attrs;  // one or more; multi-attribute sets flatten
  std::vector<std::string> agg_attrs;
  std::vector<DomainDecl> domains;  // matching set_attrs order
  std::uint32_t decimal_scale = 0;  // aggregate values are multiplied by 10^k
};

// Parses the CSV (header row required), maps set values to flattened domain
// cells, group-bys into the per-cell aggregate table. Errors carry the line
// number or the offending value.
OwnerData ingest_csv(const IngestSpec& spec, std::uint32_t owner_index);

// "lo..hi" inclusive integer range, "@file" one value per line, or a
// comma-separated list.
std::vector<std::string> parse_domain_values(const std::string& decl);

}  // namespace prism
