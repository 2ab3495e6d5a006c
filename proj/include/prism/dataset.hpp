#pragma once

#include <string>
#include <vector>

#include "prism/owner.hpp"
#include "prism/params.hpp"
#include "prism/tables.hpp"

namespace prism {

/// An owner's private data: the aggregate table plus display metadata.
struct OwnerData {
  std::uint32_t owner_index = 0;  // 1-based
  PresenceTable table;
  std::vector<std::string> labels;      // domain labels, optional
  std::vector<std::string> attr_names;  // aggregate column names
};

OwnerData owner_data_from_rows(std::uint32_t owner_index, const std::vector<PlainRow>& rows,
                               u64 domain_size, std::size_t num_attrs);

/// Data plus outsourced shares: everything an owner brings to a query.
struct OwnerInputs {
  OwnerData data;
  OwnerShareBundle bundle;
};

// Builds the full share bundle (presence, permuted complement, payload and
// count columns) the way ingestion persists it.
OwnerInputs make_owner_inputs(OwnerData data, const RoleView& owner_view, u64 share_seed);

std::string data_file_name(std::uint32_t owner_index);
std::string bundle_file_name(std::uint32_t owner_index, std::uint32_t server_index);

void save_owner_data(const OwnerData& d, const std::string& path);
OwnerData load_owner_data(const std::string& path);

void save_bundle(const OwnerShareBundle& bundle,
                 const std::vector<std::string>& attr_names, const std::string& dir);
OwnerShareBundle load_bundle(std::uint32_t owner_index, const std::vector<std::string>& attr_names,
                             const std::string& dir);

// Loads data + bundle for owners 1..m from dir.
std::vector<OwnerInputs> load_owner_inputs(u64 m, const std::string& dir);

}  // namespace prism
