#include "prism/dataset.hpp"

#include <filesystem>

#include "prism/fieldfile.hpp"

namespace prism {

namespace {
constexpr const char* kDataMagic = "PRISMDAT";
constexpr const char* kBundleMagic = "PRISMSHR";
}  // namespace

OwnerData owner_data_from_rows(std::uint32_t owner_index, const std::vector<PlainRow>& rows,
                               u64 domain_size, std::size_t num_attrs) {
  OwnerData d;
  d.owner_index = owner_index;
  d.table = build_sum_table(rows, domain_size, num_attrs);
  return d;
}

OwnerInputs make_owner_inputs(OwnerData data, const RoleView& owner_view, u64 share_seed) {
  OwnerInputs in;
  in.bundle = share_tables(data.table, owner_view, data.owner_index, /*with_verification=*/true,
                           share_seed);
  in.data = std::move(data);
  return in;
}

std::string data_file_name(std::uint32_t owner_index) {
  return "owner_" + std::to_string(owner_index) + ".data";
}

std::string bundle_file_name(std::uint32_t owner_index, std::uint32_t server_index) {
  return "owner_" + std::to_string(owner_index) + ".server" + std::to_string(server_index) +
         ".shares";
}

void save_owner_data(const OwnerData& d, const std::string& path) {
  FieldFile f;
  f.set("owner_index", d.owner_index);
  f.set("b", d.table.size());
  f.set("num_attrs", d.table.payload_sum.size());
  f.set("bits", std::vector<u64>(d.table.bits.begin(), d.table.bits.end()));
  for (std::size_t a = 0; a < d.table.payload_sum.size(); ++a) {
    f.set("sum_" + std::to_string(a), d.table.payload_sum[a]);
    f.set("max_" + std::to_string(a), d.table.payload_max[a]);
  }
  if (!d.table.payload_count.empty()) f.set("counts", d.table.payload_count);
  for (std::size_t i = 0; i < d.labels.size(); ++i)
    f.set_string("label_" + std::to_string(i), d.labels[i]);
  f.set("num_labels", d.labels.size());
  for (std::size_t i = 0; i < d.attr_names.size(); ++i)
    f.set_string("attr_" + std::to_string(i), d.attr_names[i]);
  f.save(path, kDataMagic);
}

OwnerData load_owner_data(const std::string& path) {
  FieldFile f = FieldFile::load(path, kDataMagic);
  OwnerData d;
  d.owner_index = static_cast<std::uint32_t>(f.get_scalar("owner_index"));
  const auto& bits = f.get_vector("bits");
  d.table.bits.assign(bits.begin(), bits.end());
  u64 num_attrs = f.get_scalar("num_attrs");
  for (u64 a = 0; a < num_attrs; ++a) {
    d.table.payload_sum.push_back(f.get_vector("sum_" + std::to_string(a)));
    d.table.payload_max.push_back(f.get_vector("max_" + std::to_string(a)));
  }
  if (f.has("counts")) d.table.payload_count = f.get_vector("counts");
  u64 num_labels = f.get_scalar("num_labels");
  for (u64 i = 0; i < num_labels; ++i) d.labels.push_back(f.get_string("label_" + std::to_string(i)));
  for (u64 a = 0; a < num_attrs; ++a) d.attr_names.push_back(f.get_string("attr_" + std::to_string(a)));
  return d;
}

void save_bundle(const OwnerShareBundle& bundle,
                 const std::vector<std::string>& attr_names, const std::string& dir) {
  // mirrors the outsourced table layout: the set column, its v-prefixed
  // verification twin, one column per aggregate attribute, and the count
  // column used by averages
  for (std::uint32_t s = 1; s <= 3; ++s) {
    const ServerShareSet& set = bundle.per_server[s - 1];
    FieldFile f;
    f.set("owner_index", bundle.owner_index);
    f.set("server_index", s);
    f.set("num_attrs", set.payload.size());
    if (!set.presence.empty()) f.set("OK", set.presence);
    if (!set.complement.empty()) f.set("vOK", set.complement);
    for (std::size_t a = 0; a < set.payload.size(); ++a) {
      std::string name = a < attr_names.size() ? attr_names[a] : "A" + std::to_string(a);
      f.set(name, set.payload[a]);
    }
    if (!set.counts.empty()) f.set("aOK", set.counts);
    f.save((std::filesystem::path(dir) / bundle_file_name(bundle.owner_index, s)).string(),
           kBundleMagic);
  }
}

OwnerShareBundle load_bundle(std::uint32_t owner_index, const std::vector<std::string>& attr_names,
                             const std::string& dir) {
  OwnerShareBundle bundle;
  bundle.owner_index = owner_index;
  for (std::uint32_t s = 1; s <= 3; ++s) {
    FieldFile f = FieldFile::load(
        (std::filesystem::path(dir) / bundle_file_name(owner_index, s)).string(), kBundleMagic);
    ServerShareSet& set = bundle.per_server[s - 1];
    if (f.has("OK")) set.presence = f.get_vector("OK");
    if (f.has("vOK")) set.complement = f.get_vector("vOK");
    u64 num_attrs = f.get_scalar("num_attrs");
    for (u64 a = 0; a < num_attrs; ++a) {
      std::string name = a < attr_names.size() ? attr_names[a] : "A" + std::to_string(a);
      set.payload.push_back(f.get_vector(name));
    }
    if (f.has("aOK")) set.counts = f.get_vector("aOK");
  }
  return bundle;
}

std::vector<OwnerInputs> load_owner_inputs(u64 m, const std::string& dir) {
  std::vector<OwnerInputs> inputs;
  for (u64 j = 1; j <= m; ++j) {
    OwnerInputs in;
    in.data = load_owner_data(
        (std::filesystem::path(dir) / data_file_name(static_cast<std::uint32_t>(j))).string());
    in.bundle = load_bundle(static_cast<std::uint32_t>(j), in.data.attr_names, dir);
    inputs.push_back(std::move(in));
  }
  return inputs;
}

}  // namespace prism
