#include "prism/csv.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace prism {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

// decimal string -> integer scaled by 10^scale
u64 parse_scaled(const std::string& text, std::uint32_t scale, std::size_t line_no) {
  std::string s = trim(text);
  if (s.empty() || s == "-" || s[0] == '-')
    throw ingest_error("line " + std::to_string(line_no) +
                       ": aggregate values must be non-negative numbers, got '" + text + "'");
  auto dot = s.find('.');
  std::string whole = dot == std::string::npos ? s : s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  if (frac.size() > scale)
    throw ingest_error("line " + std::to_string(line_no) + ": value '" + text + "' has " +
                       std::to_string(frac.size()) +
                       " decimal digits; raise --scale-decimals");
  frac.resize(scale, '0');
  std::string digits = whole + frac;
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ingest_error("line " + std::to_string(line_no) + ": malformed number '" + text + "'");
  u64 value = 0;
  for (char c : digits) {
    if (value > (kMaxModulus - 10) / 10)
      throw ingest_error("line " + std::to_string(line_no) + ": value '" + text + "' overflows");
    value = value * 10 + static_cast<u64>(c - '0');
  }
  return value;
}

}  // namespace

std::vector<std::string> parse_domain_values(const std::string& decl) {
  if (!decl.empty() && decl[0] == '@') {
    std::ifstream in(decl.substr(1));
    if (!in) throw ingest_error("cannot read domain file " + decl.substr(1));
    std::vector<std::string> values;
    std::string line;
    while (std::getline(in, line)) {
      std::string v = trim(line);
      if (!v.empty()) values.push_back(v);
    }
    return values;
  }
  auto dots = decl.find("..");
  if (dots != std::string::npos) {
    long long lo = std::stoll(decl.substr(0, dots));
    long long hi = std::stoll(decl.substr(dots + 2));
    if (lo > hi) throw ingest_error("empty domain range " + decl);
    std::vector<std::string> values;
    values.reserve(hi - lo + 1);
    for (long long v = lo; v <= hi; ++v) values.push_back(std::to_string(v));
    return values;
  }
  auto values = split_line(decl);
  if (values.empty()) throw ingest_error("empty domain declaration");
  return values;
}

OwnerData ingest_csv(const IngestSpec& spec, std::uint32_t owner_index) {
  if (spec.set_attrs.empty()) throw ingest_error("no set attribute named");
  if (spec.domains.size() != spec.set_attrs.size())
    throw ingest_error("every set attribute needs a domain declaration");

  std::ifstream in(spec.csv_path);
  if (!in) throw ingest_error("cannot read " + spec.csv_path);
  std::string line;
  if (!std::getline(in, line)) throw ingest_error(spec.csv_path + ": empty file");
  auto header = split_line(line);
  auto column_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ingest_error("column '" + name + "' not in the CSV header");
  };
  std::vector<std::size_t> set_cols, agg_cols;
  for (const auto& a : spec.set_attrs) set_cols.push_back(column_of(a));
  for (const auto& a : spec.agg_attrs) agg_cols.push_back(column_of(a));

  // dictionary index per attribute, then row-major flattening
  std::vector<std::map<std::string, u64>> dicts(spec.domains.size());
  u64 domain_size = 1;
  for (std::size_t k = 0; k < spec.domains.size(); ++k) {
    for (std::size_t i = 0; i < spec.domains[k].values.size(); ++i)
      if (!dicts[k].emplace(spec.domains[k].values[i], i).second)
        throw ingest_error("duplicate domain value '" + spec.domains[k].values[i] + "'");
    domain_size *= spec.domains[k].values.size();
  }

  std::vector<PlainRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != header.size())
      throw ingest_error("line " + std::to_string(line_no) + ": expected " +
                         std::to_string(header.size()) + " fields, got " +
                         std::to_string(fields.size()));
    PlainRow row;
    u64 cell = 0;
    for (std::size_t k = 0; k < set_cols.size(); ++k) {
      const std::string& value = fields[set_cols[k]];
      auto it = dicts[k].find(value);
      if (it == dicts[k].end())
        throw ingest_error("line " + std::to_string(line_no) + ": value '" + value +
                           "' is outside the declared domain of " + spec.set_attrs[k]);
      cell = cell * spec.domains[k].values.size() + it->second;
    }
    row.cell = cell;
    for (std::size_t a : agg_cols)
      row.values.push_back(parse_scaled(fields[a], spec.decimal_scale, line_no));
    rows.push_back(std::move(row));
  }

  OwnerData data = owner_data_from_rows(owner_index, rows, domain_size, spec.agg_attrs.size());
  data.attr_names = spec.agg_attrs;
  data.labels.reserve(domain_size);
  // flattened labels follow the same row-major order as the cells
  std::vector<std::size_t> idx(spec.domains.size(), 0);
  for (u64 c = 0; c < domain_size; ++c) {
    u64 rest = c;
    std::string label;
    for (std::size_t k = spec.domains.size(); k-- > 0;) {
      idx[k] = rest % spec.domains[k].values.size();
      rest /= spec.domains[k].values.size();
    }
    for (std::size_t k = 0; k < spec.domains.size(); ++k) {
      if (k) label += "|";
      label += spec.domains[k].values[idx[k]];
    }
    data.labels.push_back(label);
  }
  return data;
}

}  // namespace prism
