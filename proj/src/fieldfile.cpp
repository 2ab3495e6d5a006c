#include "prism/fieldfile.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace prism {

namespace {

void put_u64(std::vector<std::uint8_t>& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

u64 read_u64(const std::vector<std::uint8_t>& in, std::size_t& off) {
  if (off + 8 > in.size()) throw protocol_error("field file truncated");
  u64 v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<u64>(in[off + i]) << (8 * i);
  off += 8;
  return v;
}

}  // namespace

void FieldFile::set(const std::string& name, u64 value) { set(name, std::vector<u64>{value}); }

void FieldFile::set(const std::string& name, std::vector<u64> values) {
  if (!fields_.count(name)) order_.push_back(name);
  fields_[name] = std::move(values);
}

void FieldFile::set_string(const std::string& name, const std::string& value) {
  std::vector<u64> enc(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) enc[i] = static_cast<unsigned char>(value[i]);
  set(name, std::move(enc));
}

bool FieldFile::has(const std::string& name) const { return fields_.count(name) != 0; }

u64 FieldFile::get_scalar(const std::string& name) const {
  const auto& v = get_vector(name);
  if (v.size() != 1) throw protocol_error("field '" + name + "' is not a scalar");
  return v[0];
}

const std::vector<u64>& FieldFile::get_vector(const std::string& name) const {
  auto it = fields_.find(name);
  if (it == fields_.end()) throw protocol_error("missing field '" + name + "'");
  return it->second;
}

std::string FieldFile::get_string(const std::string& name) const {
  const auto& v = get_vector(name);
  std::string s;
  s.reserve(v.size());
  for (u64 c : v) s.push_back(static_cast<char>(c));
  return s;
}

std::vector<std::string> FieldFile::names() const { return order_; }

std::vector<std::uint8_t> FieldFile::encode(const std::string& magic) const {
  std::vector<std::uint8_t> out(magic.begin(), magic.end());
  put_u64(out, 1);  // format version
  for (const auto& name : order_) {
    put_u64(out, name.size());
    out.insert(out.end(), name.begin(), name.end());
    const auto& vals = fields_.at(name);
    put_u64(out, vals.size());
    for (u64 v : vals) put_u64(out, v);
  }
  u64 crc = fnv1a64(out.data(), out.size());
  const std::string tag = "crc";
  put_u64(out, tag.size());
  out.insert(out.end(), tag.begin(), tag.end());
  put_u64(out, 1);
  put_u64(out, crc);
  return out;
}

FieldFile FieldFile::decode(const std::vector<std::uint8_t>& bytes, const std::string& magic) {
  if (bytes.size() < magic.size() || std::memcmp(bytes.data(), magic.data(), magic.size()) != 0)
    throw protocol_error("bad file magic");
  std::size_t off = magic.size();
  if (read_u64(bytes, off) != 1) throw protocol_error("unsupported file version");
  FieldFile f;
  bool crc_ok = false;
  while (off < bytes.size()) {
    u64 name_len = read_u64(bytes, off);
    if (off + name_len > bytes.size()) throw protocol_error("field file truncated");
    std::string name(bytes.begin() + off, bytes.begin() + off + name_len);
    std::size_t field_start = off - 8;
    off += name_len;
    u64 count = read_u64(bytes, off);
    std::vector<u64> vals(count);
    for (auto& v : vals) v = read_u64(bytes, off);
    if (name == "crc") {
      u64 expect = fnv1a64(bytes.data(), field_start);
      if (vals.size() != 1 || vals[0] != expect) throw protocol_error("checksum mismatch");
      crc_ok = true;
      break;
    }
    f.set(name, std::move(vals));
  }
  if (!crc_ok) throw protocol_error("missing checksum");
  return f;
}

void FieldFile::save(const std::string& path, const std::string& magic) const {
  auto bytes = encode(magic);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

FieldFile FieldFile::load(const std::string& path, const std::string& magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode(bytes, magic);
}

}  // namespace prism
