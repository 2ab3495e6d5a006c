#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prism/algebra.hpp"

namespace prism {

/// Canonical binary container used by parameter and share-bundle files:
/// a magic tag, a version, then named fields. Every integer is
/// little-endian 64-bit; each field is [name_len][name][count][count x u64].
/// A trailing "crc" field holds an FNV-1a checksum of all preceding bytes.
class FieldFile {
 public:
  void set(const std::string& name, u64 value);
  void set(const std::string& name, std::vector<u64> values);
  void set_string(const std::string& name, const std::string& value);

  bool has(const std::string& name) const;
  u64 get_scalar(const std::string& name) const;
  const std::vector<u64>& get_vector(const std::string& name) const;
  std::string get_string(const std::string& name) const;
  std::vector<std::string> names() const;

  std::vector<std::uint8_t> encode(const std::string& magic) const;
  static FieldFile decode(const std::vector<std::uint8_t>& bytes, const std::string& magic);

  void save(const std::string& path, const std::string& magic) const;
  static FieldFile load(const std::string& path, const std::string& magic);

 private:
  // insertion-ordered so encoding is canonical
  std::vector<std::string> order_;
  std::map<std::string, std::vector<u64>> fields_;
};

}  // namespace prism
