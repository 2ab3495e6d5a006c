#include "prism/announcer.hpp"

#include <algorithm>

namespace prism {

namespace {

std::vector<u64> combine(std::span<const u64> out1, std::span<const u64> out2, u64 modulus) {
  if (out1.size() != out2.size() || out1.empty())
    throw protocol_error("announcer: server vectors disagree in length");
  std::vector<u64> f(out1.size());
  for (std::size_t i = 0; i < out1.size(); ++i)
    f[i] = add_mod(out1[i] % modulus, out2[i] % modulus, modulus);
  return f;
}

std::array<u64, 2> reshare(u64 value, u64 modulus, SplitMix64& rng) {
  u64 first = rng.uniform(modulus);
  return {first, sub_mod(value, first, modulus)};
}

}  // namespace

AnnouncerResult combine_and_findmax(std::span<const u64> out1, std::span<const u64> out2,
                                    u64 max_modulus, bool reveal_identity, SplitMix64& rng) {
  std::vector<u64> foutput = combine(out1, out2, max_modulus);
  std::size_t index = 0;
  for (std::size_t i = 1; i < foutput.size(); ++i)
    if (foutput[i] > foutput[index]) index = i;
  AnnouncerResult res;
  res.max_shares = reshare(foutput[index], max_modulus, rng);
  if (reveal_identity) res.index_shares = reshare(index, max_modulus, rng);
  return res;
}

AnnouncerResult median_select(std::span<const u64> out1, std::span<const u64> out2,
                              u64 max_modulus, SplitMix64& rng) {
  std::vector<u64> foutput = combine(out1, out2, max_modulus);
  std::sort(foutput.begin(), foutput.end());
  u64 median = foutput[(foutput.size() - 1) / 2];
  AnnouncerResult res;
  res.max_shares = reshare(median, max_modulus, rng);
  return res;
}

}  // namespace prism
