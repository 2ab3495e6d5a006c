#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "prism/params.hpp"

namespace prism {

/// Re-shared findings for one group: additive shares of the winning encoded
/// value, plus shares of its permuted slot when identity reveal is on.
struct AnnouncerResult {
  std::array<u64, 2> max_shares{};
  std::optional<std::array<u64, 2>> index_shares;
};

// foutput[i] = (out1[i] + out2[i]) mod max_modulus; picks the maximum (first
// slot on ties) and re-shares it, with the argmax slot when requested.
AnnouncerResult combine_and_findmax(std::span<const u64> out1, std::span<const u64> out2,
                                    u64 max_modulus, bool reveal_identity, SplitMix64& rng);

// Sorts the combined encodings; odd counts take the middle value, even
// counts the lower of the two middle values.
AnnouncerResult median_select(std::span<const u64> out1, std::span<const u64> out2,
                              u64 max_modulus, SplitMix64& rng);

}  // namespace prism
