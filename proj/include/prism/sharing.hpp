#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prism/algebra.hpp"

namespace prism {

/// One additive share of a secret in Z_modulus, addressed to a server.
struct AdditiveShare {
  u64 value = 0;
  u64 modulus = 0;
  std::uint32_t server_index = 0;  // 1-based
};

/// One Shamir share: a point (x, y) on a polynomial over F_p whose constant
/// term is the secret.
struct ShamirShare {
  u64 x = 0;
  u64 y = 0;
  u64 p = 0;
};

enum class ShareKind : std::uint8_t { additive, shamir };

/// A whole column of shares bound for one server.
struct ShareVector {
  ShareKind kind = ShareKind::additive;
  u64 modulus = 0;
  std::uint32_t server_index = 0;
  std::vector<u64> values;
};

std::vector<AdditiveShare> additive_share(u64 secret, u64 modulus, std::size_t count,
                                          SplitMix64& rng);

// Completes a sharing whose first count-1 values are given; used by tests to
// reproduce worked instances with pinned randomness.
std::vector<AdditiveShare> additive_share_fixed(u64 secret, u64 modulus,
                                                std::span<const u64> firsts);

u64 additive_reconstruct(std::span<const AdditiveShare> shares);

std::vector<ShamirShare> shamir_share(u64 secret, u64 p, unsigned degree, std::size_t n,
                                      SplitMix64& rng);

// Shares from an explicit coefficient vector (a_0 = secret).
std::vector<ShamirShare> shamir_share_fixed(std::span<const u64> coeffs, u64 p, std::size_t n);

// Value at `at` of the unique polynomial through the shares; at = 0 recovers
// the secret.
u64 lagrange_interpolate(std::span<const ShamirShare> shares, u64 at);

// Interpolation at 0 from y-values placed at x = 1..n, the layout every
// protocol column uses. Coefficients are precomputable, so hot loops avoid
// per-cell inverses.
std::vector<u64> lagrange_weights_at_zero(std::size_t n, u64 p);

}  // namespace prism
