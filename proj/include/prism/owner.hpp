#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "prism/params.hpp"
#include "prism/query.hpp"
#include "prism/sharing.hpp"
#include "prism/tables.hpp"

namespace prism {

/// What one server receives from one owner at outsourcing time. Presence and
/// complement columns are additive shares (servers 1 and 2 only); payload and
/// count columns are Shamir y-values at x = server index (all three).
struct ServerShareSet {
  std::vector<u64> presence;
  std::vector<u64> complement;
  std::vector<std::vector<u64>> payload;
  std::vector<u64> counts;
};

struct OwnerShareBundle {
  std::uint32_t owner_index = 0;  // 1-based
  std::array<ServerShareSet, 3> per_server;
};

struct PsiResult {
  std::vector<u64> fop;
  std::vector<std::uint8_t> common;  // common[i] = 1 iff fop[i] = 1
};

/// Order-preserving encoding of a group maximum: encoded = F(M) + noise with
/// F(M) <= encoded < F(M+1).
struct MaxEncoding {
  u64 group_max = 0;
  u64 noise = 0;
  u64 encoded = 0;
};

struct MaxEncodeResult {
  MaxEncoding enc;
  std::array<u64, 2> shares;  // additive mod max_modulus
};

struct MaxOutcome {
  u64 value = 0;  // z with F(z) <= reconstructed < F(z+1)
  bool holds_max = false;
  std::optional<u64> announced_owner;  // 0-based owner slot, identity reveal only
};

// Additive shares of the presence bits (and permuted complement bits when
// verification is on) for servers 1-2, Shamir shares of payload columns for
// servers 1-3. Deterministic for a fixed seed.
OwnerShareBundle share_tables(const PresenceTable& table, const RoleView& view,
                              std::uint32_t owner_index, bool with_verification, u64 seed);

PsiResult psi_finalize(std::span<const u64> out1, std::span<const u64> out2,
                       const RoleView& view);

std::vector<std::uint8_t> psu_finalize(std::span<const u64> out1, std::span<const u64> out2,
                                       u64 delta);

// Permutes the complement outputs back and checks fop * pvout1 * pvout2 = 1
// per cell. Failing cells are the tamper alarm.
VerificationVerdict verify_psi(std::span<const u64> fop, std::span<const u64> vout1,
                               std::span<const u64> vout2, const RoleView& view);

// z[i] = 1 for common cells else 0, Shamir-shared to the three servers.
std::array<std::vector<u64>, 3> make_z_shares(const std::vector<std::uint8_t>& common,
                                              const RoleView& view, u64 seed);

// Degree-2 interpolation of the three per-server result vectors.
std::vector<u64> sum_finalize(std::span<const u64> r1, std::span<const u64> r2,
                              std::span<const u64> r3, const RoleView& view);

MaxEncodeResult max_encode(u64 group_max, const RoleView& view, SplitMix64& rng);
// Pinned-noise variant for replaying worked instances.
MaxEncodeResult max_encode_with_noise(u64 group_max, u64 noise, const RoleView& view,
                                      SplitMix64& rng);

// Reconstructs the announced encoding, binary-searches z with
// F(z) <= value < F(z+1), and undoes the shared permutation on the index.
MaxOutcome max_finalize(const std::array<u64, 2>& max_shares,
                        const std::optional<std::array<u64, 2>>& index_shares,
                        u64 own_group_max, const RoleView& view);

std::array<u64, 2> max_round3_flag(bool holds_max, const RoleView& view, SplitMix64& rng);

std::vector<std::uint8_t> fpos_combine(std::span<const u64> f1, std::span<const u64> f2,
                                       u64 max_modulus);

u64 count_finalize(std::span<const u64> pout1, std::span<const u64> pout2,
                   const RoleView& view);

}  // namespace prism
