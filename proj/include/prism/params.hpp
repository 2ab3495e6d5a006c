#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prism/algebra.hpp"

namespace prism {

/// Group moduli for one deployment: additive group Z_delta, cyclic subgroup
/// of order delta generated by g mod eta, and the composite eta' = alpha*eta
/// handed to servers in place of eta.
struct GroupParams {
  u64 delta = 0;
  u64 eta = 0;
  u64 eta_prime = 0;
  u64 g = 0;
};

// Throws parameter_error unless delta/eta are prime, delta > m,
// delta | eta-1, g has order exactly delta, and eta' is a proper multiple.
void validate_group(const GroupParams& gp, u64 m);

enum class Role : std::uint8_t { owner = 0, server1 = 1, server2 = 2, server3 = 3, announcer = 4 };

std::string role_name(Role r);
Role role_from_name(const std::string& name);

/// Everything the initiator generates. Individual roles only ever see the
/// projection produced by view_for().
struct PublicParams {
  GroupParams group;
  u64 m = 0;           // number of owners
  u64 b = 0;           // domain size
  u64 domain_max = 0;  // largest aggregate value the max/median encoding accepts
  std::vector<u64> f_coeffs;  // a_0..a_{m+1}, all positive: strictly increasing F
  Permutation pf_i, pf_s1, pf_s2, pf_db1, pf_db2;  // over b
  Permutation pf_shared;                           // over m, for max/median
  u64 prg_seed = 0;
  u64 shamir_p = 0;
  u64 max_modulus = 0;
  std::array<u64, 2> m_shares{};  // additive shares of m mod delta, servers 1 and 2
  u64 seed = 0;
};

/// The per-role projection of PublicParams. Absent fields are information
/// the role must not hold.
struct RoleView {
  Role role = Role::owner;
  std::uint32_t server_index = 0;  // 1..3 for servers, else 0
  u64 m = 0;
  u64 b = 0;
  u64 delta = 0;
  std::optional<u64> eta;
  std::optional<u64> eta_prime;
  std::optional<u64> g;
  std::optional<u64> prg_seed;
  std::optional<u64> shamir_p;
  std::optional<u64> max_modulus;
  std::optional<u64> domain_max;
  std::optional<u64> m_share;  // this server's additive share of m
  std::optional<std::vector<u64>> f_coeffs;
  std::optional<Permutation> pf_db1, pf_db2, pf_s1, pf_s2, pf_shared;
};

PublicParams generate_params(u64 m, u64 b, u64 domain_max, u64 seed);
void validate_params(const PublicParams& p);

RoleView view_for(const PublicParams& p, Role role);

// F(x) with 128-bit accumulation; throws parameter_error when the value
// leaves the 61-bit residue range.
u64 eval_f(const std::vector<u64>& coeffs, u64 x);

// Largest admissible noise for the order-preserving encoding of M:
// min(M^m, F(M+1) - F(M) - 1), so F(M) + r < F(M+1) always holds.
u64 max_noise_bound(const std::vector<u64>& coeffs, u64 m, u64 M);

std::string params_file_name(Role r);
void save_view(const RoleView& v, const std::string& path);
RoleView load_view(const std::string& path);

// Writes one parameter file per role under dir.
void write_param_files(const PublicParams& p, const std::string& dir);

/// All five role views together, as the orchestrator holds them.
struct ParamsSet {
  RoleView owner_view;
  std::array<RoleView, 3> server_views;
  RoleView announcer_view;
};

ParamsSet views_from(const PublicParams& p);
ParamsSet load_param_files(const std::string& dir);

}  // namespace prism
