#pragma once

#include "prism/oracle.hpp"
#include "prism/params.hpp"
#include "prism/sim.hpp"

namespace prism::testsupport {

// The worked three-hospital deployment: delta=5, eta=11, eta'=143, g=3,
// trivial permutations, F(x)=x^4+x^3+x^2+x+1, modulus 5003.
inline PublicParams golden_params() {
  PublicParams p;
  p.group = {5, 11, 143, 3};
  p.m = 3;
  p.b = 3;
  p.domain_max = 8;
  p.f_coeffs = {1, 1, 1, 1, 1};
  p.pf_i = Permutation::identity(3);
  p.pf_s1 = Permutation::identity(3);
  p.pf_s2 = Permutation::identity(3);
  p.pf_db1 = Permutation::identity(3);
  p.pf_db2 = Permutation::identity(3);
  p.pf_shared = Permutation::identity(3);
  p.prg_seed = 12345;
  p.shamir_p = (1ull << 61) - 1;
  p.max_modulus = 5003;
  p.m_shares = {1, 2};  // 3 = (1+2) mod 5
  p.seed = 0;
  validate_params(p);
  return p;
}

// The three hospital tables over domain (Cancer, Fever, Heart), with
// aggregate attributes (age, cost) in that order.
inline PlainInstance hospitals() {
  PlainInstance inst;
  inst.domain_size = 3;
  inst.num_attrs = 2;
  inst.owners = {
      {{0, {4, 100}}, {0, {6, 200}}, {2, {2, 300}}},   // hospital 1
      {{0, {8, 100}}, {1, {5, 70}}, {1, {4, 50}}},     // hospital 2
      {{0, {8, 300}}, {0, {4, 700}}, {2, {5, 500}}},   // hospital 3
  };
  return inst;
}

inline std::vector<OwnerInputs> owner_inputs_from(const PlainInstance& inst,
                                                  const RoleView& owner_view, u64 seed) {
  std::vector<OwnerInputs> inputs;
  for (std::size_t j = 0; j < inst.owners.size(); ++j) {
    OwnerData data = owner_data_from_rows(static_cast<std::uint32_t>(j + 1), inst.owners[j],
                                          inst.domain_size, inst.num_attrs);
    inputs.push_back(make_owner_inputs(std::move(data), owner_view, derive_seed(seed, j + 1)));
  }
  return inputs;
}

// Random instance with a biased overlap so intersections are usually
// non-empty; payload values stay in [1, payload_max].
inline PlainInstance random_instance(u64 seed, u64 m, u64 b, std::size_t num_attrs,
                                     u64 payload_max, u64 max_rows_per_cell = 2) {
  SplitMix64 rng(seed);
  PlainInstance inst;
  inst.domain_size = b;
  inst.num_attrs = num_attrs;
  inst.owners.resize(m);
  for (u64 j = 0; j < m; ++j) {
    for (u64 c = 0; c < b; ++c) {
      // ~60% fill, plus cell 0 present everywhere so PSI is non-trivial
      bool present = c == 0 || rng.uniform(100) < 60;
      if (!present) continue;
      u64 rows = 1 + rng.uniform(max_rows_per_cell);
      for (u64 r = 0; r < rows; ++r) {
        PlainRow row;
        row.cell = c;
        for (std::size_t a = 0; a < num_attrs; ++a)
          row.values.push_back(1 + rng.uniform(payload_max));
        inst.owners[j].push_back(std::move(row));
      }
    }
  }
  return inst;
}

// Largest per-owner per-cell aggregate the instance produces, the bound the
// order-preserving encoding must cover.
inline u64 instance_domain_max(const PlainInstance& inst) {
  u64 best = 1;
  for (const auto& rows : inst.owners) {
    PresenceTable t = build_sum_table(rows, inst.domain_size, inst.num_attrs);
    for (const auto& col : t.payload_sum)
      for (u64 v : col) best = std::max(best, v);
  }
  return best;
}

}  // namespace prism::testsupport
