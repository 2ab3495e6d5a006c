#include "prism/owner.hpp"

namespace prism {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw protocol_error(std::string(what) + ": length mismatch");
}

}  // namespace

OwnerShareBundle share_tables(const PresenceTable& table, const RoleView& view,
                              std::uint32_t owner_index, bool with_verification, u64 seed) {
  if (!view.eta) throw parameter_error("share_tables: owner view required");
  const u64 delta = view.delta;
  const u64 b = table.size();
  OwnerShareBundle bundle;
  bundle.owner_index = owner_index;
  SplitMix64 rng(derive_seed(seed, derive_seed(0x736872, owner_index)));

  auto& s1 = bundle.per_server[0];
  auto& s2 = bundle.per_server[1];
  auto& s3 = bundle.per_server[2];
  s1.presence.resize(b);
  s2.presence.resize(b);
  for (u64 i = 0; i < b; ++i) {
    u64 first = rng.uniform(delta);
    s1.presence[i] = first;
    s2.presence[i] = sub_mod(table.bits[i], first, delta);
  }

  if (with_verification) {
    if (!view.pf_db1) throw parameter_error("share_tables: view lacks pf_db1");
    std::vector<u64> complement(b);
    for (u64 i = 0; i < b; ++i) complement[i] = table.bits[i] ? 0 : 1;
    // the complement column travels permuted; servers never see cell order
    std::vector<u64> permuted = view.pf_db1->apply(complement);
    s1.complement.resize(b);
    s2.complement.resize(b);
    for (u64 i = 0; i < b; ++i) {
      u64 first = rng.uniform(delta);
      s1.complement[i] = first;
      s2.complement[i] = sub_mod(permuted[i], first, delta);
    }
  }

  if (!table.payload_sum.empty()) {
    if (!view.shamir_p) throw parameter_error("share_tables: view lacks shamir_p");
    const u64 p = *view.shamir_p;
    for (const auto& column : table.payload_sum) {
      std::vector<u64> y1(b), y2(b), y3(b);
      for (u64 i = 0; i < b; ++i) {
        u64 a1 = rng.uniform(p);  // degree 1: f(x) = value + a1*x
        u64 v = column[i] % p;
        y1[i] = add_mod(v, a1, p);
        y2[i] = add_mod(y1[i], a1, p);
        y3[i] = add_mod(y2[i], a1, p);
      }
      s1.payload.push_back(std::move(y1));
      s2.payload.push_back(std::move(y2));
      s3.payload.push_back(std::move(y3));
    }
    s1.counts.resize(b);
    s2.counts.resize(b);
    s3.counts.resize(b);
    for (u64 i = 0; i < b; ++i) {
      u64 a1 = rng.uniform(p);
      u64 v = table.payload_count[i] % p;
      s1.counts[i] = add_mod(v, a1, p);
      s2.counts[i] = add_mod(s1.counts[i], a1, p);
      s3.counts[i] = add_mod(s2.counts[i], a1, p);
    }
  }
  return bundle;
}

PsiResult psi_finalize(std::span<const u64> out1, std::span<const u64> out2,
                       const RoleView& view) {
  require_same_length(out1.size(), out2.size(), "psi_finalize");
  if (!view.eta) throw parameter_error("psi_finalize: owner view required");
  const u64 eta = *view.eta;
  PsiResult res;
  res.fop.resize(out1.size());
  res.common.resize(out1.size());
  for (std::size_t i = 0; i < out1.size(); ++i) {
    res.fop[i] = mul_mod(out1[i] % eta, out2[i] % eta, eta);
    res.common[i] = res.fop[i] == 1 ? 1 : 0;
  }
  return res;
}

std::vector<std::uint8_t> psu_finalize(std::span<const u64> out1, std::span<const u64> out2,
                                       u64 delta) {
  require_same_length(out1.size(), out2.size(), "psu_finalize");
  std::vector<std::uint8_t> present(out1.size());
  for (std::size_t i = 0; i < out1.size(); ++i)
    present[i] = add_mod(out1[i] % delta, out2[i] % delta, delta) != 0 ? 1 : 0;
  return present;
}

VerificationVerdict verify_psi(std::span<const u64> fop, std::span<const u64> vout1,
                               std::span<const u64> vout2, const RoleView& view) {
  require_same_length(fop.size(), vout1.size(), "verify_psi");
  require_same_length(fop.size(), vout2.size(), "verify_psi");
  if (!view.eta || !view.pf_db1) throw parameter_error("verify_psi: owner view required");
  const u64 eta = *view.eta;
  Permutation back = view.pf_db1->inverse();
  std::vector<u64> pv1 = back.apply(std::vector<u64>(vout1.begin(), vout1.end()));
  std::vector<u64> pv2 = back.apply(std::vector<u64>(vout2.begin(), vout2.end()));
  VerificationVerdict verdict;
  verdict.checked = true;
  verdict.passed = true;
  for (std::size_t i = 0; i < fop.size(); ++i) {
    u64 r2 = mul_mod(pv1[i] % eta, pv2[i] % eta, eta);
    if (mul_mod(fop[i] % eta, r2, eta) != 1) {
      verdict.passed = false;
      verdict.failing_cells.push_back(i);
    }
  }
  return verdict;
}

std::array<std::vector<u64>, 3> make_z_shares(const std::vector<std::uint8_t>& common,
                                              const RoleView& view, u64 seed) {
  if (!view.shamir_p) throw parameter_error("make_z_shares: owner view required");
  const u64 p = *view.shamir_p;
  SplitMix64 rng(derive_seed(seed, 0x7a736872));
  std::array<std::vector<u64>, 3> shares;
  for (auto& s : shares) s.resize(common.size());
  for (std::size_t i = 0; i < common.size(); ++i) {
    u64 a1 = rng.uniform(p);
    u64 z = common[i] ? 1 : 0;
    shares[0][i] = add_mod(z, a1, p);
    shares[1][i] = add_mod(shares[0][i], a1, p);
    shares[2][i] = add_mod(shares[1][i], a1, p);
  }
  return shares;
}

std::vector<u64> sum_finalize(std::span<const u64> r1, std::span<const u64> r2,
                              std::span<const u64> r3, const RoleView& view) {
  require_same_length(r1.size(), r2.size(), "sum_finalize");
  require_same_length(r1.size(), r3.size(), "sum_finalize");
  if (!view.shamir_p) throw parameter_error("sum_finalize: owner view required");
  const u64 p = *view.shamir_p;
  // payload*z is degree 2, so all three evaluation points participate
  std::vector<u64> w = lagrange_weights_at_zero(3, p);
  std::vector<u64> out(r1.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    u64 acc = mul_mod(r1[i], w[0], p);
    acc = add_mod(acc, mul_mod(r2[i], w[1], p), p);
    out[i] = add_mod(acc, mul_mod(r3[i], w[2], p), p);
  }
  return out;
}

MaxEncodeResult max_encode(u64 group_max, const RoleView& view, SplitMix64& rng) {
  if (!view.f_coeffs) throw parameter_error("max_encode: owner view required");
  u64 bound = max_noise_bound(*view.f_coeffs, view.m, group_max);
  u64 noise = rng.uniform(bound + 1);
  return max_encode_with_noise(group_max, noise, view, rng);
}

MaxEncodeResult max_encode_with_noise(u64 group_max, u64 noise, const RoleView& view,
                                      SplitMix64& rng) {
  if (!view.f_coeffs || !view.max_modulus)
    throw parameter_error("max_encode: owner view required");
  if (group_max < 1) throw parameter_error("max_encode: values must be positive integers");
  const u64 modulus = *view.max_modulus;
  u64 low = eval_f(*view.f_coeffs, group_max);
  u64 high = eval_f(*view.f_coeffs, group_max + 1);
  if (high >= modulus)
    throw parameter_error("max_encode: F(M+1) reaches the modulus; value exceeds domain_max");
  MaxEncodeResult res;
  res.enc = {group_max, noise, low + noise};
  if (res.enc.encoded >= high) throw parameter_error("max_encode: noise breaks ordering");
  u64 first = rng.uniform(modulus);
  res.shares = {first, sub_mod(res.enc.encoded, first, modulus)};
  return res;
}

MaxOutcome max_finalize(const std::array<u64, 2>& max_shares,
                        const std::optional<std::array<u64, 2>>& index_shares,
                        u64 own_group_max, const RoleView& view) {
  if (!view.f_coeffs || !view.max_modulus || !view.pf_shared || !view.domain_max)
    throw parameter_error("max_finalize: owner view required");
  const u64 modulus = *view.max_modulus;
  const auto& coeffs = *view.f_coeffs;
  u64 value = add_mod(max_shares[0] % modulus, max_shares[1] % modulus, modulus);

  if (value < eval_f(coeffs, 0))
    throw protocol_error("max_finalize: reconstructed value below F(0)");
  // largest z with F(z) <= value, then F(z) <= value < F(z+1) brackets it
  u64 lo = 0, hi = *view.domain_max + 1;
  if (value >= eval_f(coeffs, hi))
    throw protocol_error("max_finalize: reconstructed value beyond F(domain_max+1)");
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    if (eval_f(coeffs, mid) <= value)
      lo = mid;
    else
      hi = mid - 1;
  }
  MaxOutcome out;
  out.value = lo;
  out.holds_max = own_group_max == lo;
  if (index_shares) {
    u64 slot = add_mod((*index_shares)[0] % modulus, (*index_shares)[1] % modulus, modulus);
    if (slot >= view.pf_shared->size())
      throw protocol_error("max_finalize: announced index out of range");
    out.announced_owner = view.pf_shared->map[slot];
  }
  return out;
}

std::array<u64, 2> max_round3_flag(bool holds_max, const RoleView& view, SplitMix64& rng) {
  if (!view.max_modulus) throw parameter_error("max_round3_flag: owner view required");
  const u64 modulus = *view.max_modulus;
  u64 first = rng.uniform(modulus);
  return {first, sub_mod(holds_max ? 1 : 0, first, modulus)};
}

std::vector<std::uint8_t> fpos_combine(std::span<const u64> f1, std::span<const u64> f2,
                                       u64 max_modulus) {
  require_same_length(f1.size(), f2.size(), "fpos_combine");
  std::vector<std::uint8_t> holders(f1.size());
  for (std::size_t i = 0; i < f1.size(); ++i) {
    u64 v = add_mod(f1[i] % max_modulus, f2[i] % max_modulus, max_modulus);
    if (v > 1) throw protocol_error("fpos_combine: flag is not a bit");
    holders[i] = static_cast<std::uint8_t>(v);
  }
  return holders;
}

u64 count_finalize(std::span<const u64> pout1, std::span<const u64> pout2,
                   const RoleView& view) {
  PsiResult res = psi_finalize(pout1, pout2, view);
  u64 count = 0;
  for (auto c : res.common) count += c;
  return count;
}

}  // namespace prism
