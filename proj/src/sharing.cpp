#include "prism/sharing.hpp"

namespace prism {

std::vector<AdditiveShare> additive_share(u64 secret, u64 modulus, std::size_t count,
                                          SplitMix64& rng) {
  if (modulus < 2) throw parameter_error("additive_share: modulus must be >= 2");
  if (secret >= modulus) throw parameter_error("additive_share: secret out of range");
  if (count < 2) throw parameter_error("additive_share: need at least 2 shares");
  std::vector<AdditiveShare> shares(count);
  u64 acc = 0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    u64 v = rng.uniform(modulus);
    shares[i] = {v, modulus, static_cast<std::uint32_t>(i + 1)};
    acc = add_mod(acc, v, modulus);
  }
  shares[count - 1] = {sub_mod(secret, acc, modulus), modulus,
                       static_cast<std::uint32_t>(count)};
  return shares;
}

std::vector<AdditiveShare> additive_share_fixed(u64 secret, u64 modulus,
                                                std::span<const u64> firsts) {
  if (secret >= modulus) throw parameter_error("additive_share_fixed: secret out of range");
  std::vector<AdditiveShare> shares(firsts.size() + 1);
  u64 acc = 0;
  for (std::size_t i = 0; i < firsts.size(); ++i) {
    u64 v = firsts[i] % modulus;
    shares[i] = {v, modulus, static_cast<std::uint32_t>(i + 1)};
    acc = add_mod(acc, v, modulus);
  }
  shares.back() = {sub_mod(secret, acc, modulus), modulus,
                   static_cast<std::uint32_t>(firsts.size() + 1)};
  return shares;
}

u64 additive_reconstruct(std::span<const AdditiveShare> shares) {
  if (shares.empty()) throw parameter_error("additive_reconstruct: no shares");
  u64 modulus = shares[0].modulus;
  u64 acc = 0;
  for (const auto& s : shares) {
    if (s.modulus != modulus) throw parameter_error("additive_reconstruct: modulus mismatch");
    acc = add_mod(acc, s.value % modulus, modulus);
  }
  return acc;
}

std::vector<ShamirShare> shamir_share(u64 secret, u64 p, unsigned degree, std::size_t n,
                                      SplitMix64& rng) {
  if (n <= degree) throw parameter_error("shamir_share: need n > degree to recover the secret");
  if (secret >= p) throw parameter_error("shamir_share: secret out of range");
  std::vector<u64> coeffs(degree + 1);
  coeffs[0] = secret;
  for (unsigned i = 1; i <= degree; ++i) coeffs[i] = rng.uniform(p);
  return shamir_share_fixed(coeffs, p, n);
}

std::vector<ShamirShare> shamir_share_fixed(std::span<const u64> coeffs, u64 p, std::size_t n) {
  std::vector<ShamirShare> shares(n);
  for (std::size_t i = 0; i < n; ++i) {
    u64 x = i + 1;
    u64 y = 0;
    // Horner, highest coefficient first
    for (std::size_t k = coeffs.size(); k-- > 0;) y = add_mod(mul_mod(y, x, p), coeffs[k] % p, p);
    shares[i] = {x, y, p};
  }
  return shares;
}

u64 lagrange_interpolate(std::span<const ShamirShare> shares, u64 at) {
  if (shares.empty()) throw parameter_error("lagrange_interpolate: no shares");
  u64 p = shares[0].p;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    if (shares[i].p != p) throw parameter_error("lagrange_interpolate: field mismatch");
    for (std::size_t j = i + 1; j < shares.size(); ++j)
      if (shares[i].x == shares[j].x)
        throw parameter_error("lagrange_interpolate: duplicate evaluation point");
  }
  u64 acc = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    u64 num = 1, den = 1;
    for (std::size_t j = 0; j < shares.size(); ++j) {
      if (j == i) continue;
      num = mul_mod(num, sub_mod(at % p, shares[j].x % p, p), p);
      den = mul_mod(den, sub_mod(shares[i].x % p, shares[j].x % p, p), p);
    }
    acc = add_mod(acc, mul_mod(shares[i].y, mul_mod(num, mod_inverse(den, p), p), p), p);
  }
  return acc;
}

std::vector<u64> lagrange_weights_at_zero(std::size_t n, u64 p) {
  std::vector<u64> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    u64 xi = i + 1;
    u64 num = 1, den = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      u64 xj = j + 1;
      num = mul_mod(num, sub_mod(0, xj, p), p);
      den = mul_mod(den, sub_mod(xi, xj, p), p);
    }
    w[i] = mul_mod(num, mod_inverse(den, p), p);
  }
  return w;
}

}  // namespace prism
