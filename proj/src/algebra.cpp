#include "prism/algebra.hpp"

#include <array>
#include <numeric>

namespace prism {

namespace opcount {
thread_local u64 mul_mod_calls = 0;
}

u64 mod_pow(u64 base, u64 exp, u64 modulus) {
  if (modulus < 2) throw parameter_error("mod_pow: modulus must be >= 2");
  u64 result = 1 % modulus;
  base %= modulus;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, modulus);
    base = mul_mod(base, base, modulus);
    exp >>= 1;
  }
  return result;
}

u64 mod_pow_uniform(u64 base, u64 exp, u64 modulus, unsigned bits) {
  if (modulus < 2) throw parameter_error("mod_pow_uniform: modulus must be >= 2");
  u64 result = 1 % modulus;
  base %= modulus;
  for (unsigned k = 0; k < bits; ++k) {
    u64 with_bit = mul_mod(result, base, modulus);
    // branch-free select keeps the multiply unconditional
    u64 mask = 0 - ((exp >> k) & 1);
    result = (with_bit & mask) | (result & ~mask);
    base = mul_mod(base, base, modulus);
  }
  return result;
}

u64 mod_inverse(u64 a, u64 p) {
  if (a % p == 0) throw parameter_error("mod_inverse of zero");
  return mod_pow(a % p, p - 2, p);
}

namespace {

bool miller_rabin(u64 n, u64 a) {
  if (a % n == 0) return true;
  u64 d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  u64 x = 1, base = a % n;
  // plain square-and-multiply with u128 products; n may exceed 61 bits here
  u64 e = d;
  while (e > 0) {
    if (e & 1) x = static_cast<u64>((static_cast<u128>(x) * base) % n);
    base = static_cast<u64>((static_cast<u128>(base) * base) % n);
    e >>= 1;
  }
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = static_cast<u64>((static_cast<u128>(x) * x) % n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  // deterministic witness set for all 64-bit integers
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!miller_rabin(n, a)) return false;
  }
  return true;
}

u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  u64 c = n | 1;
  while (!is_prime(c)) c += 2;
  return c;
}

u64 SplitMix64::uniform(u64 bound) {
  if (bound == 0) throw parameter_error("uniform: empty range");
  u64 threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    u64 v = next();
    if (v >= threshold) return v % bound;
  }
}

u64 derive_seed(u64 base, u64 tag) {
  SplitMix64 s(base ^ (tag * 0x9e3779b97f4a7c15ull));
  return s.next();
}

u64 fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  u64 h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.map.resize(n);
  std::iota(p.map.begin(), p.map.end(), 0);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.map.assign(map.size(), 0);
  for (std::size_t i = 0; i < map.size(); ++i) inv.map[map[i]] = i;
  return inv;
}

bool Permutation::is_valid() const {
  std::vector<bool> seen(map.size(), false);
  for (u64 v : map) {
    if (v >= map.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation gen_permutation(u64 seed, std::size_t n) {
  if (n == 0) throw parameter_error("gen_permutation: n must be >= 1");
  Permutation p = Permutation::identity(n);
  SplitMix64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = rng.uniform(i + 1);
    std::swap(p.map[i], p.map[j]);
  }
  return p;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw parameter_error("compose: length mismatch");
  Permutation r;
  r.map.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r.map[i] = p.map[q.map[i]];
  return r;
}

std::vector<u64> prg_sequence(u64 seed, std::size_t count, u64 delta) {
  if (count < 1) throw parameter_error("prg_sequence: count must be >= 1");
  if (delta < 3) throw parameter_error("prg_sequence: delta must be >= 3");
  SplitMix64 rng(seed);
  std::vector<u64> out(count);
  for (auto& v : out) v = 1 + rng.uniform(delta - 1);
  return out;
}

u64 find_subgroup_generator(u64 eta, u64 delta, u64 seed) {
  if (delta < 2 || eta < 3 || (eta - 1) % delta != 0)
    throw parameter_error("find_subgroup_generator: delta must divide eta-1");
  SplitMix64 rng(seed);
  u64 cofactor = (eta - 1) / delta;
  for (;;) {
    u64 h = 2 + rng.uniform(eta - 2);
    u64 g = mod_pow(h, cofactor, eta);
    if (g != 1) return g;
  }
}

}  // namespace prism
