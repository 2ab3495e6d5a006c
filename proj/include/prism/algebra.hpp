#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace prism {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Moduli are capped at 61 bits so sums and products of residues always fit
// 128-bit intermediates without arbitrary-precision arithmetic.
inline constexpr u64 kMaxModulus = 1ull << 61;

struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct protocol_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace opcount {
// Counts mul_mod invocations on the current thread. Tests use it to check
// that oblivious evaluation does identical work per cell.
extern thread_local u64 mul_mod_calls;
}  // namespace opcount

inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;  // both < 2^61, no wrap
  return s >= m ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  ++opcount::mul_mod_calls;
  return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

// Normalizes a possibly negative value into [0, m).
inline u64 canonical(long long v, u64 m) {
  long long r = v % static_cast<long long>(m);
  if (r < 0) r += static_cast<long long>(m);
  return static_cast<u64>(r);
}

u64 mod_pow(u64 base, u64 exp, u64 modulus);

// Square-and-multiply over a fixed number of bits: the same sequence of
// group operations regardless of the exponent value, so per-cell work is
// input-independent.
u64 mod_pow_uniform(u64 base, u64 exp, u64 modulus, unsigned bits);

u64 mod_inverse(u64 a, u64 p);  // p prime

bool is_prime(u64 n);
u64 next_prime(u64 n);  // smallest prime >= n

/// Deterministic 64-bit stream (splitmix64), the randomness source for
/// share generation, permutations, and the PRG.
class SplitMix64 {
 public:
  explicit SplitMix64(u64 seed) : state_(seed) {}

  u64 next() {
    u64 z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, bound) via rejection, avoiding modulo bias.
  u64 uniform(u64 bound);

 private:
  u64 state_;
};

// Mixes a tag into a base seed; used to derive independent sub-streams.
u64 derive_seed(u64 base, u64 tag);

u64 fnv1a64(const void* data, std::size_t len);

/// Bijection on {0..n-1}, stored as map[i] = pi(i).
struct Permutation {
  std::vector<u64> map;

  std::size_t size() const { return map.size(); }

  static Permutation identity(std::size_t n);
  Permutation inverse() const;
  bool is_valid() const;

  // Gather application: out[i] = in[pi(i)].
  template <typename T>
  std::vector<T> apply(const std::vector<T>& in) const {
    if (in.size() != map.size()) throw parameter_error("permutation length mismatch");
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < map.size(); ++i) out[i] = in[map[i]];
    return out;
  }
};

Permutation gen_permutation(u64 seed, std::size_t n);

// r(i) = p(q(i)).
Permutation compose(const Permutation& p, const Permutation& q);

// `count` deterministic values in [1, delta-1]; every holder of the seed
// derives the identical sequence.
std::vector<u64> prg_sequence(u64 seed, std::size_t count, u64 delta);

// g = h^((eta-1)/delta) mod eta for seed-drawn candidates h, skipping any h
// that collapses to 1. The result has multiplicative order exactly delta.
u64 find_subgroup_generator(u64 eta, u64 delta, u64 seed);

}  // namespace prism
