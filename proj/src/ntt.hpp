#pragma once

// Number-theoretic transforms over word-size primes, with Montgomery
// multiplication in the butterflies. Private to the library.

#include <span>
#include <vector>

#include "sparsemul/prime_field.hpp"

namespace sparsemul::detail {

/// Montgomery arithmetic with R = 2^64 for an odd modulus below 2^62.
struct Montgomery {
    explicit Montgomery(u64 modulus);

    u64 mul(u64 a, u64 b) const noexcept {
        u128 t = static_cast<u128>(a) * b;
        u64 m = static_cast<u64>(t) * neg_inv;
        u64 u = static_cast<u64>((t + static_cast<u128>(m) * p) >> 64);
        return u >= p ? u - p : u;
    }
    /// a b / R in [0, 2p), for a < 4p and b < p.
    u64 mul_lazy(u64 a, u64 b) const noexcept {
        u128 t = static_cast<u128>(a) * b;
        u64 m = static_cast<u64>(t) * neg_inv;
        return static_cast<u64>((t + static_cast<u128>(m) * p) >> 64);
    }
    u64 to_mont(u64 a) const noexcept { return mul(a, r2); }

    u64 p;
    u64 neg_inv; // -p^{-1} mod 2^64
    u64 r2;      // R^2 mod p
};

/// In-place cyclic transform of length a.size() (a power of two) with the
/// given primitive root of unity of that order. Values stay in normal form.
void ntt_inplace(std::span<u64> a, const Montgomery& mont, u64 root);

/// Full product of a and b modulo the field prime via a single transform.
/// Requires 2^two_adicity >= |a| + |b| - 1.
std::vector<u64> ntt_multiply(const PrimeField& field, std::span<const u64> a, std::span<const u64> b);

/// a * b modulo u^len - 1 for a power of two len with |a|, |b| <= len.
std::vector<u64> ntt_cyclic(const PrimeField& field, std::span<const u64> a, std::span<const u64> b, std::size_t len);

/// Transform of a zero-padded to the power of two len; pairs of these feed
/// ntt_pointwise_inverse, which returns the cyclic product of the originals.
std::vector<u64> ntt_forward(const PrimeField& field, std::span<const u64> a, std::size_t len);
std::vector<u64> ntt_pointwise_inverse(const PrimeField& field, std::span<const u64> fa, std::span<const u64> fb);

/// True if the field supports a direct transform of the given output length.
bool ntt_supports(const PrimeField& field, std::size_t out_len);

/// Full product for any field by three auxiliary transform primes and
/// Garner recombination.
std::vector<u64> three_prime_multiply(const PrimeField& field, std::span<const u64> a, std::span<const u64> b);

} // namespace sparsemul::detail
