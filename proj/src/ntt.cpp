#include "ntt.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace sparsemul::detail {

Montgomery::Montgomery(u64 modulus) : p(modulus) {
    u64 inv = modulus; // correct to 3 bits for odd modulus
    for (int i = 0; i < 5; ++i) inv *= 2 - modulus * inv;
    neg_inv = ~inv + 1;
    u64 r = static_cast<u64>((static_cast<u128>(1) << 64) % modulus);
    r2 = mulmod_u64(r, r, modulus);
}

namespace {

// Butterflies; the level of half-length h reads tw[h .. 2h), the powers of a
// root of order 2h in Montgomery form.
void transform(std::span<u64> a, const Montgomery& mont, const u64* tw) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // Lazy reduction: entries stay below 4p < 2^64 between levels.
    const u64 p = mont.p, two_p = 2 * p;
    for (std::size_t half = 1; half < n; half <<= 1) {
        const u64* w = tw + half;
        for (std::size_t i = 0; i < n; i += 2 * half) {
            u64* lo = a.data() + i;
            u64* hi = lo + half;
            for (std::size_t j = 0; j < half; ++j) {
                u64 u = lo[j];
                u = u >= two_p ? u - two_p : u;
                const u64 v = mont.mul_lazy(hi[j], w[j]);
                lo[j] = u + v;
                hi[j] = u + two_p - v;
            }
        }
    }
    for (u64& x : a) {
        x = x >= two_p ? x - two_p : x;
        x = x >= p ? x - p : x;
    }
}

// Level tables for transforms up to length n; root_of(m) gives a root of order m.
template <class RootOf>
std::vector<u64> level_twiddles(const Montgomery& mont, std::size_t n, RootOf&& root_of) {
    std::vector<u64> tw(std::max<std::size_t>(n, 2));
    for (std::size_t half = 1; half < n; half <<= 1) {
        const u64 w = mont.to_mont(root_of(2 * half));
        tw[half] = mont.to_mont(1);
        for (std::size_t j = 1; j < half; ++j) tw[half + j] = mont.mul(tw[half + j - 1], w);
    }
    return tw;
}

} // namespace

void ntt_inplace(std::span<u64> a, const Montgomery& mont, u64 root) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    const auto tw = level_twiddles(mont, n, [&](std::size_t m) { return powmod_u64(root, n / m, mont.p); });
    transform(a, mont, tw.data());
}

namespace {

// Root of unity of order `len` (a power of two dividing 2^two_adicity).
u64 root_for_length(u64 p, u64 two_adic_root, unsigned two_adicity, std::size_t len) {
    unsigned log_len = static_cast<unsigned>(std::countr_zero(len));
    return powmod_u64(two_adic_root, u64{1} << (two_adicity - log_len), p);
}

// Montgomery constants and level twiddle tables for one modulus, grown to the
// longest transform requested so far.
struct Tables {
    Montgomery mont;
    std::size_t len = 0;
    std::vector<u64> fwd, inv;
    u64 r_mod_p = 0;
};

const Tables& tables_for(u64 p, u64 two_adic_root, unsigned two_adicity, std::size_t len) {
    thread_local std::vector<Tables> cache;
    Tables* t = nullptr;
    for (Tables& c : cache) {
        if (c.mont.p == p) t = &c;
    }
    if (t == nullptr) {
        cache.push_back({Montgomery(p), 0, {}, {}, static_cast<u64>((static_cast<u128>(1) << 64) % p)});
        t = &cache.back();
    }
    if (t->len < len) {
        const std::size_t grown = std::min(std::max<std::size_t>(len, 64), std::size_t{1} << std::min(two_adicity, 40u));
        auto root_of = [&](std::size_t m) { return root_for_length(p, two_adic_root, two_adicity, m); };
        t->fwd = level_twiddles(t->mont, grown, root_of);
        t->inv = level_twiddles(t->mont, grown, [&](std::size_t m) { return powmod_u64(root_of(m), m - 1, p); });
        t->len = grown;
    }
    return *t;
}

std::vector<u64> forward(const Tables& tab, std::span<const u64> a, std::size_t len) {
    const u64 p = tab.mont.p;
    std::vector<u64> fa(len, 0);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i] % p;
    transform(fa, tab.mont, tab.fwd.data());
    return fa;
}

std::vector<u64> pointwise_inverse(const Tables& tab, std::span<const u64> fa, std::span<const u64> fb,
                                   std::size_t out_len) {
    const Montgomery& mont = tab.mont;
    const u64 p = mont.p;
    const std::size_t len = fa.size();
    // fa * fb / R; the missing factor R is restored together with 1/len below.
    std::vector<u64> c(len);
    for (std::size_t i = 0; i < len; ++i) c[i] = mont.mul(fa[i], fb[i]);
    transform(c, mont, tab.inv.data());

    // len is a power of two below p, so 1/len = (p + 1)/2 raised to log2(len).
    const u64 half = (p + 1) / 2;
    u64 len_inv = 1;
    for (std::size_t k = 1; k < len; k <<= 1) len_inv = mulmod_u64(len_inv, half, p);
    const u64 scale_m = mont.to_mont(mulmod_u64(tab.r_mod_p, len_inv, p));
    c.resize(out_len);
    for (u64& x : c) x = mont.mul(x, scale_m);
    return c;
}

// a * b modulo u^len - 1, first out_len coefficients; |a|, |b| <= len.
std::vector<u64> convolve(u64 p, u64 two_adic_root, unsigned two_adicity, std::span<const u64> a,
                          std::span<const u64> b, std::size_t len, std::size_t out_len) {
    const Tables& tab = tables_for(p, two_adic_root, two_adicity, len);
    const std::vector<u64> fa = forward(tab, a, len);
    const std::vector<u64> fb = forward(tab, b, len);
    return pointwise_inverse(tab, fa, fb, out_len);
}

const Tables& field_tables(const PrimeField& field, std::size_t len) {
    if (!std::has_single_bit(len) || !ntt_supports(field, len)) throw std::invalid_argument("ntt: unsupported length");
    return tables_for(field.modulus(), field.two_adic_root(), field.two_adicity(), len);
}

struct AuxPrime {
    u64 p;
    u64 root;
    unsigned adicity;
};

// Three primes c * 2^40 + 1 just below 2^62, with a primitive 2^40-th root each.
const std::array<AuxPrime, 3>& aux_primes() {
    static const std::array<AuxPrime, 3> primes = [] {
        std::array<AuxPrime, 3> out{};
        const u64 candidates[3] = {4611615649683210241ULL, 4611613450659954689ULL, 4611549678985543681ULL};
        for (int i = 0; i < 3; ++i) {
            PrimeField f(candidates[i]);
            out[i] = {candidates[i], f.two_adic_root(), f.two_adicity()};
        }
        return out;
    }();
    return primes;
}

} // namespace

bool ntt_supports(const PrimeField& field, std::size_t out_len) {
    return out_len > 0 && std::countr_zero(std::bit_ceil(out_len)) <= static_cast<int>(field.two_adicity());
}

std::vector<u64> ntt_multiply(const PrimeField& field, std::span<const u64> a, std::span<const u64> b) {
    if (a.empty() || b.empty()) return {};
    if (!ntt_supports(field, a.size() + b.size() - 1)) {
        throw std::invalid_argument("ntt_multiply: transform length exceeds the two-adicity of p - 1");
    }
    const std::size_t out_len = a.size() + b.size() - 1;
    return convolve(field.modulus(), field.two_adic_root(), field.two_adicity(), a, b, std::bit_ceil(out_len), out_len);
}

std::vector<u64> ntt_cyclic(const PrimeField& field, std::span<const u64> a, std::span<const u64> b, std::size_t len) {
    if (a.size() > len || b.size() > len) throw std::invalid_argument("ntt_cyclic: operand longer than the transform");
    const Tables& tab = field_tables(field, len);
    return pointwise_inverse(tab, forward(tab, a, len), forward(tab, b, len), len);
}

std::vector<u64> ntt_forward(const PrimeField& field, std::span<const u64> a, std::size_t len) {
    if (a.size() > len) throw std::invalid_argument("ntt_forward: operand longer than the transform");
    return forward(field_tables(field, len), a, len);
}

std::vector<u64> ntt_pointwise_inverse(const PrimeField& field, std::span<const u64> fa, std::span<const u64> fb) {
    if (fa.size() != fb.size()) throw std::invalid_argument("ntt_pointwise_inverse: length mismatch");
    return pointwise_inverse(field_tables(field, fa.size()), fa, fb, fa.size());
}

std::vector<u64> three_prime_multiply(const PrimeField& field, std::span<const u64> a, std::span<const u64> b) {
    if (a.empty() || b.empty()) return {};
    const auto& aux = aux_primes();
    const std::size_t out_len = a.size() + b.size() - 1;
    if (std::countr_zero(std::bit_ceil(out_len)) > static_cast<int>(aux[0].adicity)) {
        throw std::length_error("three_prime_multiply: product too long");
    }
    std::array<std::vector<u64>, 3> r;
    for (int i = 0; i < 3; ++i) r[i] = convolve(aux[i].p, aux[i].root, aux[i].adicity, a, b, std::bit_ceil(out_len), out_len);

    const u64 m1 = aux[0].p, m2 = aux[1].p, m3 = aux[2].p;
    const u64 inv_m1_mod_m2 = powmod_u64(m1 % m2, m2 - 2, m2);
    const u64 inv_m1_mod_m3 = powmod_u64(m1 % m3, m3 - 2, m3);
    const u64 inv_m2_mod_m3 = powmod_u64(m2 % m3, m3 - 2, m3);
    const u64 p = field.modulus();
    const u64 m1_mod_p = m1 % p;
    const u64 m1m2_mod_p = mulmod_u64(m1_mod_p, m2 % p, p);

    // The exact coefficient is r1 + m1*v2 + m1*m2*v3 < m1*m2*m3, since every
    // coefficient is below out_len * p^2 < 2^164.
    std::vector<u64> out(out_len);
    for (std::size_t k = 0; k < out_len; ++k) {
        const u64 r1 = r[0][k], r2 = r[1][k], r3 = r[2][k];
        u64 v2 = mulmod_u64((r2 + m2 - r1 % m2) % m2, inv_m1_mod_m2, m2);
        u64 t = mulmod_u64((r3 + m3 - r1 % m3) % m3, inv_m1_mod_m3, m3);
        u64 v3 = mulmod_u64((t + m3 - v2 % m3) % m3, inv_m2_mod_m3, m3);
        u64 x = (r1 % p + mulmod_u64(m1_mod_p, v2 % p, p)) % p;
        out[k] = (x + mulmod_u64(m1m2_mod_p, v3 % p, p)) % p;
    }
    return out;
}

} // namespace sparsemul::detail
