#include <stdexcept>

#include "sparsemul/coeff_rings.hpp"

namespace sparsemul {

namespace {

BigInt from_u64(u64 x) {
    BigInt out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &x);
    return out;
}

u64 to_u64(const BigInt& x) {
    u64 out = 0;
    mpz_export(&out, nullptr, 1, sizeof(u64), 0, 0, x.get_mpz_t());
    return out;
}

u64 inv_mod(u64 a, u64 m) {
    // extended Euclid on signed 128-bit values
    __int128 r0 = m, r1 = a % m, t0 = 0, t1 = 1;
    while (r1 != 0) {
        __int128 q = r0 / r1;
        std::swap(r0, r1);
        r1 -= q * r0;
        std::swap(t0, t1);
        t1 -= q * t0;
    }
    if (r0 != 1) throw std::invalid_argument("CRT moduli must be pairwise coprime");
    if (t0 < 0) t0 += m;
    return static_cast<u64>(t0);
}

} // namespace

u64 bit_length(const BigInt& x) { return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2); }

BigInt next_prime_above(const BigInt& n) {
    static const BigInt two64 = BigInt(1) << 64;
    if (n < 2) return 2;
    BigInt c = n + 1;
    if (c >= two64) throw std::domain_error("next_prime_above: beyond the 64-bit range");
    for (u64 k = to_u64(c);; ++k) {
        if (is_prime_u64(k)) return from_u64(k);
        if (k == ~u64{0}) throw std::domain_error("next_prime_above: beyond the 64-bit range");
    }
}

ReducedPrimeSequence reduced_prime_sequence(const BigInt& order, const BigInt& capacity) {
    if (order < 1 || capacity < 1) throw std::invalid_argument("reduced_prime_sequence: order and capacity must be positive");
    ReducedPrimeSequence seq{{}, order, capacity, 1};
    BigInt p = order;
    while (seq.product <= capacity) {
        p = next_prime_above(p);
        seq.primes.push_back(to_u64(p));
        seq.product *= p;
    }
    return seq;
}

CrtBasis::CrtBasis(std::vector<u64> moduli) : moduli_(std::move(moduli)), product_(1) {
    if (moduli_.empty()) throw std::invalid_argument("CrtBasis: no moduli");
    inv_prefix_.resize(moduli_.size(), 0);
    for (std::size_t k = 0; k < moduli_.size(); ++k) {
        const u64 m = moduli_[k];
        if (m < 2) throw std::invalid_argument("CrtBasis: modulus below 2");
        u64 prefix = 1 % m;
        for (std::size_t j = 0; j < k; ++j) prefix = mulmod_u64(prefix, moduli_[j] % m, m);
        inv_prefix_[k] = k == 0 ? 0 : inv_mod(prefix, m);
        product_ *= from_u64(m);
    }
}

BigInt CrtBasis::combine_unsigned(std::span<const u64> residues) const {
    if (residues.size() != moduli_.size()) throw std::invalid_argument("crt_combine: residue count mismatch");
    // Mixed-radix digits v_k with x = v_0 + v_1 m_0 + v_2 m_0 m_1 + ...
    std::vector<u64> v(moduli_.size());
    for (std::size_t k = 0; k < moduli_.size(); ++k) {
        const u64 m = moduli_[k];
        if (residues[k] >= m) throw std::invalid_argument("crt_combine: residue not below its modulus");
        // x mod m from the digits found so far, by Horner from the top
        u64 acc = 0;
        for (std::size_t j = k; j-- > 0;) acc = (mulmod_u64(acc, moduli_[j] % m, m) + v[j] % m) % m;
        u64 diff = residues[k] >= acc ? residues[k] - acc : residues[k] + (m - acc);
        v[k] = k == 0 ? residues[0] : mulmod_u64(diff, inv_prefix_[k], m);
    }
    BigInt x = 0;
    for (std::size_t j = moduli_.size(); j-- > 0;) x = x * from_u64(moduli_[j]) + from_u64(v[j]);
    return x;
}

BigInt CrtBasis::combine(std::span<const u64> residues) const {
    BigInt x = combine_unsigned(residues);
    if (2 * x > product_) x -= product_;
    return x;
}

BigInt crt_combine(std::span<const u64> residues, std::span<const u64> primes) {
    return CrtBasis(std::vector<u64>(primes.begin(), primes.end())).combine(residues);
}

BigInt crt_combine(std::span<const u64> residues, const ReducedPrimeSequence& seq) {
    return crt_combine(residues, seq.primes);
}

std::optional<Rational> rational_reconstruct(const BigInt& x, const BigInt& m) {
    BigInt bound;
    BigInt half = (m - 1) / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    BigInt r0 = m, r1 = x % m, t0 = 0, t1 = 1;
    if (r1 < 0) r1 += m;
    while (r1 > bound) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        BigInt t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    BigInt g = gcd(r1, t1);
    if (g != 1) return std::nullopt;
    Rational out(sgn(t1) < 0 ? BigInt(-r1) : r1, abs(t1));
    out.canonicalize();
    return out;
}

} // namespace sparsemul
