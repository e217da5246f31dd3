#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sparsemul {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Largest modulus accepted by PrimeField (exclusive).
inline constexpr u64 kMaxModulus = u64{1} << 62;

/// Raised when an element of sufficiently high order cannot exist in the field.
class FieldTooSmall : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Deterministic Miller-Rabin, valid for every 64-bit input.
bool is_prime_u64(u64 n);

/// Prime factorization of n >= 1 as (prime, multiplicity) pairs in increasing order.
std::vector<std::pair<u64, unsigned>> factor_u64(u64 n);

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod_u64(u64 base, u64 exp, u64 m);

/// The prime field Z/pZ for an odd prime 2 < p < 2^62.
///
/// Holds the factorization of p - 1, which is what order computations need.
/// Immutable after construction. Elements and polynomials keep a pointer to
/// their field, so a PrimeField must outlive everything built on top of it.
class PrimeField {
public:
    explicit PrimeField(u64 p);

    u64 modulus() const noexcept { return p_; }
    const std::vector<std::pair<u64, unsigned>>& order_factorization() const noexcept { return factors_; }

    /// Largest k with 2^k | p - 1.
    unsigned two_adicity() const noexcept { return two_adicity_; }

    /// A primitive 2^two_adicity()-th root of unity.
    u64 two_adic_root() const noexcept { return two_adic_root_; }

    u64 reduce(u64 x) const noexcept { return x % p_; }
    u64 reduce_signed(std::int64_t x) const noexcept;

    u64 add(u64 a, u64 b) const noexcept {
        u64 r = a + b;
        return r >= p_ ? r - p_ : r;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }
    u64 mul(u64 a, u64 b) const noexcept { return mulmod_u64(a, b, p_); }
    u64 pow(u64 a, u64 e) const noexcept { return powmod_u64(a, e, p_); }

    /// Inverse by extended Euclid; throws std::domain_error on zero.
    u64 inv(u64 a) const;

    /// Replaces every entry by its inverse with a single field inversion.
    void batch_inv(std::vector<u64>& values) const;

    friend bool operator==(const PrimeField& a, const PrimeField& b) noexcept { return a.p_ == b.p_; }

private:
    u64 p_;
    unsigned two_adicity_ = 0;
    u64 two_adic_root_ = 1;
    std::vector<std::pair<u64, unsigned>> factors_;
};

/// An element of a PrimeField, always held in canonical form [0, p).
class FieldElement {
public:
    FieldElement(const PrimeField& field, u64 residue) : field_(&field), residue_(field.reduce(residue)) {}

    static FieldElement zero(const PrimeField& field) { return {field, 0}; }
    static FieldElement one(const PrimeField& field) { return {field, 1}; }

    u64 residue() const noexcept { return residue_; }
    const PrimeField& field() const noexcept { return *field_; }
    bool is_zero() const noexcept { return residue_ == 0; }

    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o);

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    FieldElement operator-() const { return {*field_, field_->neg(residue_)}; }

    FieldElement inv() const;
    FieldElement pow(u64 e) const { return {*field_, field_->pow(residue_, e)}; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) noexcept {
        return a.residue_ == b.residue_ && *a.field_ == *b.field_;
    }

    friend std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.residue_; }

private:
    void check_same_field(const FieldElement& o) const;

    const PrimeField* field_;
    u64 residue_;
};

inline bool is_zero(const FieldElement& x) noexcept { return x.is_zero(); }

/// Exact multiplicative order of a nonzero element.
u64 element_order(const FieldElement& w);

/// The smallest primitive root of the field, provided p - 1 >= min_order.
///
/// Candidates 2, 3, 4, ... are tested with w^((p-1)/q) != 1 for every prime
/// q | p - 1. Throws FieldTooSmall when min_order > p - 1.
FieldElement find_order_element(const PrimeField& field, u64 min_order);

} // namespace sparsemul
