#pragma once

#include <memory>
#include <span>
#include <vector>

#include "sparsemul/sparse_mul.hpp"

namespace sparsemul {

/// I_d = {i in N^n : |i| < d}, enumerated by total degree and, within one
/// degree, lexicographically from the largest first part down. For n = 2,
/// d = 3: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).
class InitialSegment {
public:
    /// Throws std::invalid_argument unless n >= 1 and d >= 1, and
    /// std::length_error when |I_d| does not fit in memory.
    InitialSegment(std::size_t nvars, u64 degree);

    /// |I_d| = binomial(n + d - 1, n).
    static u64 count(std::size_t nvars, u64 degree);

    std::size_t nvars() const noexcept { return n_; }
    u64 degree() const noexcept { return d_; }
    std::size_t size() const noexcept { return exps_.size(); }
    const Exponent& operator[](std::size_t k) const noexcept { return exps_[k]; }
    std::span<const Exponent> exponents() const noexcept { return exps_; }

    bool contains(const Exponent& e) const noexcept;
    /// Position of e in the enumeration; throws std::out_of_range outside I_d.
    std::size_t rank(const Exponent& e) const;
    /// Same without the checks, for e known to lie in I_d.
    std::size_t rank_unchecked(std::span<const u64> e) const noexcept;

private:
    u64 binom(u64 a, u64 b) const noexcept { return b > a ? 0 : pascal_[a * (n_ + 1) + b]; }

    std::size_t n_;
    u64 d_;
    std::vector<u64> pascal_; // binomial(a, b) for a < n + d, b <= n
    std::vector<Exponent> exps_;
};

/// Power series in n variables truncated to total degree < d, stored densely
/// as residues indexed by position in I_d.
class TruncatedSeries {
public:
    TruncatedSeries(const PrimeField& field, std::size_t nvars, u64 degree);
    /// Throws std::invalid_argument unless |coeffs| = |I_d|; residues are reduced mod p.
    TruncatedSeries(const PrimeField& field, std::size_t nvars, u64 degree, std::vector<u64> coeffs);
    /// Throws std::invalid_argument when a term has total degree >= d.
    static TruncatedSeries from_sparse(const SparsePoly<FieldElement>& p, u64 degree);

    const PrimeField& field() const noexcept { return *field_; }
    std::size_t nvars() const noexcept { return segment_->nvars(); }
    u64 degree() const noexcept { return segment_->degree(); }
    const InitialSegment& segment() const noexcept { return *segment_; }
    std::span<const u64> coeffs() const noexcept { return coeffs_; }

    u64 coeff(const Exponent& e) const { return coeffs_[segment_->rank(e)]; }
    void set(const Exponent& e, u64 value) { coeffs_[segment_->rank(e)] = field_->reduce(value); }
    bool is_zero() const noexcept;

    SparsePoly<FieldElement> to_sparse() const;

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) noexcept {
        return *a.field_ == *b.field_ && a.nvars() == b.nvars() && a.degree() == b.degree() && a.coeffs_ == b.coeffs_;
    }

private:
    const PrimeField* field_;
    std::shared_ptr<const InitialSegment> segment_;
    std::vector<u64> coeffs_;
};

/// The image of a truncated series under z_j -> z_j z_n (j < n), cut into d
/// slices by the exponent of z_n. Slice j holds coefficients over
/// X = I_d in n - 1 variables, of which only |i| <= j can be nonzero.
struct SliceStack {
    std::size_t nvars = 0;
    u64 degree = 0;
    /// X; null when n = 1, where each slice has a single coefficient.
    std::shared_ptr<const InitialSegment> x;
    std::vector<std::vector<u64>> slices;

    std::size_t slice_size() const noexcept { return x ? x->size() : 1; }
};

/// (i_1, ..., i_n) -> (i_1, ..., i_{n-1}, i_1 + ... + i_n).
Exponent projective_exponent(const Exponent& e);

SliceStack projective_transform(const TruncatedSeries& p);

/// Throws std::invalid_argument when slice j holds a nonzero coefficient at
/// some i with |i| > j, or when the stack is malformed.
TruncatedSeries inverse_projective_transform(const SliceStack& s, const PrimeField& field);

/// (P Q) truncated to I_d. Slices of T(P) and T(Q) are evaluated at the
/// points w^kappa(i), i in X, with radices (d, ..., d); at each point the two
/// resulting polynomials in z_n are multiplied modulo z_n^d; then every
/// slice is interpolated back and T is undone.
/// Throws OrderTooSmall unless the order of w is at least d^(n-1).
TruncatedSeries series_mul(const TruncatedSeries& p, const TruncatedSeries& q, const FieldElement& w);

/// series_mul with a primitive root of the coefficient field.
TruncatedSeries series_mul(const TruncatedSeries& p, const TruncatedSeries& q);

/// All products of pairs of monomials whose degrees sum below d.
TruncatedSeries naive_series_mul(const TruncatedSeries& p, const TruncatedSeries& q);

} // namespace sparsemul
