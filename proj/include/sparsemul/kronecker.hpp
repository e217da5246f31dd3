#pragma once

#include <vector>

#include "sparsemul/dense_poly.hpp"
#include "sparsemul/sparse_poly.hpp"

namespace sparsemul {

/// Raised when the evaluation element's order is below the Kronecker box size,
/// so distinct exponents would collide on the same evaluation point.
class OrderTooSmall : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Mixed-radix map kappa(i) = i_1 + i_2 d_1 + ... + i_n d_1...d_{n-1}, a
/// bijection from the box prod_j [0, d_j) onto [0, d).
class KroneckerMap {
public:
    /// Throws std::invalid_argument on a zero radix, std::overflow_error when
    /// d_1...d_n does not fit in 64 bits.
    explicit KroneckerMap(std::vector<u64> radices);

    std::size_t nvars() const noexcept { return radices_.size(); }
    std::span<const u64> radices() const noexcept { return radices_; }
    /// (1, d_1, d_1 d_2, ..., d_1...d_{n-1})
    std::span<const u64> cumulative() const noexcept { return cumulative_; }
    u64 total() const noexcept { return total_; }

    bool in_box(const Exponent& e) const noexcept;
    /// Throws std::out_of_range when e lies outside the box.
    u64 index(const Exponent& e) const;

    /// Smallest box containing both boxes.
    KroneckerMap joined(const KroneckerMap& other) const;

    friend bool operator==(const KroneckerMap&, const KroneckerMap&) = default;

private:
    std::vector<u64> radices_;
    std::vector<u64> cumulative_;
    u64 total_ = 1;
};

/// d_j = 1 + max_{i in X} i_j, the tightest box around X.
KroneckerMap kronecker_radices(const SupportSet& x);

inline u64 kronecker_index(const Exponent& e, const KroneckerMap& km) { return km.index(e); }

/// The points w^kappa(i) for i in Y, in the order of Y.
///
/// The powers w^cumulative[j] come from binary powering, then each point costs
/// O(bit_size(i)) products. Throws OrderTooSmall unless
/// element_order(w) >= km.total().
PointSet eval_points(const SupportSet& y, const KroneckerMap& km, const FieldElement& w);

} // namespace sparsemul
