#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sparsemul/kronecker.hpp"

namespace sparsemul {

/// Precomputation for products P * Q with supports fixed ahead of time.
///
/// The box is the tightest one around X, supp P and supp Q together, so the
/// evaluation of P and Q is defined even when X alone would not cover their
/// partial degrees. Only the supports are stored; a plan can be run over
/// several primes, which is how the integer multiplication uses it.
class SparseProductPlan {
public:
    /// Throws std::invalid_argument when X is empty or variable counts differ.
    SparseProductPlan(SupportSet p_support, SupportSet q_support, SupportSet x);

    const SupportSet& p_support() const noexcept { return p_; }
    const SupportSet& q_support() const noexcept { return q_; }
    const SupportSet& x() const noexcept { return x_; }
    const KroneckerMap& kronecker() const noexcept { return km_; }

    /// Coefficients of P * Q over the field of w, aligned with x(). The inputs
    /// are residues aligned with p_support() and q_support().
    /// Throws OrderTooSmall when the order of w is below kronecker().total().
    std::vector<u64> multiply(const FieldElement& w, std::span<const u64> p_coeffs,
                              std::span<const u64> q_coeffs) const;

private:
    SupportSet p_, q_, x_;
    KroneckerMap km_;
};

/// The evaluation map: E(A)_k = sum_i A_i w^(k kappa(i)) for k < s, that is
/// the Kronecker image of A evaluated at 1, w, ..., w^(s-1).
std::vector<u64> evaluation_vector(const SparsePoly<FieldElement>& a, const KroneckerMap& km,
                                   const FieldElement& w, std::size_t s);

struct SparseMulOptions {
    /// Recompute with naive_mul when s_P * s_Q <= debug_limit and throw
    /// std::logic_error on disagreement, which is how an X that misses part of
    /// supp(P*Q) shows up.
    bool debug_check = false;
    std::size_t debug_limit = 100000;
};

/// P * Q by evaluation at the powers of w and transposed interpolation.
///
/// X must contain supp(P*Q); a smaller X silently aliases coefficients, which
/// only the debug check can catch. w must have order at least the size of
/// the Kronecker box around X, supp P and supp Q.
SparsePoly<FieldElement> sparse_mul_given_support(const SparsePoly<FieldElement>& p,
                                                  const SparsePoly<FieldElement>& q, const SupportSet& x,
                                                  const FieldElement& w, const SparseMulOptions& opts = {});

/// Same, with w a primitive root of the coefficient field. Without X the
/// sumset of the supports is used, at a cost of s_P * s_Q exponent additions.
SparsePoly<FieldElement> sparse_mul(const SparsePoly<FieldElement>& p, const SparsePoly<FieldElement>& q,
                                    const std::optional<SupportSet>& x = std::nullopt,
                                    const SparseMulOptions& opts = {});

} // namespace sparsemul
