#pragma once

#include <gmpxx.h>

#include <optional>
#include <span>
#include <vector>

#include "sparsemul/sparse_mul.hpp"

namespace sparsemul {

using BigInt = mpz_class;
using Rational = mpq_class;
using IntPoly = SparsePoly<BigInt>;
using RatPoly = SparsePoly<Rational>;

/// Bit-length of |x|; 0 for x = 0.
u64 bit_length(const BigInt& x);

/// l_P, l_Q are the largest coefficient bit-lengths; every coefficient of
/// P*Q is below 2^l in absolute value.
struct CoeffBound {
    u64 l_p = 0, l_q = 0, l = 0;
};

/// l = l_P + l_Q + ceil(log2 min(s_P, s_Q)). Throws std::invalid_argument on a zero input.
CoeffBound coeff_bound(const IntPoly& p, const IntPoly& q);

/// Smallest prime strictly above n. Throws std::domain_error past 2^64.
BigInt next_prime_above(const BigInt& n);

/// Consecutive primes p_1 < ... < p_r above `order` whose product first exceeds `capacity`.
struct ReducedPrimeSequence {
    std::vector<u64> primes;
    BigInt order;
    BigInt capacity;
    BigInt product;
};

ReducedPrimeSequence reduced_prime_sequence(const BigInt& order, const BigInt& capacity);

/// Garner's algorithm for a fixed list of pairwise coprime moduli.
class CrtBasis {
public:
    explicit CrtBasis(std::vector<u64> moduli);

    std::span<const u64> moduli() const noexcept { return moduli_; }
    const BigInt& product() const noexcept { return product_; }

    /// The x in [0, M) with x = residues[k] mod moduli[k].
    BigInt combine_unsigned(std::span<const u64> residues) const;
    /// The x in (-M/2, M/2] with x = residues[k] mod moduli[k].
    BigInt combine(std::span<const u64> residues) const;

private:
    std::vector<u64> moduli_;
    std::vector<u64> inv_prefix_; // (m_0 ... m_{k-1})^{-1} mod m_k
    BigInt product_;
};

/// Symmetric-range Chinese remaindering. Throws std::invalid_argument on a
/// length mismatch or a residue not below its modulus.
BigInt crt_combine(std::span<const u64> residues, std::span<const u64> primes);
BigInt crt_combine(std::span<const u64> residues, const ReducedPrimeSequence& seq);

/// a/b with |a|, b <= sqrt(M/2) and a = b x mod M, if one exists.
std::optional<Rational> rational_reconstruct(const BigInt& x, const BigInt& m);

enum class IntegerStrategy { Auto, BigPrime, Crt };

struct IntegerMulOptions {
    IntegerStrategy strategy = IntegerStrategy::Auto;
    /// CRT primes are taken above max(d, crt_order_floor) so that a
    /// 128-bit product needs a handful of word-size primes rather than many
    /// tiny ones. Set to 0 for the plain sequence above d.
    u64 crt_order_floor = u64{1} << 61;
};

/// Which primes the last integer product used, for tests and the bench.
struct IntegerMulReport {
    IntegerStrategy path = IntegerStrategy::Auto;
    std::vector<u64> primes;
    u64 bound = 0;
    u64 box = 0;
};

/// Exact P*Q over Z. With N = 2^(l+1) and d the Kronecker box size, a single
/// prime above max(N, d) is used when one below 2^62 exists; otherwise the
/// product is run modulo a reduced prime sequence and recombined.
IntPoly integer_sparse_mul(const IntPoly& p, const IntPoly& q, const std::optional<SupportSet>& x = std::nullopt,
                           const IntegerMulOptions& opts = {}, IntegerMulReport* report = nullptr);

/// Floating-point polynomial: `precision` significant bits per coefficient
/// and `eta` extra bits kept when scaling to integers.
struct FloatPoly {
    SparsePoly<double> poly;
    int precision = 53;
    int eta = 0;
};

/// e_P: the least e with |c| < 2^e for every coefficient c; 0 for the zero polynomial.
int max_exponent(const SparsePoly<double>& p);

/// P is approximated by poly * 2^scale with poly integer.
struct ScaledPoly {
    IntPoly poly;
    long scale = 0;
};

/// Rounds P_i 2^(precision + eta - e_P) to the nearest integer, ties to even.
/// Throws std::invalid_argument on a non-finite coefficient or a precision
/// outside [1, 53].
ScaledPoly float_scale(const FloatPoly& p);

/// Scales both inputs, multiplies over Z and rounds every coefficient back
/// to min(precision) bits. Throws std::overflow_error when a result
/// coefficient does not fit in a double.
FloatPoly float_sparse_mul(const FloatPoly& p, const FloatPoly& q, const std::optional<SupportSet>& x = std::nullopt,
                           const IntegerMulOptions& opts = {});

/// The change of variables z_j -> lambda_j z_j. It commutes with products,
/// so it can be used to balance coefficient magnitudes before float_sparse_mul.
FloatPoly rescale_variables(const FloatPoly& p, std::span<const double> lambdas);

struct RationalMulOptions {
    /// Multi-modular reconstruction instead of clearing denominators.
    bool heuristic = false;
    /// Doublings of the prime count before falling back to clearing denominators.
    unsigned max_rounds = 8;
    u64 prime_floor = u64{1} << 61;
};

struct RationalMulReport {
    bool heuristic_accepted = false;
    std::size_t primes_used = 0;
};

/// Exact P*Q over Q. The default clears denominators and multiplies over Z.
/// The heuristic reconstructs from 1, 2, 4, ... primes, accepts once two
/// consecutive rounds agree and an extra prime confirms, and falls back after
/// max_rounds.
RatPoly rational_sparse_mul(const RatPoly& p, const RatPoly& q, const std::optional<SupportSet>& x = std::nullopt,
                            const RationalMulOptions& opts = {}, RationalMulReport* report = nullptr);

} // namespace sparsemul
