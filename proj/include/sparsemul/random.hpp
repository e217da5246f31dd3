#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>

#include "sparsemul/sparse_poly.hpp"

namespace sparsemul {

/// Seeded generator whose draws are identical on every platform. The standard
/// distributions are implementation-defined, so bounded draws are done here.
class Rng {
public:
    explicit Rng(u64 seed) : engine_(seed) {}

    u64 next() { return engine_(); }
    /// Uniform in [0, n); n must be positive.
    u64 below(u64 n);
    /// Uniform in [lo, hi].
    u64 between(u64 lo, u64 hi) { return lo + below(hi - lo + 1); }
    /// Uniform nonzero value of magnitude below 2^bits with a random sign.
    mpz_class signed_bits(unsigned bits);

private:
    std::mt19937_64 engine_;
};

/// Up to `count` distinct exponents in [0, max_exp]^nvars (fewer when the box is smaller).
SupportSet random_support(Rng& rng, std::size_t nvars, std::size_t count, u64 max_exp);

/// Random polynomial on a random support with nonzero coefficients.
SparsePoly<FieldElement> random_fp_poly(Rng& rng, const PrimeField& f, std::size_t nvars, std::size_t terms,
                                        u64 max_exp);
SparsePoly<mpz_class> random_int_poly(Rng& rng, std::size_t nvars, std::size_t terms, u64 max_exp,
                                      unsigned bits);
/// Coefficients a/b with a below 2^num_bits in magnitude and b in [1, max_den].
SparsePoly<mpq_class> random_rat_poly(Rng& rng, std::size_t nvars, std::size_t terms, u64 max_exp,
                                      unsigned num_bits, u64 max_den);

} // namespace sparsemul
