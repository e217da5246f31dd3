#include <bit>
#include <stdexcept>

#include "sparsemul/coeff_rings.hpp"

namespace sparsemul {

namespace {

std::vector<u64> residues_mod(const IntPoly& a, u64 p) {
    std::vector<u64> out;
    out.reserve(a.size());
    for (const auto& t : a.terms()) out.push_back(mpz_fdiv_ui(t.coeff.get_mpz_t(), p));
    return out;
}

} // namespace

CoeffBound coeff_bound(const IntPoly& p, const IntPoly& q) {
    if (p.is_zero() || q.is_zero()) throw std::invalid_argument("coeff_bound: zero polynomial");
    CoeffBound b;
    for (const auto& t : p.terms()) b.l_p = std::max(b.l_p, bit_length(t.coeff));
    for (const auto& t : q.terms()) b.l_q = std::max(b.l_q, bit_length(t.coeff));
    const u64 m = std::min(p.size(), q.size());
    b.l = b.l_p + b.l_q + static_cast<u64>(std::bit_width(m - 1));
    return b;
}

IntPoly integer_sparse_mul(const IntPoly& p, const IntPoly& q, const std::optional<SupportSet>& x,
                           const IntegerMulOptions& opts, IntegerMulReport* report) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("integer_sparse_mul: variable count mismatch");
    if (p.is_zero() || q.is_zero()) return IntPoly(p.nvars());

    SparseProductPlan plan(p.support(), q.support(), x ? *x : sumset_support(p, q));
    const u64 d = plan.kronecker().total();
    const CoeffBound bound = coeff_bound(p, q);
    const BigInt capacity = BigInt(1) << (bound.l + 1);

    std::vector<u64> primes;
    IntegerStrategy path = IntegerStrategy::Crt;
    if (opts.strategy != IntegerStrategy::Crt) {
        BigInt floor = capacity > d ? capacity : BigInt(d);
        if (floor < kMaxModulus) {
            BigInt big = next_prime_above(floor);
            if (big < kMaxModulus) {
                primes.push_back(big.get_ui());
                path = IntegerStrategy::BigPrime;
            }
        }
        if (primes.empty() && opts.strategy == IntegerStrategy::BigPrime)
            throw std::domain_error("integer_sparse_mul: no prime below 2^62 exceeds max(2^(l+1), d)");
    }
    if (primes.empty()) {
        primes = reduced_prime_sequence(std::max(d, opts.crt_order_floor), capacity).primes;
        if (primes.back() >= kMaxModulus)
            throw std::domain_error("integer_sparse_mul: Kronecker box too large for word-size primes");
    }
    if (report) *report = {path, primes, bound.l, d};

    // coeffs[k] holds the residues of the k-th coefficient of X, one per prime
    const std::size_t s = plan.x().size();
    std::vector<std::vector<u64>> coeffs(s, std::vector<u64>(primes.size()));
    for (std::size_t k = 0; k < primes.size(); ++k) {
        PrimeField f(primes[k]);
        FieldElement w = find_order_element(f, d);
        std::vector<u64> r = plan.multiply(w, residues_mod(p, primes[k]), residues_mod(q, primes[k]));
        for (std::size_t i = 0; i < s; ++i) coeffs[i][k] = r[i];
    }

    CrtBasis basis(primes);
    std::vector<Term<BigInt>> terms;
    for (std::size_t i = 0; i < s; ++i) {
        BigInt c = basis.combine(coeffs[i]);
        if (c != 0) terms.push_back({plan.x()[i], std::move(c)});
    }
    return {p.nvars(), std::move(terms)};
}

} // namespace sparsemul
