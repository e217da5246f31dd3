#include <stdexcept>

#include "sparsemul/coeff_rings.hpp"

namespace sparsemul {

namespace {

BigInt common_denominator(const RatPoly& a) {
    BigInt l = 1;
    for (const auto& t : a.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
    return l;
}

IntPoly clear_denominators(const RatPoly& a, const BigInt& den) {
    std::vector<Term<BigInt>> terms;
    for (const auto& t : a.terms()) terms.push_back({t.exponent, BigInt(t.coeff.get_num() * (den / t.coeff.get_den()))});
    return {a.nvars(), std::move(terms)};
}

RatPoly clearing_path(const RatPoly& p, const RatPoly& q, const SupportSet& x) {
    const BigInt dp = common_denominator(p), dq = common_denominator(q);
    const IntPoly r = integer_sparse_mul(clear_denominators(p, dp), clear_denominators(q, dq), x);
    const BigInt den = dp * dq;
    std::vector<Term<Rational>> terms;
    for (const auto& t : r.terms()) {
        Rational c(t.coeff, den);
        c.canonicalize();
        terms.push_back({t.exponent, std::move(c)});
    }
    return {p.nvars(), std::move(terms)};
}

/// a/b mod p, or nullopt when p divides b.
std::optional<u64> reduce(const Rational& c, const PrimeField& f) {
    const u64 den = mpz_fdiv_ui(c.get_den_mpz_t(), f.modulus());
    if (den == 0) return std::nullopt;
    return f.mul(mpz_fdiv_ui(c.get_num_mpz_t(), f.modulus()), f.inv(den));
}

std::optional<std::vector<u64>> reduce_all(std::span<const Term<Rational>> terms, const PrimeField& f) {
    std::vector<u64> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
        auto r = reduce(t.coeff, f);
        if (!r) return std::nullopt;
        out.push_back(*r);
    }
    return out;
}

} // namespace

RatPoly rational_sparse_mul(const RatPoly& p, const RatPoly& q, const std::optional<SupportSet>& x,
                            const RationalMulOptions& opts, RationalMulReport* report) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("rational_sparse_mul: variable count mismatch");
    if (report) *report = {};
    if (p.is_zero() || q.is_zero()) return RatPoly(p.nvars());
    const SupportSet xs = x ? *x : sumset_support(p, q);
    if (!opts.heuristic) return clearing_path(p, q, xs);

    SparseProductPlan plan(p.support(), q.support(), xs);
    const u64 d = plan.kronecker().total();
    BigInt candidate = std::max(d, opts.prime_floor);

    // Next prime that divides no input denominator, with the product modulo it.
    auto next_product = [&](u64& prime) -> std::vector<u64> {
        while (true) {
            candidate = next_prime_above(candidate);
            if (candidate >= kMaxModulus) throw std::domain_error("rational_sparse_mul: ran out of word-size primes");
            prime = candidate.get_ui();
            PrimeField f(prime);
            auto rp = reduce_all(p.terms(), f), rq = reduce_all(q.terms(), f);
            if (!rp || !rq) continue;
            return plan.multiply(find_order_element(f, d), *rp, *rq);
        }
    };

    const std::size_t s = xs.size();
    std::vector<u64> primes;
    std::vector<std::vector<u64>> products;
    std::optional<std::vector<Rational>> previous;
    std::size_t target = 1;
    for (unsigned round = 0; round < opts.max_rounds; ++round, target *= 2) {
        while (primes.size() < target) {
            u64 prime;
            products.push_back(next_product(prime));
            primes.push_back(prime);
        }
        CrtBasis basis(primes);
        std::optional<std::vector<Rational>> current(std::in_place);
        std::vector<u64> column(primes.size());
        for (std::size_t i = 0; i < s && current; ++i) {
            for (std::size_t k = 0; k < primes.size(); ++k) column[k] = products[k][i];
            auto c = rational_reconstruct(basis.combine_unsigned(column), basis.product());
            if (c) current->push_back(std::move(*c));
            else current.reset();
        }

        if (current && previous && *current == *previous) {
            // one more prime that divides neither the inputs' nor the candidate's denominators
            while (true) {
                u64 prime;
                std::vector<u64> check = next_product(prime);
                PrimeField f(prime);
                bool usable = true, agrees = true;
                for (std::size_t i = 0; i < s && usable; ++i) {
                    auto r = reduce((*current)[i], f);
                    if (!r) usable = false;
                    else if (*r != check[i]) agrees = false;
                }
                if (!usable) continue;
                primes.push_back(prime);
                products.push_back(std::move(check));
                if (agrees) {
                    std::vector<Term<Rational>> terms;
                    for (std::size_t i = 0; i < s; ++i)
                        if ((*current)[i] != 0) terms.push_back({xs[i], (*current)[i]});
                    if (report) *report = {true, primes.size()};
                    return {p.nvars(), std::move(terms)};
                }
                break;
            }
        }
        previous = std::move(current);
    }
    if (report) *report = {false, primes.size()};
    return clearing_path(p, q, xs);
}

} // namespace sparsemul
