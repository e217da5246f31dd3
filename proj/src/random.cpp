#include "sparsemul/random.hpp"

#include <set>

namespace sparsemul {

u64 Rng::below(u64 n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    // Rejection from the largest multiple of n keeps the draw unbiased.
    const u64 limit = ~u64{0} - (~u64{0} % n + 1) % n;
    u64 x;
    do x = engine_();
    while (x > limit);
    return x % n;
}

mpz_class Rng::signed_bits(unsigned bits) {
    mpz_class x;
    do {
        x = 0;
        for (unsigned done = 0; done < bits; done += 64) {
            unsigned take = std::min(64u, bits - done);
            u64 word = engine_();
            if (take < 64) word &= (u64{1} << take) - 1;
            mpz_class w;
            mpz_import(w.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &word);
            x = (x << take) + w;
        }
    } while (x == 0);
    return (engine_() & 1) ? mpz_class(-x) : x;
}

SupportSet random_support(Rng& rng, std::size_t nvars, std::size_t count, u64 max_exp) {
    long double box = 1;
    for (std::size_t j = 0; j < nvars; ++j) box *= static_cast<long double>(max_exp) + 1;
    if (box < static_cast<long double>(count)) count = static_cast<std::size_t>(box);
    std::set<Exponent> seen;
    while (seen.size() < count) {
        Exponent e(nvars);
        for (std::size_t j = 0; j < nvars; ++j) e[j] = rng.below(max_exp + 1);
        seen.insert(std::move(e));
    }
    return {nvars, std::vector<Exponent>(seen.begin(), seen.end())};
}

SparsePoly<FieldElement> random_fp_poly(Rng& rng, const PrimeField& f, std::size_t nvars, std::size_t terms,
                                        u64 max_exp) {
    std::vector<Term<FieldElement>> out;
    for (const Exponent& e : random_support(rng, nvars, terms, max_exp))
        out.push_back({e, FieldElement(f, rng.between(1, f.modulus() - 1))});
    return {nvars, std::move(out)};
}

SparsePoly<mpz_class> random_int_poly(Rng& rng, std::size_t nvars, std::size_t terms, u64 max_exp,
                                      unsigned bits) {
    std::vector<Term<mpz_class>> out;
    for (const Exponent& e : random_support(rng, nvars, terms, max_exp)) out.push_back({e, rng.signed_bits(bits)});
    return {nvars, std::move(out)};
}

SparsePoly<mpq_class> random_rat_poly(Rng& rng, std::size_t nvars, std::size_t terms, u64 max_exp,
                                      unsigned num_bits, u64 max_den) {
    std::vector<Term<mpq_class>> out;
    for (const Exponent& e : random_support(rng, nvars, terms, max_exp)) {
        mpq_class c(rng.signed_bits(num_bits), mpz_class(rng.between(1, max_den)));
        c.canonicalize();
        out.push_back({e, c});
    }
    return {nvars, std::move(out)};
}

} // namespace sparsemul
