#include <doctest.h>

#include <cmath>

#include "sparsemul/coeff_rings.hpp"
#include "sparsemul/random.hpp"

using namespace sparsemul;

namespace {

IntPoly int_poly(std::size_t n, std::vector<std::pair<Exponent, BigInt>> terms) {
    std::vector<Term<BigInt>> t;
    for (auto& [e, c] : terms) t.push_back({e, c});
    return {n, std::move(t)};
}

RatPoly rat_poly(std::size_t n, std::vector<std::pair<Exponent, Rational>> terms) {
    std::vector<Term<Rational>> t;
    for (auto& [e, c] : terms) t.push_back({e, c});
    return {n, std::move(t)};
}

FloatPoly float_poly(std::size_t n, std::vector<std::pair<Exponent, double>> terms, int precision, int eta) {
    std::vector<Term<double>> t;
    for (auto& [e, c] : terms) t.push_back({e, c});
    return {SparsePoly<double>(n, std::move(t)), precision, eta};
}

Rational pow2(long k) {
    Rational r(BigInt(1) << static_cast<unsigned long>(std::labs(k)));
    return k >= 0 ? r : Rational(1) / r;
}

u64 residue(long x, u64 p) { return static_cast<u64>(((x % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p)); }

} // namespace

TEST_CASE("coeff_bound") {
    auto p = int_poly(1, {{{0}, 5}, {{1}, -2}});
    auto q = int_poly(1, {{{0}, 3}, {{2}, 1}});
    CoeffBound b = coeff_bound(p, q);
    CHECK(b.l_p == 3);
    CHECK(b.l_q == 2);
    CHECK(b.l == 6);
    CHECK(coeff_bound(int_poly(1, {{{0}, 5}}), int_poly(1, {{{0}, 3}})).l == 5);
    CHECK(coeff_bound(int_poly(1, {{{0}, 1}}), int_poly(1, {{{3}, 1}})).l == 2);
    CHECK_THROWS_AS(coeff_bound(IntPoly(1), q), std::invalid_argument);

    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = rng.between(1, 3);
        auto a = random_int_poly(rng, n, rng.between(1, 40), 4, static_cast<unsigned>(rng.between(1, 90)));
        auto c = random_int_poly(rng, n, rng.between(1, 40), 4, static_cast<unsigned>(rng.between(1, 90)));
        const u64 l = coeff_bound(a, c).l;
        auto r = naive_mul(a, c);
        for (const auto& t : r.terms()) CHECK(bit_length(t.coeff) <= l);
    }
}

TEST_CASE("next_prime_above and reduced prime sequences") {
    CHECK(next_prime_above(100) == 101);
    CHECK(next_prime_above(2) == 3);
    CHECK(next_prime_above(1) == 2);
    CHECK(next_prime_above(BigInt(1) << 31) == 2147483659UL);
    CHECK(next_prime_above(BigInt("18446744073709551556")) == BigInt("18446744073709551557"));
    CHECK_THROWS_AS(next_prime_above(BigInt("18446744073709551557")), std::domain_error);

    CHECK(reduced_prime_sequence(10, 100).primes == std::vector<u64>{11, 13});
    CHECK(reduced_prime_sequence(10, 5).primes == std::vector<u64>{11});
    CHECK(reduced_prime_sequence(1, 1).primes == std::vector<u64>{2});

    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        BigInt d = BigInt(rng.between(1, u64{1} << rng.between(1, 50)));
        BigInt n = BigInt(1) << static_cast<unsigned long>(rng.between(0, 400));
        n += rng.below(1000);
        auto seq = reduced_prime_sequence(d, n);
        CHECK(seq.primes.front() > d);
        BigInt prod = 1;
        for (std::size_t k = 0; k < seq.primes.size(); ++k) {
            if (k > 0) CHECK(seq.primes[k] > seq.primes[k - 1]);
            CHECK(is_prime_u64(seq.primes[k]));
            prod *= BigInt(seq.primes[k]);
        }
        CHECK(prod == seq.product);
        CHECK(prod > n);
        CHECK(prod / BigInt(seq.primes.back()) <= n);
    }
}

TEST_CASE("crt_combine") {
    std::vector<u64> primes{5, 7};
    CHECK(crt_combine(std::vector<u64>{2, 3}, primes) == 17);
    CHECK(crt_combine(std::vector<u64>{4, 6}, primes) == -1);
    CHECK(crt_combine(std::vector<u64>{3}, std::vector<u64>{7}) == 3);
    CHECK_THROWS_AS(crt_combine(std::vector<u64>{1}, primes), std::invalid_argument);
    CHECK_THROWS_AS(crt_combine(std::vector<u64>{5, 1}, primes), std::invalid_argument);

    // (-M/2, M/2] for M = 143 is [-71, 71]
    for (long x = -71; x <= 71; ++x) {
        std::vector<u64> r{residue(x, 11), residue(x, 13)};
        CHECK(crt_combine(r, reduced_prime_sequence(10, 100)) == x);
    }
    std::vector<u64> three{11, 13, 17};
    for (long x = -1000; x <= 1000; ++x) {
        std::vector<u64> r{residue(x, 11), residue(x, 13), residue(x, 17)};
        CHECK(crt_combine(r, three) == x);
    }

    // large moduli against direct reduction
    Rng rng(41);
    auto seq = reduced_prime_sequence(u64{1} << 61, BigInt(1) << 300);
    CrtBasis basis(seq.primes);
    for (int trial = 0; trial < 50; ++trial) {
        BigInt x = rng.signed_bits(299);
        std::vector<u64> r;
        for (u64 p : seq.primes) r.push_back(mpz_fdiv_ui(x.get_mpz_t(), p));
        CHECK(basis.combine(r) == x);
    }
}

TEST_CASE("rational reconstruction") {
    BigInt m = BigInt(1000003) * 1000033;
    for (auto [a, b] : {std::pair<long, long>{3, 7}, {-22, 9}, {0, 1}, {500, 499}, {-1, 1}}) {
        BigInt x = BigInt(a) * BigInt(b);
        BigInt binv;
        mpz_invert(binv.get_mpz_t(), BigInt(b).get_mpz_t(), m.get_mpz_t());
        x = BigInt(a) * binv % m;
        if (x < 0) x += m;
        auto r = rational_reconstruct(x, m);
        REQUIRE(r);
        CHECK(*r == Rational(a, b));
    }
}

TEST_CASE("integer_sparse_mul") {
    auto a = int_poly(1, {{{0}, 1}, {{1}, 1}});
    auto b = int_poly(1, {{{0}, 1}, {{1}, -1}});
    CHECK(integer_sparse_mul(a, b) == int_poly(1, {{{0}, 1}, {{2}, -1}}));
    CHECK(integer_sparse_mul(a, IntPoly(1)).is_zero());

    BigInt t40 = BigInt(1) << 40;
    auto c = int_poly(1, {{{1}, t40}, {{0}, 1}});
    IntegerMulReport rep;
    auto sq = integer_sparse_mul(c, c, std::nullopt, {}, &rep);
    CHECK(sq == int_poly(1, {{{2}, BigInt(1) << 80}, {{1}, BigInt(1) << 41}, {{0}, 1}}));
    CHECK(rep.path == IntegerStrategy::Crt);
    CHECK(rep.primes.size() >= 2);

    Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = rng.between(1, 4);
        auto p = random_int_poly(rng, n, rng.between(1, 60), 10, 128);
        auto q = random_int_poly(rng, n, rng.between(1, 60), 10, 128);
        IntegerMulReport r;
        CHECK(integer_sparse_mul(p, q, std::nullopt, {}, &r) == naive_mul(p, q));
        CHECK(r.path == IntegerStrategy::Crt);
    }
    // small coefficients: both paths agree with the oracle
    for (int trial = 0; trial < 20; ++trial) {
        auto p = random_int_poly(rng, 3, rng.between(1, 60), 12, 12);
        auto q = random_int_poly(rng, 3, rng.between(1, 60), 12, 12);
        IntegerMulOptions big{IntegerStrategy::BigPrime};
        IntegerMulOptions crt{IntegerStrategy::Crt};
        IntegerMulOptions tiny{IntegerStrategy::Crt, 0};
        IntegerMulReport rb, rc, rt;
        auto expect = naive_mul(p, q);
        CHECK(integer_sparse_mul(p, q, std::nullopt, big, &rb) == expect);
        CHECK(integer_sparse_mul(p, q, std::nullopt, crt, &rc) == expect);
        CHECK(integer_sparse_mul(p, q, std::nullopt, tiny, &rt) == expect);
        CHECK(rb.primes.size() == 1);
        CHECK(rt.primes.front() > rt.box);
    }
    IntegerMulOptions big{IntegerStrategy::BigPrime};
    CHECK_THROWS_AS(integer_sparse_mul(c, c, std::nullopt, big), std::domain_error);
}

TEST_CASE("float_scale") {
    auto p = float_poly(1, {{{1}, 1.5}}, 4, 0);
    ScaledPoly s = float_scale(p);
    CHECK(*s.poly.find(Exponent{1}) == 12);
    CHECK(s.scale == -3);
    CHECK(float_scale(float_poly(1, {}, 4, 0)).poly.is_zero());

    auto exact = float_poly(1, {{{0}, 1.0}, {{1}, 1.5}}, 4, 1);
    ScaledPoly e = float_scale(exact);
    CHECK(*e.poly.find(Exponent{0}) == 16);
    CHECK(*e.poly.find(Exponent{1}) == 24);
    CHECK(e.scale == -4);

    CHECK_THROWS_AS(float_scale(float_poly(1, {{{0}, NAN}}, 4, 0)), std::invalid_argument);
    CHECK_THROWS_AS(float_scale(float_poly(1, {{{0}, INFINITY}}, 4, 0)), std::invalid_argument);
    CHECK_THROWS_AS(float_scale(float_poly(1, {{{0}, 1.0}}, 60, 0)), std::invalid_argument);

    // reconstruction error in exact rational arithmetic
    Rng rng(47);
    for (int trial = 0; trial < 200; ++trial) {
        const int eta = static_cast<int>(rng.below(6));
        std::vector<std::pair<Exponent, double>> terms;
        for (u64 k = 0; k < 20; ++k) {
            double v = std::ldexp(static_cast<double>(rng.next() >> 11), static_cast<int>(rng.between(0, 80)) - 100);
            terms.push_back({Exponent{k}, rng.below(2) ? v : -v});
        }
        FloatPoly fp = float_poly(1, terms, 24, eta);
        ScaledPoly sp = float_scale(fp);
        const int ep = max_exponent(fp.poly);
        const Rational bound = pow2(ep - 24 - eta - 1);
        for (const auto& t : fp.poly.terms()) {
            const BigInt* c = sp.poly.find(t.exponent);
            Rational approx = (c ? Rational(*c) : Rational(0)) * pow2(sp.scale);
            CHECK(abs(Rational(t.coeff) - approx) <= bound);
            if (c) CHECK(bit_length(*c) <= 24 + eta + 1);
        }
    }
}

TEST_CASE("float_sparse_mul") {
    auto one = float_poly(1, {{{0}, 1.0}}, 53, 0);
    CHECK(float_sparse_mul(one, one).poly == one.poly);
    auto a = float_poly(2, {{{1, 0}, 1.5}}, 8, 0);
    auto b = float_poly(2, {{{0, 1}, 2.0}}, 8, 0);
    auto r = float_sparse_mul(a, b);
    REQUIRE(r.poly.size() == 1);
    CHECK(*r.poly.find(Exponent{1, 1}) == 3.0);
    CHECK(r.precision == 8);

    auto big = float_poly(1, {{{0}, 1e300}}, 53, 0);
    CHECK_THROWS_AS(float_sparse_mul(big, big), std::overflow_error);

    // the variable change commutes with the product
    auto p = float_poly(2, {{{1, 0}, 0.75}, {{0, 2}, -1.25}, {{0, 0}, 2.0}}, 53, 0);
    auto q = float_poly(2, {{{1, 1}, 0.5}, {{2, 0}, 3.0}}, 53, 0);
    std::vector<double> lambdas{2.0, 0.5};
    auto lhs = float_sparse_mul(rescale_variables(p, lambdas), rescale_variables(q, lambdas));
    auto rhs = rescale_variables(float_sparse_mul(p, q), lambdas);
    CHECK(lhs.poly == rhs.poly);
}

TEST_CASE("rational_sparse_mul") {
    auto a = rat_poly(1, {{{0}, Rational(1, 2)}, {{1}, 1}});
    auto b = rat_poly(1, {{{0}, Rational(1, 2)}, {{1}, -1}});
    auto expect = rat_poly(1, {{{0}, Rational(1, 4)}, {{2}, -1}});
    CHECK(rational_sparse_mul(a, b) == expect);
    RationalMulOptions heur;
    heur.heuristic = true;
    RationalMulReport rep;
    CHECK(rational_sparse_mul(a, b, std::nullopt, heur, &rep) == expect);
    CHECK(rep.heuristic_accepted);

    auto ia = int_poly(1, {{{0}, 3}, {{4}, -7}});
    auto ib = int_poly(1, {{{1}, 5}, {{0}, 2}});
    auto to_rat = [](const BigInt& c) { return Rational(c); };
    CHECK(rational_sparse_mul(ia.map_coeffs(to_rat), ib.map_coeffs(to_rat)) ==
          integer_sparse_mul(ia, ib).map_coeffs(to_rat));

    Rng rng(53);
    int accepted = 0;
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t n = rng.between(1, 3);
        auto p = random_rat_poly(rng, n, rng.between(1, 25), 8, 20, 1 << 16);
        auto q = random_rat_poly(rng, n, rng.between(1, 25), 8, 20, 1 << 16);
        auto oracle = naive_mul(p, q);
        CHECK(rational_sparse_mul(p, q) == oracle);
        RationalMulReport r;
        CHECK(rational_sparse_mul(p, q, std::nullopt, heur, &r) == oracle);
        accepted += r.heuristic_accepted;
    }
    CHECK(accepted > 0);

    // a round cap of one never sees two agreeing rounds and falls back
    RationalMulOptions capped = heur;
    capped.max_rounds = 1;
    CHECK(rational_sparse_mul(a, b, std::nullopt, capped, &rep) == expect);
    CHECK_FALSE(rep.heuristic_accepted);
}
