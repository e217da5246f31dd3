#include <doctest.h>

#include <random>
#include <set>

#include "sparsemul/prime_field.hpp"

using namespace sparsemul;

namespace {

// Order by repeated multiplication; only usable for small fields.
u64 brute_order(u64 w, u64 p) {
    u64 x = w % p, k = 1;
    while (x != 1) {
        x = x * w % p;
        ++k;
    }
    return k;
}

constexpr u64 kBenchPrime = 3221225473ULL; // 3 * 2^30 + 1

} // namespace

TEST_CASE("primality and factorization") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(kBenchPrime));
    CHECK(is_prime_u64(2147483659ULL));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(561)); // Carmichael
    CHECK_FALSE(is_prime_u64(3215031751ULL)); // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(is_prime_u64(18446744073709551557ULL)); // largest 64-bit prime

    auto f = factor_u64(kBenchPrime - 1);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == std::pair<u64, unsigned>{2, 30});
    CHECK(f[1] == std::pair<u64, unsigned>{3, 1});

    // Semiprime with two large factors exercises the rho fallback.
    const u64 a = 4294967291ULL, b = 1000000007ULL;
    auto g = factor_u64(a * b);
    REQUIRE(g.size() == 2);
    CHECK(g[0].first == b);
    CHECK(g[1].first == a);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        u64 n = (rng() >> 2) + 1;
        u64 product = 1;
        for (auto [q, m] : factor_u64(n)) {
            CHECK(is_prime_u64(q));
            for (unsigned k = 0; k < m; ++k) product *= q;
        }
        CHECK(product == n);
    }
}

TEST_CASE("field construction rejects bad moduli") {
    CHECK_THROWS_AS(PrimeField(2), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(15), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField((u64{1} << 62) + 135), std::invalid_argument);
    PrimeField f(kBenchPrime);
    CHECK(f.two_adicity() == 30);
    CHECK(f.pow(f.two_adic_root(), u64{1} << 29) == kBenchPrime - 1);
}

TEST_CASE("field operations") {
    PrimeField f7(7), f13(13);
    FieldElement a(f7, 3), b(f7, 5);
    CHECK((a * b).residue() == 1);
    CHECK(a.inv().residue() == 5);
    CHECK((a + b).residue() == 1);
    CHECK((a - b).residue() == 5);
    CHECK((a / b).residue() == 2); // 3 * 3 = 9 = 2
    CHECK((-a).residue() == 4);
    CHECK(FieldElement(f13, 2).pow(12).residue() == 1);
    CHECK(FieldElement(f13, 2).pow(0).residue() == 1);
    CHECK(FieldElement(f7, 100).residue() == 2);

    CHECK_THROWS_AS(FieldElement::zero(f7).inv(), std::domain_error);
    CHECK_THROWS_AS(a / FieldElement::zero(f7), std::domain_error);
    CHECK_THROWS_AS(a + FieldElement(f13, 1), std::invalid_argument);
    CHECK_THROWS_AS(a * FieldElement(f13, 1), std::invalid_argument);
}

TEST_CASE("inverse property and batch inversion") {
    PrimeField f(kBenchPrime);
    std::mt19937_64 rng(11);
    std::vector<u64> xs;
    for (int i = 0; i < 1000; ++i) {
        u64 x = rng() % (kBenchPrime - 1) + 1;
        xs.push_back(x);
        CHECK(f.mul(x, f.inv(x)) == 1);
    }
    auto inv = xs;
    f.batch_inv(inv);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(f.mul(xs[i], inv[i]) == 1);
    std::vector<u64> bad{1, 0, 2};
    CHECK_THROWS_AS(f.batch_inv(bad), std::domain_error);
}

TEST_CASE("element_order") {
    PrimeField f7(7);
    CHECK(element_order(FieldElement(f7, 3)) == 6);
    CHECK(element_order(FieldElement(f7, 2)) == 3);
    CHECK(element_order(FieldElement(f7, 1)) == 1);
    CHECK_THROWS_AS(element_order(FieldElement(f7, 0)), std::domain_error);

    for (u64 p : {u64{13}, u64{101}, u64{257}, u64{1009}}) {
        PrimeField f(p);
        for (u64 w = 1; w < p; ++w) {
            u64 ord = element_order(FieldElement(f, w));
            CHECK(ord == brute_order(w, p));
            CHECK((p - 1) % ord == 0);
        }
    }
}

TEST_CASE("find_order_element") {
    PrimeField f13(13);
    FieldElement w = find_order_element(f13, 12);
    CHECK(w.residue() == 2);
    // exhaustive: 2 is the smallest element of order 12 in F_13
    for (u64 g = 2; g < 13; ++g) {
        if (brute_order(g, 13) == 12) {
            CHECK(g == 2);
            break;
        }
    }

    PrimeField f7(7);
    CHECK_THROWS_AS(find_order_element(f7, 8), FieldTooSmall);
    CHECK(element_order(find_order_element(f7, 6)) == 6);
    CHECK(find_order_element(PrimeField(3), 2).residue() == 2);

    PrimeField big(kBenchPrime);
    FieldElement g = find_order_element(big, 1000);
    CHECK(big.pow(g.residue(), (kBenchPrime - 1) / 2) != 1);
    CHECK(big.pow(g.residue(), (kBenchPrime - 1) / 3) != 1);
    CHECK(big.pow(g.residue(), kBenchPrime - 1) == 1);
    CHECK(element_order(g) == kBenchPrime - 1);
}

TEST_CASE("powers below the order are distinct") {
    PrimeField f(1009);
    FieldElement w = find_order_element(f, 1);
    std::set<u64> seen;
    for (u64 k = 0; k < element_order(w); ++k) seen.insert(w.pow(k).residue());
    CHECK(seen.size() == 1008);
}
