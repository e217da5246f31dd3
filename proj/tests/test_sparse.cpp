#include <doctest.h>

#include <map>

#include "sparsemul/random.hpp"
#include "sparsemul/sparse_mul.hpp"

using namespace sparsemul;

namespace {

constexpr u64 kBenchPrime = 3221225473ULL;

using FpPoly = SparsePoly<FieldElement>;

FpPoly fp_poly(const PrimeField& f, std::size_t n, std::vector<std::pair<Exponent, u64>> terms) {
    std::vector<Term<FieldElement>> t;
    for (auto& [e, c] : terms) t.push_back({e, FieldElement(f, c)});
    return {n, std::move(t)};
}

bool canonical(const FpPoly& r) {
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (r.terms()[k].coeff.is_zero()) return false;
        if (k > 0 && !(r.terms()[k - 1].exponent < r.terms()[k].exponent)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("exponents, supports and canonical form") {
    CHECK(Exponent{1, 2} + Exponent{3, 0} == Exponent{4, 2});
    CHECK(Exponent{0, 5} < Exponent{1, 0});
    CHECK(Exponent{1, 1}.bit_size() == 2);
    CHECK(Exponent{0, 0}.bit_size() == 0);
    CHECK(Exponent{4, 7}.bit_size() == 6);
    CHECK_THROWS_AS(Exponent({1}) + Exponent({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(SparsePoly<mpz_class>(0), std::invalid_argument);

    SupportSet x(2, {{2, 2}, {0, 0}, {1, 1}, {0, 0}});
    CHECK(x.size() == 3);
    CHECK(x[0] == Exponent{0, 0});
    CHECK(x.contains(Exponent{1, 1}));
    CHECK_FALSE(x.contains(Exponent{1, 2}));

    SparsePoly<mpz_class> p(2, {{{1, 0}, 3}, {{0, 1}, 2}, {{1, 0}, -3}, {{0, 0}, 0}});
    REQUIRE(p.size() == 1);
    CHECK(p.terms()[0].exponent == Exponent{0, 1});
    CHECK(*p.find(Exponent{0, 1}) == 2);
    CHECK(p.find(Exponent{1, 0}) == nullptr);
}

TEST_CASE("naive_mul examples") {
    PrimeField f7(7);
    auto a = fp_poly(f7, 1, {{{0}, 1}, {{1}, 1}});
    auto b = fp_poly(f7, 1, {{{0}, 1}, {{1}, 6}});
    CHECK(naive_mul(a, b) == fp_poly(f7, 1, {{{0}, 1}, {{2}, 6}}));

    SparsePoly<mpz_class> c(2, {{{1, 0}, 1}, {{0, 1}, 1}});
    SparsePoly<mpz_class> d(2, {{{1, 0}, 1}, {{0, 1}, -1}});
    CHECK(naive_mul(c, d) == SparsePoly<mpz_class>(2, {{{2, 0}, 1}, {{0, 2}, -1}}));
    SparsePoly<mpz_class> one(2, {{{0, 0}, 1}});
    CHECK(naive_mul(c, one) == c);
    CHECK(naive_mul(c, SparsePoly<mpz_class>(2)).is_zero());
    CHECK_THROWS_AS(naive_mul(c, SparsePoly<mpz_class>(3)), std::invalid_argument);
    PrimeField f11(11);
    auto other = fp_poly(f11, 1, {{{0}, 1}});
    CHECK_THROWS_AS(naive_mul(a, other), std::invalid_argument);
}

TEST_CASE("sumset and support statistics") {
    PrimeField f13(13);
    auto p = fp_poly(f13, 2, {{{0, 0}, 1}, {{1, 1}, 1}});
    SupportSet x = sumset_support(p, p);
    CHECK(x == SupportSet(2, {{0, 0}, {1, 1}, {2, 2}}));
    auto c = fp_poly(f13, 2, {{{0, 0}, 4}});
    CHECK(sumset_support(c, p) == p.support());

    SupportStats st = support_stats(p, p, x);
    CHECK(st.s_p == 2);
    CHECK(st.e_p == 2);
    CHECK(st.s == 3);
    CHECK(st.e == 6);
    CHECK(st.sigma == 7);
    CHECK(st.epsilon == 10);
    CHECK(support_stats(SupportSet(2), SupportSet(2), SupportSet(2)) == SupportStats{});

    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_fp_poly(rng, f13, 3, rng.between(1, 20), 6);
        auto b = random_fp_poly(rng, f13, 3, rng.between(1, 20), 6);
        SupportSet s = sumset_support(a, b);
        CHECK(s.size() <= a.size() * b.size());
        auto r = naive_mul(a, b);
        for (const auto& t : r.terms()) CHECK(s.contains(t.exponent));
    }
}

TEST_CASE("kronecker map") {
    KroneckerMap km = kronecker_radices(SupportSet(2, {{0, 0}, {1, 2}, {2, 1}}));
    CHECK(std::vector<u64>(km.radices().begin(), km.radices().end()) == std::vector<u64>{3, 3});
    CHECK(km.total() == 9);
    CHECK(km.index(Exponent{2, 1}) == 5);
    CHECK(km.index(Exponent{0, 0}) == 0);
    CHECK(km.index(Exponent{2, 2}) == 8);
    CHECK_THROWS_AS(km.index(Exponent{3, 0}), std::out_of_range);

    CHECK(kronecker_radices(SupportSet(3, {{0, 0, 0}})).total() == 1);
    CHECK(kronecker_radices(SupportSet(1, {{5}})).total() == 6);
    CHECK_THROWS_AS(kronecker_radices(SupportSet(2)), std::invalid_argument);
    CHECK_THROWS_AS(KroneckerMap({u64{1} << 40, u64{1} << 30}), std::overflow_error);
    CHECK_THROWS_AS(KroneckerMap({2, 0}), std::invalid_argument);

    KroneckerMap km3({4, 5, 6});
    auto cum = km3.cumulative();
    CHECK(std::vector<u64>(cum.begin(), cum.end()) == std::vector<u64>{1, 4, 20});
}

TEST_CASE("kronecker_index is a bijection of every small box") {
    std::vector<std::vector<u64>> boxes;
    for (u64 d = 1; d <= 4096; d += (d < 64 ? 1 : 97)) boxes.push_back({d});
    const u64 radix[] = {1, 2, 3, 5, 8, 16};
    for (u64 a : radix)
        for (u64 b : radix)
            for (u64 c : radix) {
                boxes.push_back({a, b});
                boxes.push_back({a, b, c});
                for (u64 d : radix)
                    if (a * b * c * d <= 4096) boxes.push_back({a, b, c, d});
            }
    for (const auto& r : boxes) {
        KroneckerMap km(r);
        std::vector<bool> hit(km.total(), false);
        Exponent e(r.size());
        u64 count = 0;
        while (true) {
            u64 k = km.index(e);
            REQUIRE(k < km.total());
            CHECK_FALSE(hit[k]);
            hit[k] = true;
            ++count;
            std::size_t j = 0;
            while (j < r.size() && ++e[j] == r[j]) e[j++] = 0;
            if (j == r.size()) break;
        }
        CHECK(count == km.total());
    }
}

TEST_CASE("eval_points") {
    PrimeField f13(13);
    SupportSet y(2, {{0, 0}, {1, 1}, {2, 2}});
    KroneckerMap km({3, 3});
    PointSet pts = eval_points(y, km, FieldElement(f13, 2));
    CHECK(std::vector<u64>(pts.points().begin(), pts.points().end()) == std::vector<u64>{1, 3, 9});
    CHECK(eval_points(SupportSet(2, {{0, 0}}), km, FieldElement(f13, 2)).points()[0] == 1);
    // 4 has order 6 in F_13
    CHECK_THROWS_AS(eval_points(y, km, FieldElement(f13, 4)), OrderTooSmall);

    // compare with direct powering of w^kappa(i)
    PrimeField f(kBenchPrime);
    FieldElement w = find_order_element(f, 2);
    Rng rng(5);
    SupportSet ys = random_support(rng, 4, 300, 30);
    KroneckerMap big = kronecker_radices(ys);
    PointSet got = eval_points(ys, big, w);
    for (std::size_t k = 0; k < ys.size(); ++k) CHECK(got.points()[k] == w.pow(big.index(ys[k])).residue());
}

TEST_CASE("sparse_mul_given_support examples") {
    PrimeField f13(13);
    FieldElement w(f13, 2);
    auto p = fp_poly(f13, 2, {{{0, 0}, 1}, {{1, 1}, 1}});
    auto q = fp_poly(f13, 2, {{{0, 0}, 1}, {{1, 1}, 12}});
    SupportSet x(2, {{0, 0}, {1, 1}, {2, 2}});
    auto r = sparse_mul_given_support(p, q, x, w);
    CHECK(r == fp_poly(f13, 2, {{{0, 0}, 1}, {{2, 2}, 12}}));
    CHECK(r.find(Exponent{1, 1}) == nullptr);

    CHECK(sparse_mul_given_support(FpPoly(2), q, x, w).is_zero());
    CHECK(sparse_mul_given_support(p, FpPoly(2), x, w).is_zero());
    auto c = fp_poly(f13, 2, {{{0, 0}, 5}});
    CHECK(sparse_mul_given_support(c, q, q.support(), w) == q.map_coeffs([&](const FieldElement& a) { return a * c.terms()[0].coeff; }));

    CHECK_THROWS_AS(sparse_mul_given_support(p, q, x, FieldElement(f13, 4)), OrderTooSmall);
    CHECK_THROWS_AS(sparse_mul_given_support(p, q, SupportSet(2), w), std::invalid_argument);
    PrimeField f17(17);
    CHECK_THROWS_AS(sparse_mul_given_support(p, q, x, FieldElement(f17, 3)), std::invalid_argument);

    // X missing (2,2): the product aliases, and the debug check notices
    SupportSet small(2, {{0, 0}, {1, 1}});
    SparseMulOptions dbg;
    dbg.debug_check = true;
    CHECK_THROWS_AS(sparse_mul_given_support(p, q, small, w, dbg), std::logic_error);
    CHECK_NOTHROW(sparse_mul_given_support(p, q, x, w, dbg));
}

TEST_CASE("sparse_mul equals naive_mul on random instances") {
    PrimeField f(kBenchPrime);
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = rng.between(1, 5);
        u64 max_exp = n <= 3 ? 50 : 12;
        auto p = random_fp_poly(rng, f, n, rng.between(0, 80), max_exp);
        auto q = random_fp_poly(rng, f, n, rng.between(0, 80), max_exp);
        auto expect = naive_mul(p, q);
        auto got = sparse_mul(p, q);
        CHECK(got == expect);
        CHECK(canonical(got));
    }
    // X larger than needed, containing exponents outside the sumset
    auto p = random_fp_poly(rng, f, 2, 30, 20);
    auto q = random_fp_poly(rng, f, 2, 30, 20);
    SupportSet sum = sumset_support(p, q);
    std::vector<Exponent> extra(sum.begin(), sum.end());
    extra.push_back({60, 60});
    extra.push_back({0, 45});
    CHECK(sparse_mul(p, q, SupportSet(2, extra)) == naive_mul(p, q));
}

TEST_CASE("evaluation map is multiplicative") {
    PrimeField f(kBenchPrime);
    FieldElement w = find_order_element(f, 2);
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = random_fp_poly(rng, f, 3, 25, 10);
        auto q = random_fp_poly(rng, f, 3, 25, 10);
        auto r = naive_mul(p, q);
        KroneckerMap km({21, 21, 21});
        const std::size_t s = 40;
        auto ep = evaluation_vector(p, km, w, s);
        auto eq = evaluation_vector(q, km, w, s);
        auto er = evaluation_vector(r, km, w, s);
        for (std::size_t k = 0; k < s; ++k) CHECK(f.mul(ep[k], eq[k]) == er[k]);
        // row k of E is the Kronecker image evaluated at w^k
        std::size_t k = 7;
        u64 direct = 0;
        for (const auto& t : p.terms())
            direct = f.add(direct, f.mul(t.coeff.residue(), w.pow(k * km.index(t.exponent)).residue()));
        CHECK(ep[k] == direct);
    }
}

TEST_CASE("the transposed Vandermonde matrix at Kronecker points is invertible") {
    PrimeField f(kBenchPrime);
    FieldElement w = find_order_element(f, 2);
    Rng rng(29);
    SupportSet x = random_support(rng, 3, 150, 9);
    KroneckerMap km = kronecker_radices(x);
    PointSet pts = eval_points(x, km, w);
    std::vector<u64> a(x.size());
    for (u64& v : a) v = rng.below(kBenchPrime);
    CHECK(transposed_interp(transposed_eval(a, pts, x.size()), pts) == a);
}
