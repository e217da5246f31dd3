#include <doctest.h>

#include <gmpxx.h>

#include <set>

#include "sparsemul/random.hpp"
#include "sparsemul/series.hpp"

using namespace sparsemul;

namespace {

constexpr u64 kBenchPrime = 3221225473ULL;

TruncatedSeries random_series(Rng& rng, const PrimeField& f, std::size_t n, u64 d) {
    std::vector<u64> c(InitialSegment::count(n, d));
    for (u64& x : c) x = rng.below(f.modulus());
    return TruncatedSeries(f, n, d, std::move(c));
}

u64 binomial(u64 a, u64 b) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), a, b);
    return c.get_ui();
}

} // namespace

TEST_CASE("initial segment enumeration and sizes") {
    InitialSegment s22(2, 2);
    REQUIRE(s22.size() == 3);
    CHECK(s22[0] == Exponent{0, 0});
    CHECK(s22[1] == Exponent{1, 0});
    CHECK(s22[2] == Exponent{0, 1});
    CHECK(InitialSegment(2, 12).size() == 78);
    CHECK(InitialSegment(4, 12).size() == 1365);
    CHECK(InitialSegment(6, 7).size() == 924);
    CHECK_THROWS_AS(InitialSegment(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(InitialSegment(2, 0), std::invalid_argument);

    for (std::size_t n = 1; n <= 8; ++n) {
        for (u64 d = 1; d <= 32; ++d) {
            const u64 size = InitialSegment::count(n, d);
            CHECK(size == binomial(n + d - 1, n));
            const u64 s = binomial(n + d - 2, n - 1);
            CHECK(s * (n + d - 1) == n * size);
        }
    }

    // brute force over the box: membership, order, and ranks
    for (std::size_t n = 1; n <= 4; ++n) {
        for (u64 d = 1; d <= 7; ++d) {
            InitialSegment seg(n, d);
            std::set<Exponent> members;
            Exponent e(n);
            while (true) {
                if (e.total_degree() < d) members.insert(e);
                std::size_t j = 0;
                while (j < n && ++e[j] == d) e[j++] = 0;
                if (j == n) break;
            }
            CHECK(members.size() == seg.size());
            for (std::size_t k = 0; k < seg.size(); ++k) {
                CHECK(members.count(seg[k]) == 1);
                CHECK(seg.rank(seg[k]) == k);
                if (k > 0) {
                    const u64 a = seg[k - 1].total_degree(), b = seg[k].total_degree();
                    CHECK((a < b || (a == b && seg[k] < seg[k - 1])));
                }
            }
            Exponent out(n);
            out[0] = d;
            CHECK_FALSE(seg.contains(out));
            CHECK_THROWS_AS(seg.rank(out), std::out_of_range);
        }
    }
}

TEST_CASE("projective transform") {
    PrimeField f(101);
    TruncatedSeries z1(f, 2, 3);
    z1.set({1, 0}, 1);
    SliceStack t = projective_transform(z1);
    REQUIRE(t.slices.size() == 3);
    // (1,0) -> (1,1): slice 1 at the position of (1) in X
    CHECK(t.slices[1][t.x->rank(Exponent{1})] == 1);
    CHECK(projective_exponent(Exponent{1, 0}) == Exponent{1, 1});
    CHECK(projective_exponent(Exponent{2, 1, 3}) == Exponent{2, 1, 6});

    TruncatedSeries one(f, 3, 4);
    one.set({0, 0, 0}, 1);
    SliceStack t1 = projective_transform(one);
    CHECK(t1.slices[0][0] == 1);
    CHECK(inverse_projective_transform(t1, f) == one);

    // slice 1 holding (1) maps back to (1,0)
    SliceStack s{2, 3, std::make_shared<InitialSegment>(1, 3), {}};
    s.slices.assign(3, std::vector<u64>(3, 0));
    s.slices[1][1] = 5;
    TruncatedSeries back = inverse_projective_transform(s, f);
    CHECK(back.coeff({1, 0}) == 5);
    s.slices[1][2] = 1; // (2) in slice 1 is not in the image
    CHECK_THROWS_AS(inverse_projective_transform(s, f), std::invalid_argument);

    Rng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = rng.between(1, 4);
        u64 d = rng.between(1, 8);
        TruncatedSeries p = random_series(rng, f, n, d);
        SliceStack tp = projective_transform(p);
        for (u64 j = 0; j < d; ++j)
            for (std::size_t pos = 0; pos < tp.slice_size(); ++pos)
                if (tp.slices[j][pos] != 0 && tp.x) CHECK((*tp.x)[pos].total_degree() <= j);
        CHECK(inverse_projective_transform(tp, f) == p);
    }
}

TEST_CASE("the projective transform is multiplicative") {
    PrimeField f(kBenchPrime);
    Rng rng(61);
    auto transform = [](const SparsePoly<FieldElement>& a) {
        std::vector<Term<FieldElement>> t;
        for (const auto& term : a.terms()) t.push_back({projective_exponent(term.exponent), term.coeff});
        return SparsePoly<FieldElement>(a.nvars(), std::move(t));
    };
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = rng.between(1, 4);
        auto p = random_fp_poly(rng, f, n, 15, 5);
        auto q = random_fp_poly(rng, f, n, 15, 5);
        CHECK(transform(naive_mul(p, q)) == naive_mul(transform(p), transform(q)));
    }
}

TEST_CASE("series_mul examples") {
    PrimeField f(101);
    TruncatedSeries p(f, 2, 3), q(f, 2, 3), expect(f, 2, 3);
    p.set({0, 0}, 1);
    p.set({1, 0}, 1);
    p.set({0, 1}, 1);
    q.set({0, 0}, 1);
    q.set({1, 0}, 1);
    expect.set({0, 0}, 1);
    expect.set({1, 0}, 2);
    expect.set({0, 1}, 1);
    expect.set({2, 0}, 1);
    expect.set({1, 1}, 1);
    CHECK(naive_series_mul(p, q) == expect);
    CHECK(series_mul(p, q) == expect);

    TruncatedSeries one(f, 2, 3);
    one.set({0, 0}, 1);
    CHECK(series_mul(one, q) == q);

    TruncatedSeries c(f, 3, 1, {7}), e(f, 3, 1, {9});
    CHECK(series_mul(c, e).coeffs()[0] == 63);
    CHECK(naive_series_mul(TruncatedSeries(f, 2, 3), q).is_zero());

    CHECK_THROWS_AS(series_mul(p, TruncatedSeries(f, 2, 4)), std::invalid_argument);
    CHECK_THROWS_AS(series_mul(p, q, FieldElement(f, 1)), OrderTooSmall);
    PrimeField small(7);
    CHECK_THROWS_AS(series_mul(TruncatedSeries(small, 3, 3), TruncatedSeries(small, 3, 3)), FieldTooSmall);
}

TEST_CASE("series_mul equals naive_series_mul") {
    PrimeField f(kBenchPrime);
    Rng rng(67);
    const std::pair<std::size_t, u64> shapes[] = {{1, 1}, {1, 40}, {2, 1}, {2, 12}, {3, 8}, {4, 6}, {6, 4}, {2, 70}, {3, 17}};
    for (auto [n, d] : shapes) {
        for (int trial = 0; trial < 3; ++trial) {
            TruncatedSeries p = random_series(rng, f, n, d), q = random_series(rng, f, n, d);
            CHECK(series_mul(p, q) == naive_series_mul(p, q));
            CHECK(naive_series_mul(p, q) == naive_series_mul(q, p));
        }
    }
}

TEST_CASE("series_mul is bilinear") {
    PrimeField f(kBenchPrime);
    Rng rng(71);
    for (int trial = 0; trial < 5; ++trial) {
        TruncatedSeries p = random_series(rng, f, 3, 6), p2 = random_series(rng, f, 3, 6), q = random_series(rng, f, 3, 6);
        const u64 a = rng.below(kBenchPrime);
        std::vector<u64> comb(p.coeffs().size());
        for (std::size_t k = 0; k < comb.size(); ++k) comb[k] = f.add(f.mul(a, p.coeffs()[k]), p2.coeffs()[k]);
        TruncatedSeries lhs = series_mul(TruncatedSeries(f, 3, 6, comb), q);
        TruncatedSeries r1 = series_mul(p, q), r2 = series_mul(p2, q);
        for (std::size_t k = 0; k < comb.size(); ++k)
            CHECK(lhs.coeffs()[k] == f.add(f.mul(a, r1.coeffs()[k]), r2.coeffs()[k]));
    }
}

TEST_CASE("sparse round trip") {
    PrimeField f(kBenchPrime);
    Rng rng(73);
    TruncatedSeries p = random_series(rng, f, 3, 5);
    CHECK(TruncatedSeries::from_sparse(p.to_sparse(), 5) == p);
    CHECK_THROWS_AS(TruncatedSeries::from_sparse(p.to_sparse(), 4), std::invalid_argument);
}
