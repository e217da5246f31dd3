#include <mpfr.h>

#include <sstream>

#include "sparsemul/bench.hpp"
#include "sparsemul/coeff_rings.hpp"
#include "sparsemul/random.hpp"
#include "sparsemul/series.hpp"

namespace sparsemul {

namespace {

class Checker {
public:
    Checker(std::ostringstream& out, bool inject_fault) : out_(out), fault_(inject_fault) {}

    /// Compares the fast result with the oracle, corrupting the first fast
    /// result of the run when a fault was requested.
    template <class T, class Corrupt>
    void compare(T fast, const T& oracle, Corrupt&& corrupt) {
        if (fault_) {
            corrupt(fast);
            fault_ = false;
        }
        ++total_;
        passed_ += fast == oracle;
    }

    void line(const std::string& ring, const std::string& name) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-4s %-52s %4zu/%-4zu %s\n", ring.c_str(), name.c_str(), passed_, total_,
                      passed_ == total_ ? "ok" : "FAIL");
        out_ << buf;
        all_passed_ += passed_;
        all_failed_ += total_ - passed_;
        passed_ = total_ = 0;
    }

    std::size_t passed() const noexcept { return all_passed_; }
    std::size_t failed() const noexcept { return all_failed_; }

private:
    std::ostringstream& out_;
    bool fault_;
    std::size_t passed_ = 0, total_ = 0, all_passed_ = 0, all_failed_ = 0;
};

template <class C>
void corrupt_sparse(SparsePoly<C>& p) {
    std::vector<Term<C>> terms(p.terms().begin(), p.terms().end());
    if (terms.empty()) {
        Exponent e(p.nvars());
        if constexpr (std::is_same_v<C, FieldElement>) return; // no field at hand; nothing to flip
        else terms.push_back({e, C(1)});
    } else {
        terms[0].coeff = terms[0].coeff + terms[0].coeff;
    }
    p = SparsePoly<C>(p.nvars(), std::move(terms));
}

constexpr u64 kBenchPrime = 3221225473ULL;

void verify_fp(Checker& ck, Rng& rng, unsigned instances) {
    const PrimeField f(kBenchPrime);
    for (unsigned k = 0; k < instances; ++k) {
        const std::size_t n = rng.between(1, 6);
        const u64 bound = fitting_exponent_bound(n, 50, kBenchPrime);
        auto p = random_fp_poly(rng, f, n, rng.between(1, 60), bound);
        auto q = random_fp_poly(rng, f, n, rng.between(1, 60), bound);
        ck.compare(sparse_mul(p, q), naive_mul(p, q), corrupt_sparse<FieldElement>);
    }
    ck.line("fp", "sparse_mul = naive_mul");

    const std::pair<std::size_t, u64> shapes[] = {{2, 12}, {3, 8}, {4, 6}, {6, 4}};
    for (auto [n, d] : shapes) {
        for (unsigned k = 0; k < std::max(1u, instances / 4); ++k) {
            std::vector<u64> a(InitialSegment::count(n, d)), b(a.size());
            for (u64& x : a) x = rng.below(kBenchPrime);
            for (u64& x : b) x = rng.below(kBenchPrime);
            TruncatedSeries p(f, n, d, std::move(a)), q(f, n, d, std::move(b));
            ck.compare(series_mul(p, q), naive_series_mul(p, q), [&](TruncatedSeries& r) {
                std::vector<u64> c(r.coeffs().begin(), r.coeffs().end());
                c[0] = f.add(c[0], 1);
                r = TruncatedSeries(f, n, d, std::move(c));
            });
        }
    }
    ck.line("fp", "series_mul = naive_series_mul");

    const PrimeField small(101);
    for (unsigned k = 0; k < instances; ++k) {
        const std::size_t s = rng.between(1, 32);
        std::vector<u64> pts;
        while (pts.size() < s) {
            u64 x = rng.between(1, 100);
            if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
        }
        PointSet ps(small, pts);
        std::vector<u64> a(s);
        for (u64& x : a) x = rng.below(101);
        ck.compare(transposed_interp(transposed_eval(a, ps, s), ps), a, [](std::vector<u64>& v) { v[0] = (v[0] + 1) % 101; });
    }
    ck.line("fp", "transposed_interp inverts transposed_eval");
}

void verify_z(Checker& ck, Rng& rng, unsigned instances) {
    for (unsigned k = 0; k < instances; ++k) {
        const std::size_t n = rng.between(1, 4);
        auto p = random_int_poly(rng, n, rng.between(1, 40), 12, 128);
        auto q = random_int_poly(rng, n, rng.between(1, 40), 12, 128);
        ck.compare(integer_sparse_mul(p, q), naive_mul(p, q), corrupt_sparse<BigInt>);
    }
    ck.line("z", "integer_sparse_mul = naive_mul (CRT, 128-bit)");
    for (unsigned k = 0; k < instances; ++k) {
        const std::size_t n = rng.between(1, 4);
        auto p = random_int_poly(rng, n, rng.between(1, 40), 12, 16);
        auto q = random_int_poly(rng, n, rng.between(1, 40), 12, 16);
        ck.compare(integer_sparse_mul(p, q, std::nullopt, {IntegerStrategy::BigPrime}), naive_mul(p, q),
                   corrupt_sparse<BigInt>);
    }
    ck.line("z", "integer_sparse_mul = naive_mul (big prime, 16-bit)");
}

void verify_q(Checker& ck, Rng& rng, unsigned instances) {
    RationalMulOptions heuristic;
    heuristic.heuristic = true;
    for (int pass = 0; pass < 2; ++pass) {
        for (unsigned k = 0; k < instances; ++k) {
            const std::size_t n = rng.between(1, 3);
            auto p = random_rat_poly(rng, n, rng.between(1, 25), 8, 24, 1 << 16);
            auto q = random_rat_poly(rng, n, rng.between(1, 25), 8, 24, 1 << 16);
            RationalMulOptions opts;
            if (pass == 1) opts = heuristic;
            ck.compare(rational_sparse_mul(p, q, std::nullopt, opts), naive_mul(p, q), corrupt_sparse<Rational>);
        }
        ck.line("q", pass == 0 ? "rational_sparse_mul = naive_mul (clearing)" : "rational_sparse_mul = naive_mul (heuristic)");
    }
}

/// Dyadic coefficients m 2^(top - precision - t), |m| < 2^precision, 0 <= t <= eta:
/// scaling by 2^(precision + eta - e_P) is exact for them.
SparsePoly<double> random_dyadic(Rng& rng, std::size_t n, std::size_t terms, int precision, int eta, int top) {
    std::vector<Term<double>> t;
    for (const Exponent& e : random_support(rng, n, terms, 10)) {
        const double m = static_cast<double>(rng.between(1, (u64{1} << precision) - 1));
        const int shift = top - precision - static_cast<int>(rng.between(0, static_cast<u64>(eta)));
        t.push_back({e, std::ldexp(rng.below(2) ? m : -m, shift)});
    }
    return {n, std::move(t)};
}

/// The exact product rounded to `precision` bits by MPFR, ties to even.
SparsePoly<double> rounded_oracle(const SparsePoly<double>& p, const SparsePoly<double>& q, int precision) {
    auto exact = naive_mul(p.map_coeffs([](double c) { return Rational(c); }), q.map_coeffs([](double c) { return Rational(c); }));
    mpfr_t r;
    mpfr_init2(r, precision);
    std::vector<Term<double>> t;
    for (const auto& term : exact.terms()) {
        mpfr_set_q(r, term.coeff.get_mpq_t(), MPFR_RNDN);
        t.push_back({term.exponent, mpfr_get_d(r, MPFR_RNDN)});
    }
    mpfr_clear(r);
    return {p.nvars(), std::move(t)};
}

void verify_f64(Checker& ck, Rng& rng, unsigned instances) {
    for (unsigned k = 0; k < instances; ++k) {
        const std::size_t n = rng.between(1, 3);
        const int eta = k % 2 ? 4 : 0;
        FloatPoly p{random_dyadic(rng, n, rng.between(1, 30), 24, eta, static_cast<int>(rng.between(0, 20)) - 10), 24, eta};
        FloatPoly q{random_dyadic(rng, n, rng.between(1, 30), 24, eta, static_cast<int>(rng.between(0, 20)) - 10), 24, eta};
        ck.compare(float_sparse_mul(p, q).poly, rounded_oracle(p.poly, q.poly, 24), corrupt_sparse<double>);
    }
    ck.line("f64", "float_sparse_mul = exact product rounded to 24 bits");
}

} // namespace

VerifyReport verify_mode(const VerifyConfig& cfg) {
    const std::string& ring = cfg.ring;
    if (ring != "all" && ring != "fp" && ring != "z" && ring != "q" && ring != "f64")
        throw std::invalid_argument("verify: unknown ring '" + ring + "'");
    std::ostringstream out;
    out << "verify seed " << cfg.seed << " ring " << ring << " instances " << cfg.instances
        << (cfg.inject_fault ? " (fault injected)" : "") << '\n';
    Checker ck(out, cfg.inject_fault);
    Rng rng(cfg.seed);
    if (ring == "all" || ring == "fp") verify_fp(ck, rng, cfg.instances);
    if (ring == "all" || ring == "z") verify_z(ck, rng, cfg.instances);
    if (ring == "all" || ring == "q") verify_q(ck, rng, cfg.instances);
    if (ring == "all" || ring == "f64") verify_f64(ck, rng, cfg.instances);
    out << "passed " << ck.passed() << " failed " << ck.failed() << '\n';
    return {out.str(), ck.passed(), ck.failed()};
}

} // namespace sparsemul
