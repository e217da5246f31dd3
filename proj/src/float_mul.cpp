#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsemul/coeff_rings.hpp"

namespace sparsemul {

namespace {

void check_precision(int precision, int eta) {
    if (precision < 1 || precision > 53) throw std::invalid_argument("FloatPoly: precision must be in [1, 53]");
    if (eta < 0) throw std::invalid_argument("FloatPoly: discrepancy must be non-negative");
}

/// x / 2^k rounded to the nearest integer, ties to even.
BigInt shift_round(const BigInt& x, unsigned long k) {
    if (k == 0) return x;
    BigInt a = abs(x), q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), a.get_mpz_t(), k);
    const bool half = mpz_tstbit(a.get_mpz_t(), k - 1);
    const bool tie = half && mpz_scan1(a.get_mpz_t(), 0) == k - 1;
    if (half && (!tie || mpz_tstbit(q.get_mpz_t(), 0))) ++q;
    return sgn(x) < 0 ? BigInt(-q) : q;
}

/// c * 2^scale as a double, rounded to `precision` significant bits.
double to_double(const BigInt& c, long scale, int precision) {
    const long bits = static_cast<long>(bit_length(c));
    BigInt m = c;
    if (bits > precision) {
        m = shift_round(c, static_cast<unsigned long>(bits - precision));
        scale += bits - precision;
    }
    // m has at most precision + 1 <= 54 bits; 54 only when it is a power of two
    const double v = std::ldexp(m.get_d(), static_cast<int>(std::clamp(scale, -100000L, 100000L)));
    if (!std::isfinite(v)) throw std::overflow_error("float_sparse_mul: coefficient out of double range");
    return v;
}

} // namespace

int max_exponent(const SparsePoly<double>& p) {
    int e = std::numeric_limits<int>::min();
    for (const auto& t : p.terms()) {
        int k;
        std::frexp(t.coeff, &k);
        e = std::max(e, k);
    }
    return p.is_zero() ? 0 : e;
}

ScaledPoly float_scale(const FloatPoly& p) {
    check_precision(p.precision, p.eta);
    for (const auto& t : p.poly.terms())
        if (!std::isfinite(t.coeff)) throw std::invalid_argument("float_scale: non-finite coefficient");
    const long scale = static_cast<long>(max_exponent(p.poly)) - p.precision - p.eta;
    std::vector<Term<BigInt>> terms;
    for (const auto& t : p.poly.terms()) {
        // exact decomposition c = m * 2^k with m a 53-bit integer
        int k;
        const double frac = std::frexp(t.coeff, &k);
        BigInt m(std::ldexp(frac, 53));
        const long shift = static_cast<long>(k) - 53 - scale;
        BigInt v = shift >= 0 ? BigInt(m << static_cast<unsigned long>(shift))
                              : shift_round(m, static_cast<unsigned long>(-shift));
        terms.push_back({t.exponent, std::move(v)});
    }
    return {IntPoly(p.poly.nvars(), std::move(terms)), scale};
}

FloatPoly float_sparse_mul(const FloatPoly& p, const FloatPoly& q, const std::optional<SupportSet>& x,
                           const IntegerMulOptions& opts) {
    if (p.poly.nvars() != q.poly.nvars()) throw std::invalid_argument("float_sparse_mul: variable count mismatch");
    const ScaledPoly a = float_scale(p), b = float_scale(q);
    const int precision = std::min(p.precision, q.precision);
    const IntPoly r = integer_sparse_mul(a.poly, b.poly, x, opts);
    std::vector<Term<double>> terms;
    for (const auto& t : r.terms()) terms.push_back({t.exponent, to_double(t.coeff, a.scale + b.scale, precision)});
    return {SparsePoly<double>(p.poly.nvars(), std::move(terms)), precision, std::max(p.eta, q.eta)};
}

FloatPoly rescale_variables(const FloatPoly& p, std::span<const double> lambdas) {
    if (lambdas.size() != p.poly.nvars()) throw std::invalid_argument("rescale_variables: one factor per variable");
    FloatPoly out = p;
    std::vector<Term<double>> terms;
    for (const auto& t : p.poly.terms()) {
        double c = t.coeff;
        for (std::size_t j = 0; j < lambdas.size(); ++j) c *= std::pow(lambdas[j], static_cast<double>(t.exponent[j]));
        terms.push_back({t.exponent, c});
    }
    out.poly = SparsePoly<double>(p.poly.nvars(), std::move(terms));
    return out;
}

} // namespace sparsemul
