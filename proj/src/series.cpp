#include "sparsemul/series.hpp"

#include <gmpxx.h>

#include <stdexcept>

namespace sparsemul {

namespace {

void compositions(std::size_t t, u64 rem, Exponent& cur, std::vector<Exponent>& out) {
    if (t + 1 == cur.nvars()) {
        cur[t] = rem;
        out.push_back(cur);
        return;
    }
    for (u64 v = rem + 1; v-- > 0;) {
        cur[t] = v;
        compositions(t + 1, rem - v, cur, out);
    }
    cur[t] = 0;
}

void check_same_shape(const TruncatedSeries& p, const TruncatedSeries& q) {
    if (!(p.field() == q.field())) throw std::invalid_argument("series: field mismatch");
    if (p.nvars() != q.nvars() || p.degree() != q.degree())
        throw std::invalid_argument("series: variable count or truncation degree mismatch");
}

} // namespace

u64 InitialSegment::count(std::size_t nvars, u64 degree) {
    if (nvars == 0 || degree == 0) throw std::invalid_argument("InitialSegment: need n >= 1 and d >= 1");
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), nvars + degree - 1, nvars);
    if (c > mpz_class(u64{1} << 40)) throw std::length_error("InitialSegment: too many monomials");
    return c.get_ui();
}

InitialSegment::InitialSegment(std::size_t nvars, u64 degree) : n_(nvars), d_(degree) {
    const u64 total = count(nvars, degree);
    const u64 rows = n_ + d_;
    pascal_.assign(rows * (n_ + 1), 0);
    for (u64 a = 0; a < rows; ++a) {
        pascal_[a * (n_ + 1)] = 1;
        for (u64 b = 1; b <= std::min<u64>(a, n_); ++b)
            pascal_[a * (n_ + 1) + b] = pascal_[(a - 1) * (n_ + 1) + b - 1] + pascal_[(a - 1) * (n_ + 1) + b];
    }
    exps_.reserve(total);
    Exponent cur(n_);
    for (u64 m = 0; m < d_; ++m) compositions(0, m, cur, exps_);
}

bool InitialSegment::contains(const Exponent& e) const noexcept {
    if (e.nvars() != n_) return false;
    u64 sum = 0;
    for (u64 x : e.parts()) {
        if (x >= d_) return false;
        sum += x;
    }
    return sum < d_;
}

std::size_t InitialSegment::rank(const Exponent& e) const {
    if (!contains(e)) throw std::out_of_range("InitialSegment: exponent outside the segment");
    return rank_unchecked(e.parts());
}

std::size_t InitialSegment::rank_unchecked(std::span<const u64> e) const noexcept {
    u64 m = 0;
    for (u64 x : e) m += x;
    // all monomials of lower degree come first
    u64 r = m == 0 ? 0 : binom(n_ + m - 1, n_);
    // then those of degree m with a larger first differing part
    u64 rem = m;
    for (std::size_t t = 0; t + 1 < n_; ++t) {
        if (rem > e[t]) r += binom(rem - e[t] - 1 + n_ - t - 1, n_ - t - 1);
        rem -= e[t];
    }
    return r;
}

TruncatedSeries::TruncatedSeries(const PrimeField& field, std::size_t nvars, u64 degree)
    : field_(&field), segment_(std::make_shared<InitialSegment>(nvars, degree)), coeffs_(segment_->size(), 0) {}

TruncatedSeries::TruncatedSeries(const PrimeField& field, std::size_t nvars, u64 degree, std::vector<u64> coeffs)
    : field_(&field), segment_(std::make_shared<InitialSegment>(nvars, degree)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != segment_->size()) throw std::invalid_argument("TruncatedSeries: expected one coefficient per monomial of I_d");
    for (u64& c : coeffs_) c = field.reduce(c);
}

TruncatedSeries TruncatedSeries::from_sparse(const SparsePoly<FieldElement>& p, u64 degree) {
    if (p.is_zero()) throw std::invalid_argument("TruncatedSeries::from_sparse: zero polynomial has no field");
    TruncatedSeries out(p.terms()[0].coeff.field(), p.nvars(), degree);
    for (const auto& t : p.terms()) {
        if (!out.segment_->contains(t.exponent)) throw std::invalid_argument("TruncatedSeries: term of total degree >= d");
        out.set(t.exponent, t.coeff.residue());
    }
    return out;
}

bool TruncatedSeries::is_zero() const noexcept {
    for (u64 c : coeffs_)
        if (c != 0) return false;
    return true;
}

SparsePoly<FieldElement> TruncatedSeries::to_sparse() const {
    std::vector<Term<FieldElement>> terms;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        if (coeffs_[k] != 0) terms.push_back({(*segment_)[k], FieldElement(*field_, coeffs_[k])});
    return {nvars(), std::move(terms)};
}

Exponent projective_exponent(const Exponent& e) {
    if (e.nvars() == 0) throw std::invalid_argument("projective_exponent: no variables");
    Exponent out(e);
    const u64 sum = e.total_degree();
    if (sum < e[e.nvars() - 1]) throw std::overflow_error("projective_exponent: degree overflow");
    out[e.nvars() - 1] = sum;
    return out;
}

SliceStack projective_transform(const TruncatedSeries& p) {
    const std::size_t n = p.nvars();
    const u64 d = p.degree();
    SliceStack out{n, d, n > 1 ? std::make_shared<InitialSegment>(n - 1, d) : nullptr, {}};
    out.slices.assign(d, std::vector<u64>(out.slice_size(), 0));
    const InitialSegment& seg = p.segment();
    for (std::size_t k = 0; k < seg.size(); ++k) {
        const u64 c = p.coeffs()[k];
        if (c == 0) continue;
        const auto parts = seg[k].parts();
        const std::size_t pos = out.x ? out.x->rank_unchecked(parts.first(n - 1)) : 0;
        out.slices[seg[k].total_degree()][pos] = c;
    }
    return out;
}

TruncatedSeries inverse_projective_transform(const SliceStack& s, const PrimeField& field) {
    if (s.nvars == 0 || s.slices.size() != s.degree || (s.nvars > 1) != static_cast<bool>(s.x))
        throw std::invalid_argument("inverse_projective_transform: malformed slice stack");
    if (s.x && (s.x->nvars() != s.nvars - 1 || s.x->degree() != s.degree))
        throw std::invalid_argument("inverse_projective_transform: malformed slice stack");
    TruncatedSeries out(field, s.nvars, s.degree);
    std::vector<u64> coeffs(out.segment().size(), 0);
    Exponent e(s.nvars);
    for (u64 j = 0; j < s.degree; ++j) {
        if (s.slices[j].size() != s.slice_size()) throw std::invalid_argument("inverse_projective_transform: slice has wrong size");
        for (std::size_t pos = 0; pos < s.slices[j].size(); ++pos) {
            const u64 c = s.slices[j][pos];
            if (c == 0) continue;
            u64 partial = 0;
            if (s.x) {
                const Exponent& head = (*s.x)[pos];
                for (std::size_t t = 0; t + 1 < s.nvars; ++t) e[t] = head[t];
                partial = head.total_degree();
            }
            if (partial > j) throw std::invalid_argument("inverse_projective_transform: slice term outside the image of T");
            e[s.nvars - 1] = j - partial;
            coeffs[out.segment().rank_unchecked(e.parts())] = field.reduce(c);
        }
    }
    return TruncatedSeries(field, s.nvars, s.degree, std::move(coeffs));
}

TruncatedSeries series_mul(const TruncatedSeries& p, const TruncatedSeries& q, const FieldElement& w) {
    check_same_shape(p, q);
    const PrimeField& f = p.field();
    if (!(w.field() == f)) throw std::invalid_argument("series_mul: w lies in another field");
    const std::size_t n = p.nvars();
    const u64 d = p.degree();
    if (n == 1) {
        auto r = detail::mul_trunc(f, p.coeffs(), q.coeffs(), d);
        r.resize(d, 0);
        return TruncatedSeries(f, 1, d, std::move(r));
    }

    const SliceStack tp = projective_transform(p), tq = projective_transform(q);
    const InitialSegment& x = *tp.x;
    const std::size_t s = x.size();

    // w^kappa(i) for i in X, radices (d, ..., d). Each point is the point of a
    // lower-degree neighbour times one precomputed power.
    KroneckerMap km(std::vector<u64>(n - 1, d));
    if (w.is_zero() || element_order(w) < km.total())
        throw OrderTooSmall("series_mul: order of w is below d^(n-1)");
    std::vector<u64> step(n - 1);
    for (std::size_t j = 0; j < n - 1; ++j) step[j] = f.pow(w.residue(), km.cumulative()[j]);
    std::vector<u64> pts(s);
    pts[0] = 1;
    Exponent prev(n - 1);
    for (std::size_t k = 1; k < s; ++k) {
        const Exponent& e = x[k];
        std::size_t j = 0;
        while (e[j] == 0) ++j;
        prev = e;
        --prev[j];
        pts[k] = f.mul(pts[x.rank_unchecked(prev.parts())], step[j]);
    }
    const PointSet points(f, std::move(pts));
    const TransposedEvaluator evaluator(points, s);
    const TransposedInterpolator interpolator(points);

    auto evaluate = [&](const SliceStack& t) {
        std::vector<std::vector<u64>> out(d);
        for (u64 j = 0; j < d; ++j) {
            bool zero = true;
            for (u64 c : t.slices[j]) zero = zero && c == 0;
            out[j] = zero ? std::vector<u64>(s, 0) : evaluator.apply(t.slices[j]);
        }
        return out;
    };
    const auto ep = evaluate(tp), eq = evaluate(tq);

    // at every point, a product of two polynomials in z_n modulo z_n^d
    std::vector<std::vector<u64>> er(d, std::vector<u64>(s, 0));
    std::vector<u64> a(d), b(d);
    for (std::size_t k = 0; k < s; ++k) {
        for (u64 j = 0; j < d; ++j) {
            a[j] = ep[j][k];
            b[j] = eq[j][k];
        }
        const auto c = detail::mul_trunc(f, a, b, d);
        for (u64 j = 0; j < c.size(); ++j) er[j][k] = c[j];
    }

    SliceStack tr{n, d, tp.x, {}};
    tr.slices.resize(d);
    for (u64 j = 0; j < d; ++j) tr.slices[j] = interpolator.apply(er[j]);
    return inverse_projective_transform(tr, f);
}

TruncatedSeries series_mul(const TruncatedSeries& p, const TruncatedSeries& q) {
    check_same_shape(p, q);
    const PrimeField& f = p.field();
    u64 order = 1;
    for (std::size_t j = 1; j < p.nvars(); ++j) {
        if (__builtin_mul_overflow(order, p.degree(), &order) || order > f.modulus() - 1)
            throw FieldTooSmall("series_mul: d^(n-1) exceeds the multiplicative group order");
    }
    return series_mul(p, q, find_order_element(f, order));
}

TruncatedSeries naive_series_mul(const TruncatedSeries& p, const TruncatedSeries& q) {
    check_same_shape(p, q);
    const PrimeField& f = p.field();
    const InitialSegment& seg = p.segment();
    const std::size_t n = p.nvars();
    const u64 d = p.degree();
    std::vector<u64> r(seg.size(), 0);
    std::vector<u64> sum(n);
    for (std::size_t ka = 0; ka < seg.size(); ++ka) {
        const u64 ca = p.coeffs()[ka];
        if (ca == 0) continue;
        const Exponent& a = seg[ka];
        // the b with |a| + |b| < d are exactly the first |I_(d - |a|)| monomials
        const u64 limit = InitialSegment::count(n, d - a.total_degree());
        for (std::size_t kb = 0; kb < limit; ++kb) {
            const u64 cb = q.coeffs()[kb];
            if (cb == 0) continue;
            const Exponent& b = seg[kb];
            for (std::size_t t = 0; t < n; ++t) sum[t] = a[t] + b[t];
            const std::size_t k = seg.rank_unchecked(sum);
            r[k] = f.add(r[k], f.mul(ca, cb));
        }
    }
    return TruncatedSeries(f, n, d, std::move(r));
}

} // namespace sparsemul
