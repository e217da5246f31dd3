#include "sparsemul/dense_poly.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "ntt.hpp"

namespace sparsemul {

namespace {

constexpr std::size_t kSchoolbookLimit = 32;
constexpr std::size_t kKaratsubaLimit = 256;
// Below this a direct transform loses to Karatsuba even when p - 1 allows it.
constexpr std::size_t kNttLimit = 64;

void require_same_field(const PrimeField& a, const PrimeField& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": operands belong to different fields");
}

std::vector<u64> schoolbook(const PrimeField& f, std::span<const u64> a, std::span<const u64> b) {
    const std::size_t out_len = a.size() + b.size() - 1;
    const u64 p = f.modulus();
    std::vector<u64> out(out_len);
    for (std::size_t k = 0; k < out_len; ++k) {
        const std::size_t lo = k >= b.size() ? k - b.size() + 1 : 0;
        const std::size_t hi = std::min(k, a.size() - 1);
        u128 acc = 0;
        unsigned pending = 0;
        for (std::size_t i = lo; i <= hi; ++i) {
            acc += static_cast<u128>(a[i]) * b[k - i];
            // 15 products below 2^124 plus a reduced remainder stay below 2^128.
            if (++pending == 15) {
                acc %= p;
                pending = 0;
            }
        }
        out[k] = static_cast<u64>(acc % p);
    }
    return out;
}

void add_into(const PrimeField& f, std::vector<u64>& dst, std::span<const u64> src, std::size_t offset = 0) {
    if (dst.size() < offset + src.size()) dst.resize(offset + src.size(), 0);
    for (std::size_t i = 0; i < src.size(); ++i) dst[offset + i] = f.add(dst[offset + i], src[i]);
}

// Equal-length operands.
std::vector<u64> karatsuba(const PrimeField& f, std::span<const u64> a, std::span<const u64> b) {
    const std::size_t n = a.size();
    if (n < kSchoolbookLimit) return schoolbook(f, a, b);
    const std::size_t m = n / 2;
    auto a0 = a.first(m), a1 = a.subspan(m);
    auto b0 = b.first(m), b1 = b.subspan(m);

    std::vector<u64> sa(a1.begin(), a1.end()), sb(b1.begin(), b1.end());
    for (std::size_t i = 0; i < m; ++i) {
        sa[i] = f.add(sa[i], a0[i]);
        sb[i] = f.add(sb[i], b0[i]);
    }
    std::vector<u64> z0 = karatsuba(f, a0, b0);
    std::vector<u64> z2 = karatsuba(f, a1, b1);
    std::vector<u64> z1 = karatsuba(f, sa, sb);
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = f.sub(z1[i], z0[i]);
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = f.sub(z1[i], z2[i]);

    std::vector<u64> out(2 * n - 1, 0);
    std::copy(z0.begin(), z0.end(), out.begin());
    add_into(f, out, z1, m);
    add_into(f, out, z2, 2 * m);
    out.resize(2 * n - 1);
    return out;
}

// Cuts the longer operand into chunks the size of the shorter one.
std::vector<u64> karatsuba_unbalanced(const PrimeField& f, std::span<const u64> a, std::span<const u64> b) {
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t chunk = b.size();
    std::vector<u64> out(a.size() + b.size() - 1, 0);
    std::vector<u64> piece(chunk);
    for (std::size_t start = 0; start < a.size(); start += chunk) {
        const std::size_t len = std::min(chunk, a.size() - start);
        std::vector<u64> prod;
        if (len == chunk) {
            std::copy_n(a.begin() + static_cast<std::ptrdiff_t>(start), len, piece.begin());
            prod = karatsuba(f, piece, b);
        } else {
            prod = detail::mul_raw(f, a.subspan(start, len), b);
        }
        prod.resize(std::min(prod.size(), out.size() - start));
        add_into(f, out, prod, start);
    }
    return out;
}

std::vector<u64> reversed(std::span<const u64> a, std::size_t len) {
    std::vector<u64> r(len, 0);
    for (std::size_t i = 0; i < len && i < a.size(); ++i) r[i] = a[a.size() - 1 - i];
    return r;
}

std::size_t trimmed_size(std::span<const u64> a) {
    std::size_t n = a.size();
    while (n > 0 && a[n - 1] == 0) --n;
    return n;
}

u64 horner(const PrimeField& f, std::span<const u64> a, u64 x) {
    u64 acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = f.add(f.mul(acc, x), a[i]);
    return acc;
}

} // namespace

namespace detail {

std::vector<u64> mul_raw(const PrimeField& f, std::span<const u64> a, std::span<const u64> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t shorter = std::min(a.size(), b.size());
    const std::size_t out_len = a.size() + b.size() - 1;
    if (shorter < kSchoolbookLimit) return schoolbook(f, a, b);
    if (shorter >= kNttLimit && ntt_supports(f, out_len)) return ntt_multiply(f, a, b);
    if (shorter < kKaratsubaLimit) return karatsuba_unbalanced(f, a, b);
    return three_prime_multiply(f, a, b);
}

std::vector<u64> mul_trunc(const PrimeField& f, std::span<const u64> a, std::span<const u64> b, std::size_t n) {
    auto out = mul_raw(f, a.first(std::min(a.size(), n)), b.first(std::min(b.size(), n)));
    out.resize(n, 0);
    return out;
}

std::vector<u64> middle_product(const PrimeField& f, std::span<const u64> g, std::span<const u64> y, std::size_t offset,
                                std::size_t count) {
    std::vector<u64> out(count, 0);
    if (g.empty() || y.empty() || count == 0) return out;
    const std::size_t full = g.size() + y.size() - 1;
    if (std::min(g.size(), count) < kNttLimit) {
        const u64 p = f.modulus();
        for (std::size_t i = 0; i < count && offset + i < full; ++i) {
            const std::size_t k = offset + i;
            const std::size_t lo = k >= y.size() ? k - y.size() + 1 : 0;
            const std::size_t hi = std::min(k, g.size() - 1);
            u128 acc = 0;
            unsigned pending = 0;
            for (std::size_t j = lo; j <= hi; ++j) {
                acc += static_cast<u128>(g[j]) * y[k - j];
                if (++pending == 15) {
                    acc %= p;
                    pending = 0;
                }
            }
            out[i] = static_cast<u64>(acc % p);
        }
        return out;
    }
    // Modulo u^len - 1 the terms past len wrap onto indices below offset.
    const std::size_t len = std::bit_ceil(std::max({g.size(), y.size(), offset + count}));
    std::vector<u64> c = full <= len + offset && ntt_supports(f, len) ? ntt_cyclic(f, g, y, len) : mul_raw(f, g, y);
    for (std::size_t i = 0; i < count && offset + i < c.size(); ++i) out[i] = c[offset + i];
    return out;
}

std::vector<u64> inverse_series(const PrimeField& f, std::span<const u64> a, std::size_t n) {
    if (n == 0) return {};
    if (a.empty() || a[0] == 0) throw std::domain_error("inverse_series: constant coefficient is zero");
    std::vector<u64> b{f.inv(a[0])};
    std::size_t k = 1;
    while (k < n) {
        const std::size_t k2 = std::min(2 * k, n);
        // a*b = 1 + e u^k mod u^k2, and b <- b - b e u^k
        std::vector<u64> e = middle_product(f, a.first(std::min(a.size(), k2)), b, k, k2 - k);
        std::vector<u64> c = mul_trunc(f, b, e, k2 - k);
        b.resize(k2);
        for (std::size_t i = 0; i < k2 - k; ++i) b[k + i] = f.neg(c[i]);
        k = k2;
    }
    b.resize(n, 0);
    return b;
}

std::vector<u64> poly_rem(const PrimeField& f, std::span<const u64> a, std::span<const u64> m,
                          std::span<const u64> rev_inv) {
    const std::size_t dm = m.size() - 1;
    const std::size_t la = trimmed_size(a);
    if (la <= dm) return {a.begin(), a.begin() + static_cast<std::ptrdiff_t>(la)};
    const std::size_t qlen = la - dm;

    if (qlen <= kSchoolbookLimit || dm <= kSchoolbookLimit) {
        std::vector<u64> r(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(la));
        for (std::size_t i = la; i-- > dm;) {
            const u64 c = r[i];
            if (c == 0) continue;
            for (std::size_t j = 0; j < dm; ++j) r[i - dm + j] = f.sub(r[i - dm + j], f.mul(c, m[j]));
            r[i] = 0;
        }
        r.resize(dm);
        return r;
    }

    std::vector<u64> computed;
    if (rev_inv.size() < qlen) {
        computed = inverse_series(f, reversed(m, m.size()), qlen);
        rev_inv = computed;
    }
    std::vector<u64> ra = reversed(a.first(la), qlen);
    std::vector<u64> q_rev = mul_trunc(f, ra, rev_inv.first(qlen), qlen);
    std::reverse(q_rev.begin(), q_rev.end());
    std::vector<u64> qm = mul_trunc(f, q_rev, m, dm);
    std::vector<u64> r(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(dm));
    for (std::size_t i = 0; i < dm; ++i) r[i] = f.sub(r[i], qm[i]);
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// DensePoly

DensePoly::DensePoly(const PrimeField& field, std::vector<u64> coeffs) : field_(&field), coeffs_(std::move(coeffs)) {
    for (u64& c : coeffs_) c = field_->reduce(c);
    trim();
}

void DensePoly::trim() noexcept { coeffs_.resize(trimmed_size(coeffs_)); }

u64 DensePoly::eval(u64 x) const noexcept { return horner(*field_, coeffs_, field_->reduce(x)); }

DensePoly DensePoly::derivative() const {
    if (coeffs_.size() <= 1) return DensePoly(*field_);
    std::vector<u64> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = field_->mul(coeffs_[i], field_->reduce(i));
    return {*field_, std::move(d)};
}

DensePoly operator+(const DensePoly& a, const DensePoly& b) {
    require_same_field(a.field(), b.field(), "DensePoly::operator+");
    std::vector<u64> out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.field().add(a[i], b[i]);
    return {a.field(), std::move(out)};
}

DensePoly operator-(const DensePoly& a, const DensePoly& b) {
    require_same_field(a.field(), b.field(), "DensePoly::operator-");
    std::vector<u64> out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.field().sub(a[i], b[i]);
    return {a.field(), std::move(out)};
}

DensePoly poly_mul(const DensePoly& a, const DensePoly& b) {
    require_same_field(a.field(), b.field(), "poly_mul");
    return {a.field(), detail::mul_raw(a.field(), a.coeffs(), b.coeffs())};
}

// ---------------------------------------------------------------------------
// PointSet and SubproductTree

PointSet::PointSet(const PrimeField& field, std::vector<u64> points) : field_(&field), points_(std::move(points)) {
    for (u64 x : points_) {
        if (x >= field.modulus()) throw std::invalid_argument("PointSet: point is not a canonical residue");
    }
    std::vector<u64> sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("PointSet: points must be pairwise distinct");
    }
}

bool PointSet::all_nonzero() const noexcept {
    return std::none_of(points_.begin(), points_.end(), [](u64 x) { return x == 0; });
}

SubproductTree::SubproductTree(const PointSet& points) : points_(points) {
    if (!points_.empty()) {
        nodes_.reserve(2 * points_.size());
        build(0, points_.size());
        const auto& root = nodes_[0].poly;
        root_rev_inv_ = detail::inverse_series(points_.field(), reversed(root, root.size()), points_.size());
    }
}

int SubproductTree::build(std::size_t begin, std::size_t end) {
    const PrimeField& f = points_.field();
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end, -1, -1, {}, {}});
    std::vector<u64> poly;
    if (end - begin == 1) {
        poly = {f.neg(points_.points()[begin]), 1};
    } else {
        const std::size_t mid = begin + (end - begin) / 2;
        const int l = build(begin, mid);
        const int r = build(mid, end);
        nodes_[id].left = l;
        nodes_[id].right = r;
        const std::size_t deg = end - begin;
        const std::size_t len = std::bit_ceil(deg);
        if (std::min(mid - begin, end - mid) >= kNttLimit && detail::ntt_supports(f, len)) {
            nodes_[l].hat = detail::ntt_forward(f, nodes_[l].poly, len);
            nodes_[r].hat = detail::ntt_forward(f, nodes_[r].poly, len);
            // The monic product has deg + 1 coefficients; when deg = len its
            // leading 1 wraps onto the constant term.
            poly = detail::ntt_pointwise_inverse(f, nodes_[l].hat, nodes_[r].hat);
            if (deg == len) {
                poly[0] = f.sub(poly[0], 1);
                poly.push_back(1);
            } else {
                poly.resize(deg + 1);
            }
        } else {
            poly = detail::mul_raw(f, nodes_[l].poly, nodes_[r].poly);
        }
    }
    nodes_[id].poly = std::move(poly);
    return id;
}

DensePoly SubproductTree::root() const {
    if (nodes_.empty()) return {points_.field(), {1}};
    return {points_.field(), nodes_[0].poly};
}

// Transpose of the numerator cascade N_v = N_l D_r + N_r D_l followed by a
// product with 1/D mod u^n, where D_v = rev(poly_v) = prod (1 - w_i u).
std::vector<u64> SubproductTree::evaluate(std::span<const u64> poly) const {
    const std::size_t n = points_.size();
    std::vector<u64> out(n, 0);
    if (nodes_.empty()) return out;
    const PrimeField& f = points_.field();
    std::vector<u64> a;
    if (trimmed_size(poly) > n) a = detail::poly_rem(f, poly, nodes_[0].poly);
    else a.assign(poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(std::min(poly.size(), n)));
    a.resize(n, 0);
    // y_k = sum_{j >= k} I_{j-k} a_j, read off I * rev(a)
    const std::vector<u64> c = detail::mul_trunc(f, root_rev_inv_, reversed(a, n), n);
    std::vector<u64> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = c[n - 1 - k];
    evaluate_node(0, y, out);
    return out;
}

void SubproductTree::evaluate_node(int id, std::span<const u64> y, std::vector<u64>& out) const {
    const Node& node = nodes_[id];
    if (node.left < 0) {
        out[node.begin] = y[0];
        return;
    }
    const PrimeField& f = points_.field();
    const Node& l = nodes_[node.left];
    const Node& r = nodes_[node.right];
    const std::size_t nl = l.end - l.begin, nr = r.end - r.begin;
    if (!l.hat.empty()) {
        // poly_r * y modulo u^len - 1 wraps only onto indices below nr, and likewise for l
        const std::vector<u64> y_hat = detail::ntt_forward(f, y, l.hat.size());
        const std::vector<u64> cl = detail::ntt_pointwise_inverse(f, r.hat, y_hat);
        evaluate_node(node.left, std::span<const u64>(cl).subspan(nr, nl), out);
        const std::vector<u64> cr = detail::ntt_pointwise_inverse(f, l.hat, y_hat);
        evaluate_node(node.right, std::span<const u64>(cr).subspan(nl, nr), out);
        return;
    }
    evaluate_node(node.left, detail::middle_product(f, r.poly, y, nr, nl), out);
    evaluate_node(node.right, detail::middle_product(f, l.poly, y, nl, nr), out);
}

std::vector<u64> SubproductTree::linear_combination(std::span<const u64> weights) const {
    if (weights.size() != points_.size()) throw std::invalid_argument("linear_combination: size mismatch");
    if (nodes_.empty()) return {};
    return combine_node(0, weights);
}

std::vector<u64> SubproductTree::combine_node(int id, std::span<const u64> weights) const {
    const Node& node = nodes_[id];
    if (node.left < 0) return {weights[node.begin]};
    const PrimeField& f = points_.field();
    std::vector<u64> lhs = detail::mul_raw(f, combine_node(node.left, weights), nodes_[node.right].poly);
    std::vector<u64> rhs = detail::mul_raw(f, combine_node(node.right, weights), nodes_[node.left].poly);
    add_into(f, lhs, rhs);
    lhs.resize(node.end - node.begin);
    return lhs;
}

std::vector<u64> multipoint_eval(const DensePoly& a, const PointSet& points) {
    require_same_field(a.field(), points.field(), "multipoint_eval");
    return SubproductTree(points).evaluate(a.coeffs());
}

DensePoly interpolate(const PointSet& points, std::span<const u64> values) {
    if (values.size() != points.size()) throw std::invalid_argument("interpolate: need one value per point");
    const PrimeField& f = points.field();
    if (points.empty()) return DensePoly(f);
    SubproductTree tree(points);
    std::vector<u64> w = tree.evaluate(tree.root().derivative().coeffs());
    f.batch_inv(w);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = f.mul(w[i], f.reduce(values[i]));
    return {f, tree.linear_combination(w)};
}

// ---------------------------------------------------------------------------
// Transposed evaluation

TransposedEvaluator::TransposedEvaluator(const PointSet& points, std::size_t s)
    : field_(&points.field()), points_(points.points().begin(), points.points().end()), s_(s) {
    if (s_ == 0) return;
    nodes_.reserve(2 * points_.size());
    for (std::size_t start = 0; start < points_.size(); start += s_) {
        const int root = build(start, std::min(start + s_, points_.size()));
        blocks_.push_back({root, detail::inverse_series(*field_, nodes_[root].denom, s_)});
    }
}

int TransposedEvaluator::build(std::size_t begin, std::size_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end, -1, -1, {}, {}});
    if (end - begin == 1) {
        nodes_[id].denom = {1, field_->neg(points_[begin])};
        return id;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    // Numerator products at this node have end - begin coefficients, so a
    // cyclic transform of that length computes them exactly.
    const std::size_t len = std::bit_ceil(end - begin);
    if (std::min(mid - begin, end - mid) >= kNttLimit && detail::ntt_supports(*field_, len)) {
        nodes_[l].hat = detail::ntt_forward(*field_, nodes_[l].denom, len);
        nodes_[r].hat = detail::ntt_forward(*field_, nodes_[r].denom, len);
    }
    nodes_[id].denom = detail::mul_raw(*field_, nodes_[l].denom, nodes_[r].denom);
    return id;
}

std::vector<u64> TransposedEvaluator::numerator(int id, std::span<const u64> a) const {
    const Node& node = nodes_[id];
    if (node.left < 0) return {field_->reduce(a[node.begin])};
    // N = N_L * D_R + N_R * D_L
    const Node& l = nodes_[node.left];
    const Node& r = nodes_[node.right];
    std::vector<u64> lhs, rhs;
    if (!l.hat.empty()) {
        const std::size_t len = l.hat.size();
        lhs = detail::ntt_pointwise_inverse(*field_, detail::ntt_forward(*field_, numerator(node.left, a), len), r.hat);
        rhs = detail::ntt_pointwise_inverse(*field_, detail::ntt_forward(*field_, numerator(node.right, a), len), l.hat);
    } else {
        lhs = detail::mul_raw(*field_, numerator(node.left, a), r.denom);
        rhs = detail::mul_raw(*field_, numerator(node.right, a), l.denom);
    }
    add_into(*field_, lhs, rhs);
    lhs.resize(node.end - node.begin);
    return lhs;
}

std::vector<u64> TransposedEvaluator::apply(std::span<const u64> a) const {
    if (a.size() != points_.size()) throw std::invalid_argument("transposed_eval: need one value per point");
    std::vector<u64> out(s_, 0);
    for (const Block& block : blocks_) {
        std::vector<u64> part = detail::mul_trunc(*field_, numerator(block.root, a), block.denom_inv, s_);
        add_into(*field_, out, part);
    }
    return out;
}

namespace {

PointSet inverted(const PointSet& points) {
    if (!points.all_nonzero()) throw std::invalid_argument("transposed_interp: points must be nonzero");
    std::vector<u64> inv(points.points().begin(), points.points().end());
    points.field().batch_inv(inv);
    return {points.field(), std::move(inv)};
}

} // namespace

TransposedInterpolator::TransposedInterpolator(const PointSet& points)
    : field_(&points.field()), inverted_tree_(inverted(points)) {
    const PrimeField& f = *field_;
    // prod (1 - w_i u) = prod(-w_i) * prod (u - 1/w_i)
    u64 lead = 1;
    for (u64 w : points.points()) lead = f.mul(lead, f.neg(w));
    const DensePoly root = inverted_tree_.root();
    denom_.assign(root.coeffs().begin(), root.coeffs().end());
    for (u64& c : denom_) c = f.mul(c, lead);

    std::vector<u64> minus_u_dprime(denom_.size(), 0);
    for (std::size_t k = 1; k < denom_.size(); ++k) minus_u_dprime[k] = f.neg(f.mul(f.reduce(k), denom_[k]));
    weight_inv_ = inverted_tree_.evaluate(minus_u_dprime);
    f.batch_inv(weight_inv_);
}

std::vector<u64> TransposedInterpolator::apply(std::span<const u64> b) const {
    const std::size_t s = weight_inv_.size();
    if (b.size() != s) throw std::invalid_argument("transposed_interp: need one value per point");
    if (s == 0) return {};
    std::vector<u64> reduced(b.begin(), b.end());
    for (u64& x : reduced) x = field_->reduce(x);
    std::vector<u64> values = inverted_tree_.evaluate(detail::mul_trunc(*field_, reduced, denom_, s));
    for (std::size_t i = 0; i < s; ++i) values[i] = field_->mul(values[i], weight_inv_[i]);
    return values;
}

std::vector<u64> transposed_eval(std::span<const u64> a, const PointSet& points, std::size_t s) {
    return TransposedEvaluator(points, s).apply(a);
}

std::vector<u64> transposed_interp(std::span<const u64> b, const PointSet& points) {
    return TransposedInterpolator(points).apply(b);
}

} // namespace sparsemul
