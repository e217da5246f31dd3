#include "sparsemul/sparse_mul.hpp"

#include <stdexcept>

namespace sparsemul {

namespace {

KroneckerMap box_around(const SupportSet& p, const SupportSet& q, const SupportSet& x) {
    if (x.empty()) throw std::invalid_argument("sparse_mul: X must be nonempty");
    KroneckerMap km = kronecker_radices(x);
    if (!p.empty()) km = km.joined(kronecker_radices(p));
    if (!q.empty()) km = km.joined(kronecker_radices(q));
    return km;
}

const PrimeField* common_field(const SparsePoly<FieldElement>& p, const SparsePoly<FieldElement>& q,
                               const FieldElement& w) {
    const PrimeField* f = &w.field();
    for (const auto* poly : {&p, &q})
        for (const auto& t : poly->terms())
            if (!(t.coeff.field() == *f)) throw std::invalid_argument("sparse_mul: coefficient field mismatch");
    return f;
}

std::vector<u64> residues(const SparsePoly<FieldElement>& a) {
    std::vector<u64> out;
    out.reserve(a.size());
    for (const auto& t : a.terms()) out.push_back(t.coeff.residue());
    return out;
}

} // namespace

SparseProductPlan::SparseProductPlan(SupportSet p_support, SupportSet q_support, SupportSet x)
    : p_(std::move(p_support)), q_(std::move(q_support)), x_(std::move(x)),
      km_(box_around(p_, q_, x_)) {
    if (p_.nvars() != x_.nvars() || q_.nvars() != x_.nvars())
        throw std::invalid_argument("sparse_mul: variable count mismatch");
}

std::vector<u64> SparseProductPlan::multiply(const FieldElement& w, std::span<const u64> p_coeffs,
                                             std::span<const u64> q_coeffs) const {
    if (p_coeffs.size() != p_.size() || q_coeffs.size() != q_.size())
        throw std::invalid_argument("sparse_mul: coefficient count does not match the support");
    const PrimeField& f = w.field();
    const std::size_t s = x_.size();
    if (p_.empty() || q_.empty()) return std::vector<u64>(s, 0);

    // Checks the order once; the other point sets reuse the same w and box.
    PointSet x_pts = eval_points(x_, km_, w);
    std::vector<u64> ep = TransposedEvaluator(eval_points(p_, km_, w), s).apply(p_coeffs);
    std::vector<u64> eq = TransposedEvaluator(eval_points(q_, km_, w), s).apply(q_coeffs);
    for (std::size_t k = 0; k < s; ++k) ep[k] = f.mul(ep[k], eq[k]);
    return TransposedInterpolator(x_pts).apply(ep);
}

std::vector<u64> evaluation_vector(const SparsePoly<FieldElement>& a, const KroneckerMap& km,
                                   const FieldElement& w, std::size_t s) {
    if (a.is_zero()) return std::vector<u64>(s, 0);
    common_field(a, a, w);
    return transposed_eval(residues(a), eval_points(a.support(), km, w), s);
}

SparsePoly<FieldElement> sparse_mul_given_support(const SparsePoly<FieldElement>& p,
                                                  const SparsePoly<FieldElement>& q, const SupportSet& x,
                                                  const FieldElement& w, const SparseMulOptions& opts) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("sparse_mul: variable count mismatch");
    const PrimeField& f = *common_field(p, q, w);
    SparseProductPlan plan(p.support(), q.support(), x);
    std::vector<u64> r = plan.multiply(w, residues(p), residues(q));

    std::vector<Term<FieldElement>> terms;
    for (std::size_t k = 0; k < r.size(); ++k)
        if (r[k] != 0) terms.push_back({x[k], FieldElement(f, r[k])});
    SparsePoly<FieldElement> out(p.nvars(), std::move(terms));

    if (opts.debug_check && p.size() * q.size() <= opts.debug_limit && !(out == naive_mul(p, q)))
        throw std::logic_error("sparse_mul: X does not contain the support of the product");
    return out;
}

SparsePoly<FieldElement> sparse_mul(const SparsePoly<FieldElement>& p, const SparsePoly<FieldElement>& q,
                                    const std::optional<SupportSet>& x, const SparseMulOptions& opts) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("sparse_mul: variable count mismatch");
    if (p.is_zero() || q.is_zero()) return SparsePoly<FieldElement>(p.nvars());
    SupportSet xs = x ? *x : sumset_support(p, q);
    const PrimeField& f = p.terms()[0].coeff.field();
    KroneckerMap km = box_around(p.support(), q.support(), xs);
    if (km.total() > f.modulus() - 1)
        throw FieldTooSmall("sparse_mul: the Kronecker box does not fit in the multiplicative group");
    return sparse_mul_given_support(p, q, xs, find_order_element(f, km.total()), opts);
}

} // namespace sparsemul
