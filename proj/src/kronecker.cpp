#include "sparsemul/kronecker.hpp"

#include <algorithm>
#include <string>

namespace sparsemul {

KroneckerMap::KroneckerMap(std::vector<u64> radices) : radices_(std::move(radices)) {
    if (radices_.empty()) throw std::invalid_argument("KroneckerMap: need at least one variable");
    cumulative_.reserve(radices_.size());
    for (u64 d : radices_) {
        if (d == 0) throw std::invalid_argument("KroneckerMap: radix must be positive");
        cumulative_.push_back(total_);
        if (__builtin_mul_overflow(total_, d, &total_))
            throw std::overflow_error("KroneckerMap: box size exceeds 64 bits");
    }
}

bool KroneckerMap::in_box(const Exponent& e) const noexcept {
    if (e.nvars() != radices_.size()) return false;
    for (std::size_t j = 0; j < radices_.size(); ++j)
        if (e[j] >= radices_[j]) return false;
    return true;
}

u64 KroneckerMap::index(const Exponent& e) const {
    if (!in_box(e)) throw std::out_of_range("kronecker_index: exponent outside the radix box");
    u64 k = 0;
    for (std::size_t j = 0; j < radices_.size(); ++j) k += e[j] * cumulative_[j];
    return k;
}

KroneckerMap KroneckerMap::joined(const KroneckerMap& other) const {
    if (other.nvars() != nvars()) throw std::invalid_argument("KroneckerMap: variable count mismatch");
    std::vector<u64> r(radices_);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = std::max(r[j], other.radices_[j]);
    return KroneckerMap(std::move(r));
}

KroneckerMap kronecker_radices(const SupportSet& x) {
    if (x.empty()) throw std::invalid_argument("kronecker_radices: empty support");
    std::vector<u64> r(x.nvars(), 0);
    for (const Exponent& e : x)
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = std::max(r[j], e[j]);
    for (u64& d : r) {
        if (d == ~u64{0}) throw std::overflow_error("kronecker_radices: exponent too large");
        ++d;
    }
    return KroneckerMap(std::move(r));
}

PointSet eval_points(const SupportSet& y, const KroneckerMap& km, const FieldElement& w) {
    const PrimeField& f = w.field();
    if (y.nvars() != km.nvars()) throw std::invalid_argument("eval_points: variable count mismatch");
    if (w.is_zero() || element_order(w) < km.total())
        throw OrderTooSmall("eval_points: order of w is below the Kronecker box size " + std::to_string(km.total()));
    std::vector<u64> base(km.nvars());
    for (std::size_t j = 0; j < base.size(); ++j) base[j] = f.pow(w.residue(), km.cumulative()[j]);
    std::vector<u64> pts;
    pts.reserve(y.size());
    for (const Exponent& e : y) {
        if (!km.in_box(e)) throw std::out_of_range("eval_points: exponent outside the radix box");
        u64 x = 1;
        for (std::size_t j = 0; j < base.size(); ++j)
            if (e[j] != 0) x = f.mul(x, f.pow(base[j], e[j]));
        pts.push_back(x);
    }
    return {f, std::move(pts)};
}

} // namespace sparsemul
