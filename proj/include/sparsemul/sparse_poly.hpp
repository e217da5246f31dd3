#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sparsemul/prime_field.hpp"

namespace sparsemul {

/// Exponent vector (i_1, ..., i_n) of the monomial z_1^i_1 ... z_n^i_n.
/// Ordered lexicographically.
class Exponent {
public:
    Exponent() = default;
    explicit Exponent(std::size_t nvars) : parts_(nvars, 0) {}
    Exponent(std::initializer_list<u64> parts) : parts_(parts) {}
    explicit Exponent(std::vector<u64> parts) : parts_(std::move(parts)) {}

    std::size_t nvars() const noexcept { return parts_.size(); }
    std::span<const u64> parts() const noexcept { return parts_; }
    u64 operator[](std::size_t j) const noexcept { return parts_[j]; }
    u64& operator[](std::size_t j) noexcept { return parts_[j]; }

    u64 total_degree() const noexcept {
        u64 sum = 0;
        for (u64 x : parts_) sum += x;
        return sum;
    }

    /// sum_j ceil(log2(i_j + 1)): the size of the exponent written in binary.
    u64 bit_size() const noexcept {
        u64 sum = 0;
        for (u64 x : parts_) sum += static_cast<u64>(std::bit_width(x));
        return sum;
    }

    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        if (a.nvars() != b.nvars()) throw std::invalid_argument("Exponent: variable count mismatch");
        Exponent out(a);
        for (std::size_t j = 0; j < a.parts_.size(); ++j) out.parts_[j] += b.parts_[j];
        return out;
    }

    friend bool operator==(const Exponent&, const Exponent&) = default;
    friend auto operator<=>(const Exponent&, const Exponent&) = default;

private:
    std::vector<u64> parts_;
};

struct ExponentHash {
    std::size_t operator()(const Exponent& e) const noexcept {
        u64 h = 0x9e3779b97f4a7c15ULL;
        for (u64 x : e.parts()) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 0xbf58476d1ce4e5b9ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

/// Zero test for coefficient types; FieldElement needs its own.
template <class C>
struct CoeffTraits {
    static bool is_zero(const C& c) { return c == 0; }
};

template <>
struct CoeffTraits<FieldElement> {
    static bool is_zero(const FieldElement& c) { return c.is_zero(); }
};

/// Sorted set of distinct exponents in a fixed number of variables.
class SupportSet {
public:
    explicit SupportSet(std::size_t nvars) : nvars_(nvars) { check_nvars(); }
    SupportSet(std::size_t nvars, std::vector<Exponent> exponents) : nvars_(nvars), exps_(std::move(exponents)) {
        check_nvars();
        for (const Exponent& e : exps_) {
            if (e.nvars() != nvars_) throw std::invalid_argument("SupportSet: exponent has wrong variable count");
        }
        std::sort(exps_.begin(), exps_.end());
        exps_.erase(std::unique(exps_.begin(), exps_.end()), exps_.end());
    }

    std::size_t nvars() const noexcept { return nvars_; }
    std::size_t size() const noexcept { return exps_.size(); }
    bool empty() const noexcept { return exps_.empty(); }
    const Exponent& operator[](std::size_t i) const noexcept { return exps_[i]; }
    auto begin() const noexcept { return exps_.begin(); }
    auto end() const noexcept { return exps_.end(); }
    std::span<const Exponent> exponents() const noexcept { return exps_; }

    bool contains(const Exponent& e) const { return std::binary_search(exps_.begin(), exps_.end(), e); }

    /// Total bit-size sum over the set of Exponent::bit_size().
    u64 bit_size() const noexcept {
        u64 sum = 0;
        for (const Exponent& e : exps_) sum += e.bit_size();
        return sum;
    }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
    void check_nvars() const {
        if (nvars_ == 0) throw std::invalid_argument("SupportSet: need at least one variable");
    }

    std::size_t nvars_;
    std::vector<Exponent> exps_;
};

template <class C>
struct Term {
    Exponent exponent;
    C coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse multivariate polynomial: exponent-coefficient pairs in canonical
/// form (lexicographically sorted, distinct exponents, no zero coefficient).
template <class C>
class SparsePoly {
public:
    using coeff_type = C;

    explicit SparsePoly(std::size_t nvars) : nvars_(nvars) {
        if (nvars_ == 0) throw std::invalid_argument("SparsePoly: need at least one variable");
    }

    /// Canonicalizes: sorts, sums repeated exponents and drops zeros.
    SparsePoly(std::size_t nvars, std::vector<Term<C>> terms) : SparsePoly(nvars) {
        for (const auto& t : terms) {
            if (t.exponent.nvars() != nvars_) throw std::invalid_argument("SparsePoly: exponent has wrong variable count");
        }
        std::sort(terms.begin(), terms.end(), [](const Term<C>& a, const Term<C>& b) { return a.exponent < b.exponent; });
        for (auto& t : terms) {
            if (!terms_.empty() && terms_.back().exponent == t.exponent) {
                terms_.back().coeff += t.coeff;
            } else {
                terms_.push_back(std::move(t));
            }
        }
        std::erase_if(terms_, [](const Term<C>& t) { return CoeffTraits<C>::is_zero(t.coeff); });
    }

    std::size_t nvars() const noexcept { return nvars_; }
    std::span<const Term<C>> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    SupportSet support() const {
        std::vector<Exponent> exps;
        exps.reserve(terms_.size());
        for (const auto& t : terms_) exps.push_back(t.exponent);
        return {nvars_, std::move(exps)};
    }

    std::vector<C> coefficients() const {
        std::vector<C> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back(t.coeff);
        return out;
    }

    /// Coefficient of z^e, or nullptr when it is zero.
    const C* find(const Exponent& e) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                                   [](const Term<C>& t, const Exponent& x) { return t.exponent < x; });
        return it != terms_.end() && it->exponent == e ? &it->coeff : nullptr;
    }

    /// Applies f to every coefficient; zero images are dropped.
    template <class F>
    auto map_coeffs(F&& f) const -> SparsePoly<std::invoke_result_t<F&, const C&>> {
        using D = std::invoke_result_t<F&, const C&>;
        std::vector<Term<D>> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back({t.exponent, f(t.coeff)});
        return {nvars_, std::move(out)};
    }

    friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

private:
    std::size_t nvars_;
    std::vector<Term<C>> terms_;
};

/// Schoolbook product: all s_P * s_Q monomial products, accumulated by exponent.
template <class C>
SparsePoly<C> naive_mul(const SparsePoly<C>& p, const SparsePoly<C>& q) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("naive_mul: variable count mismatch");
    std::unordered_map<Exponent, C, ExponentHash> acc;
    acc.reserve(p.size() * q.size());
    for (const auto& a : p.terms()) {
        for (const auto& b : q.terms()) {
            C prod = a.coeff * b.coeff;
            auto [it, inserted] = acc.try_emplace(a.exponent + b.exponent, prod);
            if (!inserted) it->second += prod;
        }
    }
    std::vector<Term<C>> terms;
    terms.reserve(acc.size());
    for (auto& [e, c] : acc) terms.push_back({e, std::move(c)});
    return {p.nvars(), std::move(terms)};
}

/// {i + j : i in supp P, j in supp Q}; always contains supp(P*Q).
template <class C>
SupportSet sumset_support(const SparsePoly<C>& p, const SparsePoly<C>& q) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("sumset_support: variable count mismatch");
    std::vector<Exponent> sums;
    sums.reserve(p.size() * q.size());
    for (const auto& a : p.terms())
        for (const auto& b : q.terms()) sums.push_back(a.exponent + b.exponent);
    return {p.nvars(), std::move(sums)};
}

/// Sizes and bit-sizes of the supports involved in one product.
struct SupportStats {
    u64 s_p = 0, s_q = 0, s = 0;
    u64 e_p = 0, e_q = 0, e = 0;
    u64 sigma = 0;   // s_p + s_q + s
    u64 epsilon = 0; // e_p + e_q + e

    friend bool operator==(const SupportStats&, const SupportStats&) = default;
};

inline SupportStats support_stats(const SupportSet& p, const SupportSet& q, const SupportSet& x) {
    SupportStats st;
    st.s_p = p.size();
    st.s_q = q.size();
    st.s = x.size();
    st.e_p = p.bit_size();
    st.e_q = q.bit_size();
    st.e = x.bit_size();
    st.sigma = st.s_p + st.s_q + st.s;
    st.epsilon = st.e_p + st.e_q + st.e;
    return st;
}

template <class C>
SupportStats support_stats(const SparsePoly<C>& p, const SparsePoly<C>& q, const SupportSet& x) {
    return support_stats(p.support(), q.support(), x);
}

} // namespace sparsemul
