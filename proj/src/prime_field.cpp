#include "sparsemul/prime_field.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <string>

namespace sparsemul {

u64 powmod_u64(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 q : kSmall) {
        if (n % q == 0) return n == q;
    }
    u64 odd = n - 1;
    unsigned shift = 0;
    while ((odd & 1) == 0) {
        odd >>= 1;
        ++shift;
    }
    // These twelve bases are a proven deterministic witness set below 3.3e24.
    for (u64 a : kSmall) {
        u64 x = powmod_u64(a, odd, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < shift; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

// Brent's variant of Pollard rho; n must be odd and composite.
u64 pollard_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return (mulmod_u64(x, x, n) + c) % n; };
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        constexpr u64 kBatch = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
                    y = f(y);
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += kBatch;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(u64 n, std::map<u64, unsigned>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    u64 f = pollard_brent(n);
    factor_into(f, out);
    factor_into(n / f, out);
}

} // namespace

std::vector<std::pair<u64, unsigned>> factor_u64(u64 n) {
    if (n == 0) throw std::invalid_argument("factor_u64: zero has no factorization");
    std::map<u64, unsigned> found;
    for (u64 q = 2; q < (u64{1} << 16) && q * q <= n; q += (q == 2 ? 1 : 2)) {
        while (n % q == 0) {
            ++found[q];
            n /= q;
        }
    }
    factor_into(n, found);
    return {found.begin(), found.end()};
}

PrimeField::PrimeField(u64 p) : p_(p) {
    if (p <= 2 || p >= kMaxModulus || !is_prime_u64(p)) {
        throw std::invalid_argument("PrimeField: modulus must be an odd prime below 2^62, got " + std::to_string(p));
    }
    factors_ = factor_u64(p - 1);
    two_adicity_ = static_cast<unsigned>(std::countr_zero(p - 1));
    // Any quadratic nonresidue raised to the odd part of p - 1 has order 2^two_adicity.
    u64 x = 2;
    while (pow(x, (p - 1) / 2) != p - 1) ++x;
    two_adic_root_ = pow(x, (p - 1) >> two_adicity_);
}

u64 PrimeField::reduce_signed(std::int64_t x) const noexcept {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    return r < 0 ? static_cast<u64>(r + static_cast<std::int64_t>(p_)) : static_cast<u64>(r);
}

u64 PrimeField::inv(u64 a) const {
    a %= p_;
    if (a == 0) throw std::domain_error("PrimeField::inv: division by zero");
    // Extended Euclid on (p, a), tracking only the coefficient of a.
    std::int64_t t0 = 0, t1 = 1;
    u64 r0 = p_, r1 = a;
    while (r1 != 0) {
        u64 q = r0 / r1;
        std::int64_t t2 = t0 - static_cast<std::int64_t>(q) * t1;
        u64 r2 = r0 - q * r1;
        t0 = t1;
        t1 = t2;
        r0 = r1;
        r1 = r2;
    }
    return reduce_signed(t0);
}

void PrimeField::batch_inv(std::vector<u64>& values) const {
    if (values.empty()) return;
    std::vector<u64> prefix(values.size());
    u64 acc = 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0) throw std::domain_error("PrimeField::batch_inv: division by zero");
        prefix[i] = acc;
        acc = mul(acc, values[i]);
    }
    u64 inv_acc = inv(acc);
    for (std::size_t i = values.size(); i-- > 0;) {
        u64 vi = values[i];
        values[i] = mul(inv_acc, prefix[i]);
        inv_acc = mul(inv_acc, vi);
    }
}

void FieldElement::check_same_field(const FieldElement& o) const {
    if (!(*field_ == *o.field_)) {
        throw std::invalid_argument("FieldElement: operands belong to different fields (" +
                                    std::to_string(field_->modulus()) + " vs " + std::to_string(o.field_->modulus()) +
                                    ")");
    }
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    check_same_field(o);
    residue_ = field_->add(residue_, o.residue_);
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    check_same_field(o);
    residue_ = field_->sub(residue_, o.residue_);
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    check_same_field(o);
    residue_ = field_->mul(residue_, o.residue_);
    return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
    check_same_field(o);
    residue_ = field_->mul(residue_, field_->inv(o.residue_));
    return *this;
}

FieldElement FieldElement::inv() const { return {*field_, field_->inv(residue_)}; }

u64 element_order(const FieldElement& w) {
    if (w.is_zero()) throw std::domain_error("element_order: zero has no multiplicative order");
    const PrimeField& f = w.field();
    u64 order = f.modulus() - 1;
    for (auto [q, mult] : f.order_factorization()) {
        for (unsigned k = 0; k < mult && f.pow(w.residue(), order / q) == 1; ++k) order /= q;
    }
    return order;
}

FieldElement find_order_element(const PrimeField& field, u64 min_order) {
    const u64 group_order = field.modulus() - 1;
    if (min_order > group_order) {
        throw FieldTooSmall("find_order_element: field too small, p - 1 = " + std::to_string(group_order) +
                            " < required order " + std::to_string(min_order));
    }
    for (u64 g = 2; g < field.modulus(); ++g) {
        bool primitive = std::all_of(field.order_factorization().begin(), field.order_factorization().end(),
                                     [&](const auto& f) { return field.pow(g, group_order / f.first) != 1; });
        if (primitive) return {field, g};
    }
    // Unreachable: the multiplicative group of a prime field is cyclic.
    throw std::logic_error("find_order_element: no primitive root found");
}

} // namespace sparsemul
