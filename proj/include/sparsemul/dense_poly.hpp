#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sparsemul/prime_field.hpp"

namespace sparsemul {

/// Dense univariate polynomial over F_p; coeffs()[i] is the coefficient of u^i.
///
/// Always trimmed: the last stored coefficient is nonzero, and the zero
/// polynomial has no coefficients.
class DensePoly {
public:
    explicit DensePoly(const PrimeField& field) : field_(&field) {}
    DensePoly(const PrimeField& field, std::vector<u64> coeffs);

    const PrimeField& field() const noexcept { return *field_; }
    std::span<const u64> coeffs() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }

    u64 operator[](std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
    FieldElement coeff(std::size_t i) const { return {*field_, (*this)[i]}; }

    u64 eval(u64 x) const noexcept;
    DensePoly derivative() const;

    friend DensePoly operator+(const DensePoly& a, const DensePoly& b);
    friend DensePoly operator-(const DensePoly& a, const DensePoly& b);
    friend bool operator==(const DensePoly& a, const DensePoly& b) noexcept {
        return *a.field_ == *b.field_ && a.coeffs_ == b.coeffs_;
    }

private:
    void trim() noexcept;

    const PrimeField* field_;
    std::vector<u64> coeffs_;
};

/// Exact product. Schoolbook for short operands, Karatsuba in the middle
/// range, then a number-theoretic transform: directly when 2^k | p - 1 covers
/// the output length, otherwise over three auxiliary primes with CRT.
DensePoly poly_mul(const DensePoly& a, const DensePoly& b);

/// Pairwise-distinct evaluation points in a common field.
class PointSet {
public:
    /// Throws std::invalid_argument on duplicates.
    PointSet(const PrimeField& field, std::vector<u64> points);

    const PrimeField& field() const noexcept { return *field_; }
    std::span<const u64> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    bool all_nonzero() const noexcept;

private:
    const PrimeField* field_;
    std::vector<u64> points_;
};

/// Binary tree of the partial products of (u - w_i).
///
/// Multipoint evaluation runs the transposed numerator cascade down the tree:
/// one series inverse at the root, then a middle product per child.
class SubproductTree {
public:
    explicit SubproductTree(const PointSet& points);

    const PointSet& points() const noexcept { return points_; }
    /// The product of all (u - w_i); the constant 1 for an empty point set.
    DensePoly root() const;
    std::size_t node_count() const noexcept { return nodes_.size(); }

    /// Values of the polynomial with the given coefficients at every point.
    std::vector<u64> evaluate(std::span<const u64> poly) const;

    /// sum_i c_i * prod_{k != i} (u - w_k), combined up the tree.
    std::vector<u64> linear_combination(std::span<const u64> weights) const;

private:
    struct Node {
        std::size_t begin, end;
        int left = -1, right = -1;
        std::vector<u64> poly; // monic, degree end - begin
        std::vector<u64> hat;  // transform of poly at the parent's length, when the parent uses transforms
    };

    int build(std::size_t begin, std::size_t end);
    void evaluate_node(int node, std::span<const u64> y, std::vector<u64>& out) const;
    std::vector<u64> combine_node(int node, std::span<const u64> weights) const;

    PointSet points_;
    std::vector<Node> nodes_;
    std::vector<u64> root_rev_inv_; // rev(root)^{-1} mod u^{|points|}
};

/// result[i] = a(points[i]).
std::vector<u64> multipoint_eval(const DensePoly& a, const PointSet& points);

/// The unique polynomial of degree < |points| taking the given values.
DensePoly interpolate(const PointSet& points, std::span<const u64> values);

/// Multiplication by the transposed Vandermonde matrix:
/// b_j = sum_i a_i * w_i^j for j < s.
///
/// Reads b off the power series expansion of sum_i a_i / (1 - w_i u): the
/// numerator and denominator are built by binary splitting over blocks of at
/// most s points, then divided at order s. Denominator trees and their
/// inverses depend only on the points and are built once here, so reuse an
/// instance when transforming many vectors over the same points.
class TransposedEvaluator {
public:
    TransposedEvaluator(const PointSet& points, std::size_t s);

    std::size_t output_size() const noexcept { return s_; }
    std::vector<u64> apply(std::span<const u64> a) const;

private:
    struct Node {
        std::size_t begin, end;
        int left = -1, right = -1;
        std::vector<u64> denom; // prod (1 - w_i u) over [begin, end)
        std::vector<u64> hat;   // transform of denom at the parent's length, when the parent uses transforms
    };
    struct Block {
        int root;
        std::vector<u64> denom_inv; // denominator^{-1} mod u^s
    };

    int build(std::size_t begin, std::size_t end);
    std::vector<u64> numerator(int node, std::span<const u64> a) const;

    const PrimeField* field_;
    std::vector<u64> points_;
    std::size_t s_;
    std::vector<Node> nodes_;
    std::vector<Block> blocks_;
};

/// Inverse of TransposedEvaluator for |points| = s nonzero distinct points.
///
/// With B = sum b_j u^j, D = prod (1 - w_i u) and S = B*D mod u^s, one has
/// S(1/w_i) = -a_i * (u D')(1/w_i). Both sides are evaluated at the inverted
/// points by one shared subproduct tree; the values of -u D' are inverted once.
class TransposedInterpolator {
public:
    explicit TransposedInterpolator(const PointSet& points);

    std::vector<u64> apply(std::span<const u64> b) const;

private:
    const PrimeField* field_;
    SubproductTree inverted_tree_;
    std::vector<u64> denom_;     // D
    std::vector<u64> weight_inv_; // 1 / (-u D')(1/w_i)
};

/// One-shot wrappers of the classes above.
std::vector<u64> transposed_eval(std::span<const u64> a, const PointSet& points, std::size_t s);
std::vector<u64> transposed_interp(std::span<const u64> b, const PointSet& points);

namespace detail {

/// Untrimmed product of raw coefficient vectors, length |a| + |b| - 1.
std::vector<u64> mul_raw(const PrimeField& f, std::span<const u64> a, std::span<const u64> b);

/// Product truncated to its first n coefficients.
std::vector<u64> mul_trunc(const PrimeField& f, std::span<const u64> a, std::span<const u64> b, std::size_t n);

/// a^{-1} mod u^n by Newton iteration; a[0] must be nonzero.
std::vector<u64> inverse_series(const PrimeField& f, std::span<const u64> a, std::size_t n);

/// Coefficients offset .. offset + count - 1 of g * y.
std::vector<u64> middle_product(const PrimeField& f, std::span<const u64> g, std::span<const u64> y, std::size_t offset,
                                std::size_t count);

/// a mod m for monic m. rev_inv, when non-empty, must hold rev(m)^{-1} to at
/// least |a| - deg(m) coefficients.
std::vector<u64> poly_rem(const PrimeField& f, std::span<const u64> a, std::span<const u64> m,
                          std::span<const u64> rev_inv = {});

} // namespace detail

} // namespace sparsemul
