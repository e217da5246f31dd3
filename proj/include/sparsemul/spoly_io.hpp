#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "sparsemul/coeff_rings.hpp"

namespace sparsemul {

/// Malformed SPOLY or support text; the message carries the line number.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Ring { Fp, Z, Q, F64 };

const char* ring_name(Ring r) noexcept;

/// A polynomial in the SPOLY 1 text format.
///
/// The first non-comment line is the header, a list of key/value pairs:
///   p <modulus> n <nvars> [trunc <d>]
///   ring z n <nvars>
///   ring q n <nvars>
///   ring f64 [eta <eta>] [prec <bits>] n <nvars>
/// followed by one term per line, the n exponents and then the coefficient
/// (an integer, a/b for ring q, a decimal for ring f64). '#' starts a comment.
struct SpolyDocument {
    Ring ring = Ring::Fp;
    std::size_t nvars = 1;
    std::shared_ptr<const PrimeField> field; // ring Fp only
    std::optional<u64> trunc;
    int eta = 0;
    int precision = 53;
    std::variant<SparsePoly<FieldElement>, IntPoly, RatPoly, SparsePoly<double>> poly{IntPoly(1)};

    FloatPoly float_poly() const;
};

SpolyDocument parse_spoly(std::istream& in);
SpolyDocument parse_spoly(const std::string& text);
void write_spoly(std::ostream& out, const SpolyDocument& doc);
std::string to_spoly(const SpolyDocument& doc);

/// Support files: header `supp n <nvars>`, then one exponent per line.
SupportSet parse_support(std::istream& in);
void write_support(std::ostream& out, const SupportSet& x);

} // namespace sparsemul
