#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sparsemul/prime_field.hpp"

namespace sparsemul {

enum class BenchMode { Sparse, Series, Integer };
enum class OutputFormat { Csv, Markdown };

struct BenchConfig {
    BenchMode mode = BenchMode::Series;
    std::size_t nvars = 2;
    /// Truncation degrees in series mode, term counts otherwise.
    std::vector<u64> params{12, 22, 42};
    u64 prime = 3221225473ULL;
    u64 seed = 42;
    unsigned trials = 5;
    OutputFormat format = OutputFormat::Csv;
    /// A cell whose warm-up run exceeds this is left empty, and so are the
    /// cells of that algorithm for every later parameter.
    double timeout_ms = 60000;
    bool run_naive = true;
    /// Sparse and integer modes: exponents drawn from [0, max_exp]^n, shrunk
    /// when the product box would not fit below the prime.
    u64 max_exp = 50;
    /// Integer mode: coefficient bit-length.
    unsigned coeff_bits = 64;
};

struct BenchRow {
    u64 param = 0;
    std::optional<double> naive_ms;
    std::optional<double> fast_ms;
    /// |I_d| in series mode; the size of the sumset support otherwise.
    u64 size = 0;
    /// One dense univariate product of `size` coefficients.
    std::optional<double> mul_ms;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

/// Times naive and fast products on seeded random instances. Parameters that
/// cannot run (order too small) are skipped with a line on `notices`.
std::vector<BenchRow> run_bench(const BenchConfig& config, std::ostream* notices = nullptr);

/// Median of the samples, averaging the middle pair for even counts.
double median(std::vector<double> samples);

/// Exponent bound so that the Kronecker box of a product of two polynomials
/// with exponents up to the bound stays within the order p - 1.
u64 fitting_exponent_bound(std::size_t nvars, u64 max_exp, u64 prime);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, BenchMode mode);
/// Throws ParseError on malformed input.
std::vector<BenchRow> parse_csv(std::istream& in);
/// One column per parameter, as in the usual timing tables.
void write_markdown(std::ostream& out, const std::vector<BenchRow>& rows, BenchMode mode);

struct VerifyConfig {
    /// fp, z, q, f64 or all.
    std::string ring = "all";
    u64 seed = 42;
    unsigned instances = 20;
    /// Flip one coefficient of the first fast result, to check that failures surface.
    bool inject_fault = false;
};

struct VerifyReport {
    std::string text;
    std::size_t passed = 0;
    std::size_t failed = 0;
};

/// Fast products against the naive oracles over the selected rings. The
/// report holds no timings, so equal seeds give byte-identical text.
/// Throws std::invalid_argument on an unknown ring.
VerifyReport verify_mode(const VerifyConfig& config);

} // namespace sparsemul
