#include "sparsemul/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sparsemul/coeff_rings.hpp"
#include "sparsemul/random.hpp"
#include "sparsemul/series.hpp"
#include "sparsemul/spoly_io.hpp"

namespace sparsemul {

namespace {

volatile u64 g_sink = 0;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// Median of `trials` timed runs after one discarded warm-up run. Returns
/// nullopt and sets `dead` when the warm-up alone exceeds the timeout.
template <class F>
std::optional<double> time_cell(F&& fn, const BenchConfig& cfg, bool& dead) {
    if (dead) return std::nullopt;
    auto t0 = std::chrono::steady_clock::now();
    g_sink = g_sink + fn();
    if (elapsed_ms(t0) > cfg.timeout_ms) {
        dead = true;
        return std::nullopt;
    }
    std::vector<double> samples;
    for (unsigned k = 0; k < std::max(1u, cfg.trials); ++k) {
        t0 = std::chrono::steady_clock::now();
        g_sink = g_sink + fn();
        samples.push_back(elapsed_ms(t0));
    }
    return median(std::move(samples));
}

std::string format_ms(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *v);
    return std::string(buf, ptr);
}

const char* param_name(BenchMode mode) { return mode == BenchMode::Series ? "d" : "terms"; }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out(1);
    for (char c : line) {
        if (c == ',') out.emplace_back();
        else if (c != '\r') out.back() += c;
    }
    return out;
}

} // namespace

double median(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("median: no samples");
    std::sort(samples.begin(), samples.end());
    const std::size_t m = samples.size() / 2;
    return samples.size() % 2 ? samples[m] : (samples[m - 1] + samples[m]) / 2;
}

u64 fitting_exponent_bound(std::size_t nvars, u64 max_exp, u64 prime) {
    auto fits = [&](u64 m) {
        // the sumset has partial degrees up to 2m, so radices 2m + 1
        u64 total = 1;
        for (std::size_t j = 0; j < nvars; ++j)
            if (__builtin_mul_overflow(total, 2 * m + 1, &total)) return false;
        return total <= prime - 1;
    };
    while (max_exp > 0 && !fits(max_exp)) --max_exp;
    return max_exp;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg, std::ostream* notices) {
    if (!is_prime_u64(cfg.prime) || cfg.prime <= 2 || cfg.prime >= kMaxModulus)
        throw std::invalid_argument("run_bench: modulus must be an odd prime below 2^62");
    if (cfg.nvars == 0) throw std::invalid_argument("run_bench: need at least one variable");
    const PrimeField f(cfg.prime);
    std::vector<BenchRow> rows;
    bool naive_dead = !cfg.run_naive, fast_dead = false, mul_dead = false;

    for (u64 param : cfg.params) {
        Rng rng(cfg.seed ^ (param * 0x9e3779b97f4a7c15ULL));
        BenchRow row;
        row.param = param;
        if (cfg.mode == BenchMode::Series) {
            const u64 d = param;
            u64 order = 1;
            bool fits = d > 0;
            for (std::size_t j = 1; j < cfg.nvars && fits; ++j)
                fits = !__builtin_mul_overflow(order, d, &order) && order <= cfg.prime - 1;
            if (!fits) {
                if (notices) *notices << "skipping d = " << d << ": d^(n-1) exceeds p - 1\n";
                continue;
            }
            const std::size_t size = InitialSegment::count(cfg.nvars, d);
            std::vector<u64> a(size), b(size);
            for (u64& x : a) x = rng.below(cfg.prime);
            for (u64& x : b) x = rng.below(cfg.prime);
            const TruncatedSeries p(f, cfg.nvars, d, std::move(a)), q(f, cfg.nvars, d, std::move(b));
            const FieldElement w = find_order_element(f, order);
            row.size = size;
            row.fast_ms = time_cell([&] { return series_mul(p, q, w).coeffs()[0]; }, cfg, fast_dead);
            row.naive_ms = time_cell([&] { return naive_series_mul(p, q).coeffs()[0]; }, cfg, naive_dead);
        } else {
            const u64 bound = fitting_exponent_bound(cfg.nvars, cfg.max_exp, cfg.prime);
            if (cfg.mode == BenchMode::Sparse) {
                const auto p = random_fp_poly(rng, f, cfg.nvars, param, bound);
                const auto q = random_fp_poly(rng, f, cfg.nvars, param, bound);
                const SupportSet x = sumset_support(p, q);
                const u64 box = SparseProductPlan(p.support(), q.support(), x).kronecker().total();
                const FieldElement w = find_order_element(f, box);
                row.size = x.size();
                row.fast_ms = time_cell([&] { return sparse_mul_given_support(p, q, x, w).size(); }, cfg, fast_dead);
                row.naive_ms = time_cell([&] { return naive_mul(p, q).size(); }, cfg, naive_dead);
            } else {
                const auto p = random_int_poly(rng, cfg.nvars, param, bound, cfg.coeff_bits);
                const auto q = random_int_poly(rng, cfg.nvars, param, bound, cfg.coeff_bits);
                const SupportSet x = sumset_support(p, q);
                row.size = x.size();
                row.fast_ms = time_cell([&] { return integer_sparse_mul(p, q, x).size(); }, cfg, fast_dead);
                row.naive_ms = time_cell([&] { return naive_mul(p, q).size(); }, cfg, naive_dead);
            }
        }
        std::vector<u64> a(row.size), b(row.size);
        for (u64& v : a) v = rng.below(cfg.prime);
        for (u64& v : b) v = rng.below(cfg.prime);
        const DensePoly da(f, std::move(a)), db(f, std::move(b));
        row.mul_ms = time_cell([&] { return poly_mul(da, db).size(); }, cfg, mul_dead);
        rows.push_back(row);
    }
    return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, BenchMode mode) {
    out << param_name(mode) << ",naive_ms,fast_ms,size,mul_ms\n";
    for (const BenchRow& r : rows)
        out << r.param << ',' << format_ms(r.naive_ms) << ',' << format_ms(r.fast_ms) << ',' << r.size << ','
            << format_ms(r.mul_ms) << '\n';
}

std::vector<BenchRow> parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    auto fail = [&](const std::string& what) -> void {
        throw ParseError("line " + std::to_string(line_no) + ": " + what);
    };
    if (!std::getline(in, line)) fail("empty input");
    auto head = split_csv(line);
    if (head.size() != 5 || (head[0] != "d" && head[0] != "terms") || head[1] != "naive_ms" || head[2] != "fast_ms" ||
        head[3] != "size" || head[4] != "mul_ms")
        fail("unexpected header");
    auto parse_u = [&](const std::string& s) {
        u64 v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad integer '" + s + "'");
        return v;
    };
    auto parse_ms = [&](const std::string& s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) fail("bad time '" + s + "'");
        return v;
    };
    std::vector<BenchRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv(line);
        if (cells.size() != 5) fail("expected 5 cells");
        rows.push_back({parse_u(cells[0]), parse_ms(cells[1]), parse_ms(cells[2]), parse_u(cells[3]), parse_ms(cells[4])});
    }
    return rows;
}

void write_markdown(std::ostream& out, const std::vector<BenchRow>& rows, BenchMode mode) {
    auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", *v);
        return std::string(buf);
    };
    const bool series = mode == BenchMode::Series;
    out << "| " << param_name(mode) << " |";
    for (const auto& r : rows) out << ' ' << r.param << " |";
    out << "\n|---|";
    for (std::size_t k = 0; k < rows.size(); ++k) out << "---|";
    out << "\n| naive (ms) |";
    for (const auto& r : rows) out << ' ' << cell(r.naive_ms) << " |";
    out << "\n| fast (ms) |";
    for (const auto& r : rows) out << ' ' << cell(r.fast_ms) << " |";
    out << "\n| " << (series ? "\\|I_d\\|" : "\\|X\\|") << " |";
    for (const auto& r : rows) out << ' ' << r.size << " |";
    out << "\n| " << (series ? "M(\\|I_d\\|)" : "M(\\|X\\|)") << " (ms) |";
    for (const auto& r : rows) out << ' ' << cell(r.mul_ms) << " |";
    out << '\n';
}

} // namespace sparsemul
