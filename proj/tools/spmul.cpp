// spmul: benchmark, self-check and one-shot products of sparse polynomials.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sparsemul/bench.hpp"
#include "sparsemul/series.hpp"
#include "sparsemul/spoly_io.hpp"

using namespace sparsemul;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;

/// Bad arguments or unusable input files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SpolyDocument read_spoly(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return parse_spoly(in);
    } catch (const ParseError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

SpolyDocument multiply(const SpolyDocument& a, const SpolyDocument& b, const std::optional<SupportSet>& x,
                       bool heuristic) {
    if (a.ring != b.ring) throw UsageError("operands live in different rings");
    if (a.nvars != b.nvars) throw UsageError("operands have different numbers of variables");
    if (a.trunc != b.trunc) throw UsageError("operands have different truncation degrees");
    SpolyDocument out = a;
    switch (a.ring) {
    case Ring::Fp: {
        if (a.field->modulus() != b.field->modulus()) throw UsageError("operands have different moduli");
        // b's coefficients must refer to the same field object as a's
        auto pb = std::get<SparsePoly<FieldElement>>(b.poly).map_coeffs(
            [&](const FieldElement& c) { return FieldElement(*a.field, c.residue()); });
        const auto& pa = std::get<SparsePoly<FieldElement>>(a.poly);
        if (a.trunc) {
            if (x) throw UsageError("--support does not apply to truncated series");
            auto to_series = [&](const SparsePoly<FieldElement>& p) {
                TruncatedSeries s(*a.field, a.nvars, *a.trunc);
                for (const auto& t : p.terms()) s.set(t.exponent, t.coeff.residue());
                return s;
            };
            out.poly = series_mul(to_series(pa), to_series(pb)).to_sparse();
        } else {
            out.poly = sparse_mul(pa, pb, x);
        }
        break;
    }
    case Ring::Z: out.poly = integer_sparse_mul(std::get<IntPoly>(a.poly), std::get<IntPoly>(b.poly), x); break;
    case Ring::Q: {
        RationalMulOptions opts;
        opts.heuristic = heuristic;
        out.poly = rational_sparse_mul(std::get<RatPoly>(a.poly), std::get<RatPoly>(b.poly), x, opts);
        break;
    }
    case Ring::F64: {
        FloatPoly r = float_sparse_mul(a.float_poly(), b.float_poly(), x);
        out.poly = r.poly;
        out.precision = r.precision;
        out.eta = r.eta;
        break;
    }
    }
    return out;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse polynomial multiplication by evaluation and transposed interpolation"};
    app.require_subcommand(1);

    BenchConfig bench;
    std::string mode = "series", format = "csv", bench_out;
    auto* cmd_bench = app.add_subcommand("bench", "Time naive and fast products on random instances");
    cmd_bench->add_option("--mode", mode, "series, sparse or integer")
        ->check(CLI::IsMember({"series", "sparse", "integer"}))
        ->capture_default_str();
    cmd_bench->add_option("--vars", bench.nvars, "Number of variables")->check(CLI::Range(1, 64))->capture_default_str();
    cmd_bench->add_option("--degrees,--terms", bench.params, "Truncation degrees (series) or term counts")
        ->delimiter(',');
    cmd_bench->add_option("--prime", bench.prime, "Prime modulus")->capture_default_str();
    cmd_bench->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
    cmd_bench->add_option("--trials", bench.trials, "Timed runs per cell")->check(CLI::Range(1, 1000))->capture_default_str();
    cmd_bench->add_option("--format", format, "csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    cmd_bench->add_option("--out", bench_out, "Output file (default stdout)");
    cmd_bench->add_option("--timeout", bench.timeout_ms, "Per-cell timeout in milliseconds")->capture_default_str();
    cmd_bench->add_option("--max-exp", bench.max_exp, "Exponent bound for sparse instances")->capture_default_str();
    cmd_bench->add_option("--coeff-bits", bench.coeff_bits, "Coefficient size for integer instances")->capture_default_str();
    bool no_naive = false;
    cmd_bench->add_flag("--no-naive", no_naive, "Skip the naive products");

    VerifyConfig verify;
    auto* cmd_verify = app.add_subcommand("verify", "Check fast products against the naive oracles");
    cmd_verify->add_option("--ring", verify.ring, "fp, z, q, f64 or all")
        ->check(CLI::IsMember({"fp", "z", "q", "f64", "all"}))
        ->capture_default_str();
    cmd_verify->add_option("--seed", verify.seed, "Random seed")->capture_default_str();
    cmd_verify->add_option("--instances", verify.instances, "Instances per check")->capture_default_str();
    cmd_verify->add_flag("--inject-fault", verify.inject_fault, "Corrupt one fast result");

    std::vector<std::string> inputs;
    std::string mul_out, support_path;
    bool heuristic = false;
    auto* cmd_mul = app.add_subcommand("multiply", "Multiply two SPOLY files");
    cmd_mul->add_option("--in", inputs, "Operand file (give twice)")->required()->expected(2);
    cmd_mul->add_option("--out", mul_out, "Output file (default stdout)");
    cmd_mul->add_option("--support", support_path, "Support file containing the support of the product");
    cmd_mul->add_flag("--heuristic", heuristic, "Rationals: multi-modular reconstruction");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (*cmd_bench) {
            bench.mode = mode == "series" ? BenchMode::Series : mode == "sparse" ? BenchMode::Sparse : BenchMode::Integer;
            bench.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Markdown;
            bench.run_naive = !no_naive;
            const auto rows = run_bench(bench, &std::cerr);
            if (rows.empty() && !bench.params.empty()) {
                std::cerr << "no parameter could be run\n";
                return kExitBadInput;
            }
            std::ostringstream out;
            if (bench.format == OutputFormat::Csv) write_csv(out, rows, bench.mode);
            else write_markdown(out, rows, bench.mode);
            emit(bench_out, out.str());
        } else if (*cmd_verify) {
            const VerifyReport report = verify_mode(verify);
            std::cout << report.text;
            return report.failed == 0 ? kExitOk : kExitVerifyFailed;
        } else if (*cmd_mul) {
            const SpolyDocument a = read_spoly(inputs[0]), b = read_spoly(inputs[1]);
            std::optional<SupportSet> x;
            if (!support_path.empty()) {
                std::ifstream in(support_path);
                if (!in) throw UsageError("cannot open " + support_path);
                try {
                    x = parse_support(in);
                } catch (const ParseError& e) {
                    throw UsageError(support_path + ": " + e.what());
                }
                if (x->nvars() != a.nvars) throw UsageError("support has the wrong number of variables");
            }
            emit(mul_out, to_spoly(multiply(a, b, x, heuristic)));
        }
    } catch (const std::exception& e) {
        std::cerr << "spmul: " << e.what() << '\n';
        return kExitBadInput;
    }
    return kExitOk;
}
