#include "sparsemul/spoly_io.hpp"

#include <charconv>
#include <istream>
#include <cmath>
#include <map>
#include <set>
#include <ostream>
#include <sstream>
#include <vector>

namespace sparsemul {

namespace {

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    /// Next line with comments stripped, split on whitespace; false at end of input.
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            tokens.clear();
            for (std::string tok; ss >> tok;) tokens.push_back(tok);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("line " + std::to_string(line_no) + ": " + what);
    }
};

u64 parse_u64(const LineReader& r, const std::string& s) {
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) r.fail("expected a natural number, got '" + s + "'");
    return v;
}

BigInt parse_bigint(const LineReader& r, const std::string& s) {
    BigInt v;
    const char* p = s.c_str();
    if (*p == '+') ++p;
    if (*p == '\0' || mpz_set_str(v.get_mpz_t(), p, 10) != 0) r.fail("expected an integer, got '" + s + "'");
    return v;
}

std::map<std::string, std::string> parse_header(LineReader& r, const std::vector<std::string>& tokens) {
    if (tokens.size() % 2 != 0) r.fail("header must be a list of key/value pairs");
    std::map<std::string, std::string> kv;
    for (std::size_t k = 0; k < tokens.size(); k += 2)
        if (!kv.emplace(tokens[k], tokens[k + 1]).second) r.fail("repeated header key '" + tokens[k] + "'");
    return kv;
}

std::size_t parse_nvars(LineReader& r, const std::map<std::string, std::string>& kv) {
    auto it = kv.find("n");
    if (it == kv.end()) r.fail("header lacks 'n <nvars>'");
    const u64 n = parse_u64(r, it->second);
    if (n == 0) r.fail("need at least one variable");
    return n;
}

Exponent parse_exponent(LineReader& r, const std::vector<std::string>& tokens, std::size_t n) {
    Exponent e(n);
    for (std::size_t j = 0; j < n; ++j) e[j] = parse_u64(r, tokens[j]);
    return e;
}

void write_exponent(std::ostream& out, const Exponent& e) {
    for (u64 x : e.parts()) out << x << ' ';
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

const char* ring_name(Ring r) noexcept {
    switch (r) {
    case Ring::Fp: return "fp";
    case Ring::Z: return "z";
    case Ring::Q: return "q";
    case Ring::F64: return "f64";
    }
    return "?";
}

FloatPoly SpolyDocument::float_poly() const {
    return {std::get<SparsePoly<double>>(poly), precision, eta};
}

SpolyDocument parse_spoly(std::istream& in) {
    LineReader r{in};
    std::vector<std::string> tokens;
    if (!r.next(tokens)) r.fail("empty input");
    auto kv = parse_header(r, tokens);

    SpolyDocument doc;
    doc.nvars = parse_nvars(r, kv);
    std::set<std::string> allowed{"n", "trunc"};
    if (auto it = kv.find("p"); it != kv.end()) {
        try {
            doc.field = std::make_shared<PrimeField>(parse_u64(r, it->second));
        } catch (const std::invalid_argument& e) {
            r.fail(e.what());
        }
        doc.ring = Ring::Fp;
        allowed.insert("p");
    } else if (auto ring = kv.find("ring"); ring != kv.end()) {
        allowed.insert("ring");
        if (ring->second == "z") doc.ring = Ring::Z;
        else if (ring->second == "q") doc.ring = Ring::Q;
        else if (ring->second == "f64") {
            doc.ring = Ring::F64;
            allowed.insert({"eta", "prec"});
            if (auto e = kv.find("eta"); e != kv.end()) doc.eta = static_cast<int>(parse_u64(r, e->second));
            if (auto p = kv.find("prec"); p != kv.end()) doc.precision = static_cast<int>(parse_u64(r, p->second));
            if (doc.precision < 1 || doc.precision > 53) r.fail("prec must lie in [1, 53]");
        } else r.fail("unknown ring '" + ring->second + "'");
    } else {
        r.fail("header needs 'p <modulus>' or 'ring <z|q|f64>'");
    }
    for (const auto& [k, v] : kv)
        if (!allowed.count(k)) r.fail("unexpected header key '" + k + "'");
    if (auto t = kv.find("trunc"); t != kv.end()) {
        if (doc.ring != Ring::Fp) r.fail("trunc is only supported over a prime field");
        doc.trunc = parse_u64(r, t->second);
        if (*doc.trunc == 0) r.fail("trunc must be positive");
    }

    const std::size_t n = doc.nvars;
    std::vector<Term<FieldElement>> fp;
    std::vector<Term<BigInt>> zz;
    std::vector<Term<Rational>> qq;
    std::vector<Term<double>> ff;
    while (r.next(tokens)) {
        if (tokens.size() != n + 1) r.fail("expected " + std::to_string(n) + " exponents and a coefficient");
        Exponent e = parse_exponent(r, tokens, n);
        if (doc.trunc && e.total_degree() >= *doc.trunc) r.fail("term of total degree >= trunc");
        const std::string& c = tokens[n];
        switch (doc.ring) {
        case Ring::Fp: {
            BigInt v = parse_bigint(r, c);
            fp.push_back({std::move(e), FieldElement(*doc.field, mpz_fdiv_ui(v.get_mpz_t(), doc.field->modulus()))});
            break;
        }
        case Ring::Z: zz.push_back({std::move(e), parse_bigint(r, c)}); break;
        case Ring::Q: {
            auto slash = c.find('/');
            BigInt num = parse_bigint(r, c.substr(0, slash));
            BigInt den = slash == std::string::npos ? BigInt(1) : parse_bigint(r, c.substr(slash + 1));
            if (den == 0) r.fail("zero denominator");
            Rational v(num, den);
            v.canonicalize();
            qq.push_back({std::move(e), v});
            break;
        }
        case Ring::F64: {
            double v = 0;
            const char* b = c.data();
            if (*b == '+') ++b;
            auto [ptr, ec] = std::from_chars(b, c.data() + c.size(), v);
            if (ec != std::errc() || ptr != c.data() + c.size() || !std::isfinite(v)) r.fail("expected a finite decimal, got '" + c + "'");
            ff.push_back({std::move(e), v});
            break;
        }
        }
    }
    switch (doc.ring) {
    case Ring::Fp: doc.poly = SparsePoly<FieldElement>(n, std::move(fp)); break;
    case Ring::Z: doc.poly = IntPoly(n, std::move(zz)); break;
    case Ring::Q: doc.poly = RatPoly(n, std::move(qq)); break;
    case Ring::F64: doc.poly = SparsePoly<double>(n, std::move(ff)); break;
    }
    return doc;
}

SpolyDocument parse_spoly(const std::string& text) {
    std::istringstream in(text);
    return parse_spoly(in);
}

void write_spoly(std::ostream& out, const SpolyDocument& doc) {
    switch (doc.ring) {
    case Ring::Fp: out << "p " << doc.field->modulus(); break;
    case Ring::Z: out << "ring z"; break;
    case Ring::Q: out << "ring q"; break;
    case Ring::F64:
        out << "ring f64 eta " << doc.eta;
        if (doc.precision != 53) out << " prec " << doc.precision;
        break;
    }
    out << " n " << doc.nvars;
    if (doc.trunc) out << " trunc " << *doc.trunc;
    out << '\n';
    std::visit(
        [&](const auto& poly) {
            for (const auto& t : poly.terms()) {
                write_exponent(out, t.exponent);
                using C = std::decay_t<decltype(t.coeff)>;
                if constexpr (std::is_same_v<C, FieldElement>) out << t.coeff.residue();
                else if constexpr (std::is_same_v<C, double>) out << format_double(t.coeff);
                else out << t.coeff.get_str();
                out << '\n';
            }
        },
        doc.poly);
}

std::string to_spoly(const SpolyDocument& doc) {
    std::ostringstream out;
    write_spoly(out, doc);
    return out.str();
}

SupportSet parse_support(std::istream& in) {
    LineReader r{in};
    std::vector<std::string> tokens;
    if (!r.next(tokens) || tokens.empty() || tokens[0] != "supp") r.fail("support file must start with 'supp n <nvars>'");
    tokens.erase(tokens.begin());
    auto kv = parse_header(r, tokens);
    if (kv.size() != 1) r.fail("support header takes only 'n <nvars>'");
    const std::size_t n = parse_nvars(r, kv);
    std::vector<Exponent> exps;
    while (r.next(tokens)) {
        if (tokens.size() != n) r.fail("expected " + std::to_string(n) + " exponents");
        exps.push_back(parse_exponent(r, tokens, n));
    }
    return {n, std::move(exps)};
}

void write_support(std::ostream& out, const SupportSet& x) {
    out << "supp n " << x.nvars() << '\n';
    for (const Exponent& e : x) {
        for (std::size_t j = 0; j < e.nvars(); ++j) out << (j ? " " : "") << e[j];
        out << '\n';
    }
}

} // namespace sparsemul
