#pragma once
// Run configuration: an INI file read through Boost.PropertyTree.
//
//   [run]        name, builder (hofstadter | reciprocal | generic), k_x,
//                boundary (obc | pbc, used by sweeps), diagnostics,
//                edge_budget, threshold, residual_tol
//   [bravais]    a_X, a_Y, alpha
//   [hops]       any key = n_X, n_Y, re, im   (generic builder)
//   [strip]      p, q, L
//   [flux]       value | numerator + denominator; optional alternate
//   [hofstadter] J_X, J_Y, h_X, h_Y
//   [reciprocal] kappa_X, kappa_Y (as "re, im"), a_X, a_Y
//   [geometry]   shape (triangle | rectangle), L, band
//   [winding]    base_energies ("re im; re im; ..."), samples, margin
//   [transfer]   q_values, energies, lyapunov_length, segments
//   [sweep]      k_x | flux | h_X | h_Y = "range start stop points" or "values v1 v2 ..."
//   [meta]       free-form strings, echoed into outputs
//
// Numbers accept a product/quotient of decimal literals and `pi`, e.g. pi/2,
// 2*pi, 377/610. The flux is always the plaquette flux Phi = B * cell area.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nhse/hamiltonian.hpp"
#include "nhse/lattice.hpp"
#include "nhse/lattice2d.hpp"
#include "nhse/io/csv.hpp"

namespace nhse::io {

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, long line = 0, long column = 0)
        : Error(line > 0 ? "config line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                         : "config: " + what),
          line_(line), column_(column) {}
    long line() const noexcept { return line_; }
    long column() const noexcept { return column_; }

private:
    long line_, column_;
};

enum class BuilderKind { hofstadter, reciprocal, generic };

inline std::string to_string(BuilderKind b) {
    switch (b) {
    case BuilderKind::hofstadter:
        return "hofstadter";
    case BuilderKind::reciprocal:
        return "reciprocal";
    case BuilderKind::generic:
        return "generic";
    }
    return "?";
}

inline const std::vector<std::string>& known_diagnostics() {
    static const std::vector<std::string> names = {
        "spectrum",   "distribution",     "ipr",          "pbc",  "compare", "criterion",
        "matrix",     "winding_bloch",    "winding_realspace", "winding_flux",
        "det",        "gap",              "lyapunov",     "distribution2d", "spectrum2d", "edge_weight"};
    return names;
}

struct SweepAxis {
    std::string name;           ///< k_x, flux, h_X or h_Y
    bool is_range = true;
    double start = 0.0, stop = 0.0;
    long points = 0;            ///< range: stop excluded
    std::vector<double> list;

    std::vector<double> values() const {
        if (!is_range)
            return list;
        std::vector<double> v;
        for (long i = 0; i < points; ++i)
            v.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(points));
        return v;
    }
    bool operator==(const SweepAxis&) const = default;
};

struct GeometrySection {
    MaskShape shape = MaskShape::lower_triangle;
    int L = 60;
    int band = 3;
    bool operator==(const GeometrySection&) const = default;
};

struct WindingSection {
    std::vector<cplx> base_energies{cplx{0.0, 0.0}};
    long samples = 720;
    long margin = -1;
    bool operator==(const WindingSection&) const = default;
};

struct TransferSection {
    std::vector<long> q_values;
    std::vector<cplx> energies{cplx{0.0, 0.0}};
    long lyapunov_length = 100000;
    int segments = 20;
    bool operator==(const TransferSection&) const = default;
};

struct RunConfig {
    std::string name = "run";
    BuilderKind builder = BuilderKind::hofstadter;
    double k_x = 0.0;
    Boundary boundary = Boundary::open;
    std::optional<std::vector<std::string>> diagnostics; ///< absent: each command's defaults
    int edge_budget = 4;
    double threshold = 0.005;
    double residual_tol = 1e-9;

    BravaisSpec bravais{1.0, 1.0, pi / 2};
    std::vector<std::pair<std::string, HoppingTerm>> hops;
    int p = 0, q = 1;
    long L = 100;

    double flux = 0.0;
    std::optional<std::pair<long, long>> flux_ratio;
    std::optional<double> flux_alternate;

    HofstadterParams hofstadter;
    ReciprocalDiagonalParams reciprocal;
    GeometrySection geometry;
    WindingSection winding;
    TransferSection transfer;
    std::vector<SweepAxis> sweep;
    std::vector<std::pair<std::string, std::string>> meta;

    bool operator==(const RunConfig&) const = default;

    bool wants(const std::string& diagnostic, const std::vector<std::string>& defaults) const {
        const auto& list = diagnostics ? *diagnostics : defaults;
        return std::find(list.begin(), list.end(), diagnostic) != list.end();
    }

    LatticeModel generic_model() const {
        std::vector<HoppingTerm> terms;
        for (const auto& [key, t] : hops)
            terms.push_back(t);
        return LatticeModel(bravais, std::move(terms));
    }
};

namespace detail {

/// (line, column of the value) for every "section.key" in the source text.
class LineIndex {
public:
    explicit LineIndex(const std::string& text) {
        std::istringstream in(text);
        std::string line, section;
        long n = 0;
        while (std::getline(in, line)) {
            ++n;
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == ';' || line[first] == '#')
                continue;
            if (line[first] == '[') {
                const auto close = line.find(']', first);
                section = trim(line.substr(first + 1, close - first - 1));
                sections_.emplace(section, std::make_pair(n, static_cast<long>(first) + 1));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                continue;
            const auto key = trim(line.substr(first, eq - first));
            auto vcol = line.find_first_not_of(" \t", eq + 1);
            if (vcol == std::string::npos)
                vcol = eq + 1;
            keys_.emplace(section + "." + key, std::make_pair(n, static_cast<long>(vcol) + 1));
        }
    }

    std::pair<long, long> key(const std::string& section, const std::string& k) const {
        const auto it = keys_.find(section + "." + k);
        return it == keys_.end() ? section_pos(section) : it->second;
    }
    std::pair<long, long> section_pos(const std::string& section) const {
        const auto it = sections_.find(section);
        return it == sections_.end() ? std::make_pair(0L, 0L) : it->second;
    }

    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

private:
    std::map<std::string, std::pair<long, long>> keys_;
    std::map<std::string, std::pair<long, long>> sections_;
};

inline std::optional<double> parse_literal(const std::string& tok) {
    if (tok == "pi")
        return pi;
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (!tok.empty() && *b == '+')
        ++b;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
        return std::nullopt;
    return v;
}

/// "a", "pi/2", "2*pi", "377/610", "-pi/3".
inline std::optional<double> parse_number(std::string s) {
    s = LineIndex::trim(s);
    if (s.empty())
        return std::nullopt;
    double sign = 1.0;
    if (s[0] == '-' && s.find_first_of("*/") != std::string::npos) {
        sign = -1.0;
        s = s.substr(1);
    }
    double acc = 1.0;
    char op = '*';
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find_first_of("*/", pos);
        const auto tok = LineIndex::trim(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        const auto v = parse_literal(tok);
        if (!v)
            return std::nullopt;
        acc = op == '*' ? acc * *v : acc / *v;
        if (next == std::string::npos)
            break;
        op = s[next];
        pos = next + 1;
    }
    return sign * acc;
}

inline std::vector<std::string> split(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!LineIndex::trim(cur).empty())
                out.push_back(LineIndex::trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!LineIndex::trim(cur).empty())
        out.push_back(LineIndex::trim(cur));
    return out;
}

class Reader {
public:
    Reader(const boost::property_tree::ptree& tree, const LineIndex& index) : tree_(tree), index_(index) {}

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const {
        const auto [line, col] = index_.key(section, key);
        throw ConfigError("[" + section + "] " + key + ": " + msg, line, col);
    }

    const boost::property_tree::ptree* section(const std::string& name) const {
        const auto it = tree_.find(name);
        return it == tree_.not_found() ? nullptr : &it->second;
    }

    std::optional<std::string> raw(const std::string& sec, const std::string& key) const {
        const auto* s = section(sec);
        if (!s)
            return std::nullopt;
        const auto it = s->find(key);
        if (it == s->not_found())
            return std::nullopt;
        return it->second.data();
    }

    double number(const std::string& sec, const std::string& key, double fallback) const {
        const auto r = raw(sec, key);
        if (!r)
            return fallback;
        const auto v = parse_number(*r);
        if (!v)
            fail(sec, key, "not a number: '" + *r + "'");
        return *v;
    }

    long integer(const std::string& sec, const std::string& key, long fallback) const {
        const auto r = raw(sec, key);
        if (!r)
            return fallback;
        long v = 0;
        const auto t = LineIndex::trim(*r);
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size())
            fail(sec, key, "not an integer: '" + *r + "'");
        return v;
    }

    cplx complex(const std::string& sec, const std::string& key, cplx fallback) const {
        const auto r = raw(sec, key);
        if (!r)
            return fallback;
        return complex_from(sec, key, *r);
    }

    cplx complex_from(const std::string& sec, const std::string& key, const std::string& text) const {
        const auto parts = split(text, ", \t");
        if (parts.size() != 2)
            fail(sec, key, "expected 're, im', got '" + text + "'");
        const auto re = parse_number(parts[0]), im = parse_number(parts[1]);
        if (!re || !im)
            fail(sec, key, "not a complex number: '" + text + "'");
        return {*re, *im};
    }

    std::vector<cplx> complex_list(const std::string& sec, const std::string& key, std::vector<cplx> fallback) const {
        const auto r = raw(sec, key);
        if (!r)
            return fallback;
        std::vector<cplx> out;
        for (const auto& item : split(*r, ";"))
            out.push_back(complex_from(sec, key, item));
        return out;
    }

    void reject_unknown(const std::string& sec, const std::vector<std::string>& allowed) const {
        const auto* s = section(sec);
        if (!s)
            return;
        for (const auto& [k, v] : *s)
            if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
                fail(sec, k, "unknown key");
    }

private:
    const boost::property_tree::ptree& tree_;
    const LineIndex& index_;
};

} // namespace detail

inline RunConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.message(), static_cast<long>(e.line()), 1);
    }
    const detail::LineIndex index(text);
    const detail::Reader rd(tree, index);

    static const std::vector<std::string> sections = {"run",        "bravais",  "hops",     "strip",
                                                      "flux",       "hofstadter", "reciprocal", "geometry",
                                                      "winding",    "transfer", "sweep",    "meta"};
    for (const auto& [name, sec] : tree) {
        if (std::find(sections.begin(), sections.end(), name) == sections.end()) {
            const auto [line, col] = index.section_pos(name);
            throw ConfigError("unknown section [" + name + "]", line, col);
        }
        if (sec.empty() && !sec.data().empty()) {
            const auto [line, col] = index.section_pos(name);
            throw ConfigError("key '" + name + "' outside of a section", line, col);
        }
    }

    RunConfig c;
    rd.reject_unknown("run", {"name", "builder", "k_x", "boundary", "diagnostics", "edge_budget", "threshold",
                              "residual_tol"});
    if (auto v = rd.raw("run", "name"))
        c.name = detail::LineIndex::trim(*v);
    if (auto v = rd.raw("run", "builder")) {
        const auto b = detail::LineIndex::trim(*v);
        if (b == "hofstadter")
            c.builder = BuilderKind::hofstadter;
        else if (b == "reciprocal")
            c.builder = BuilderKind::reciprocal;
        else if (b == "generic")
            c.builder = BuilderKind::generic;
        else
            rd.fail("run", "builder", "unknown builder '" + b + "' (hofstadter, reciprocal, generic)");
    }
    c.k_x = rd.number("run", "k_x", c.k_x);
    if (auto v = rd.raw("run", "boundary")) {
        const auto b = detail::LineIndex::trim(*v);
        if (b == "obc")
            c.boundary = Boundary::open;
        else if (b == "pbc")
            c.boundary = Boundary::periodic;
        else
            rd.fail("run", "boundary", "expected obc or pbc");
    }
    if (auto v = rd.raw("run", "diagnostics")) {
        c.diagnostics = detail::split(*v, ", \t");
        for (const auto& d : *c.diagnostics)
            if (std::find(known_diagnostics().begin(), known_diagnostics().end(), d) == known_diagnostics().end())
                rd.fail("run", "diagnostics", "unknown diagnostic '" + d + "'");
    }
    c.edge_budget = static_cast<int>(rd.integer("run", "edge_budget", c.edge_budget));
    if (c.edge_budget < 0)
        rd.fail("run", "edge_budget", "must be non-negative");
    c.threshold = rd.number("run", "threshold", c.threshold);
    c.residual_tol = rd.number("run", "residual_tol", c.residual_tol);

    rd.reject_unknown("bravais", {"a_X", "a_Y", "alpha"});
    c.bravais.a_X = rd.number("bravais", "a_X", c.bravais.a_X);
    c.bravais.a_Y = rd.number("bravais", "a_Y", c.bravais.a_Y);
    c.bravais.alpha = rd.number("bravais", "alpha", c.bravais.alpha);
    try {
        c.bravais.validate();
    } catch (const Error& e) {
        rd.fail("bravais", "a_X", e.what());
    }

    if (const auto* hops = rd.section("hops")) {
        for (const auto& [key, node] : *hops) {
            const auto parts = detail::split(node.data(), ", \t");
            if (parts.size() != 4)
                rd.fail("hops", key, "expected 'n_X, n_Y, re, im'");
            long nX = 0, nY = 0;
            for (int i = 0; i < 2; ++i) {
                long& dst = i == 0 ? nX : nY;
                const auto& t = parts[static_cast<std::size_t>(i)];
                const auto res = std::from_chars(t.data(), t.data() + t.size(), dst);
                if (res.ec != std::errc() || res.ptr != t.data() + t.size())
                    rd.fail("hops", key, "lattice offsets must be integers");
            }
            const auto re = detail::parse_number(parts[2]), im = detail::parse_number(parts[3]);
            if (!re || !im)
                rd.fail("hops", key, "amplitude is not a number");
            c.hops.push_back({key, HoppingTerm{static_cast<int>(nX), static_cast<int>(nY), cplx{*re, *im}}});
        }
    }

    rd.reject_unknown("strip", {"p", "q", "L"});
    c.p = static_cast<int>(rd.integer("strip", "p", c.p));
    c.q = static_cast<int>(rd.integer("strip", "q", c.q));
    c.L = rd.integer("strip", "L", c.L);
    if (c.L < 1)
        rd.fail("strip", "L", "must be positive");

    rd.reject_unknown("flux", {"value", "numerator", "denominator", "alternate"});
    const bool has_num = rd.raw("flux", "numerator").has_value(), has_den = rd.raw("flux", "denominator").has_value();
    if (has_num != has_den)
        rd.fail("flux", has_num ? "numerator" : "denominator", "numerator and denominator go together");
    if (has_num) {
        if (rd.raw("flux", "value"))
            rd.fail("flux", "value", "give either value or numerator/denominator");
        const long num = rd.integer("flux", "numerator", 0), den = rd.integer("flux", "denominator", 1);
        if (den <= 0)
            rd.fail("flux", "denominator", "must be positive");
        c.flux_ratio = std::make_pair(num, den);
        c.flux = static_cast<double>(num) / static_cast<double>(den);
    } else {
        c.flux = rd.number("flux", "value", 0.0);
    }
    if (rd.raw("flux", "alternate"))
        c.flux_alternate = rd.number("flux", "alternate", 0.0);

    rd.reject_unknown("hofstadter", {"J_X", "J_Y", "h_X", "h_Y"});
    c.hofstadter.J_X = rd.number("hofstadter", "J_X", c.hofstadter.J_X);
    c.hofstadter.J_Y = rd.number("hofstadter", "J_Y", c.hofstadter.J_Y);
    c.hofstadter.h_X = rd.number("hofstadter", "h_X", c.hofstadter.h_X);
    c.hofstadter.h_Y = rd.number("hofstadter", "h_Y", c.hofstadter.h_Y);

    rd.reject_unknown("reciprocal", {"kappa_X", "kappa_Y", "a_X", "a_Y"});
    c.reciprocal.kappa_X = rd.complex("reciprocal", "kappa_X", c.reciprocal.kappa_X);
    c.reciprocal.kappa_Y = rd.complex("reciprocal", "kappa_Y", c.reciprocal.kappa_Y);
    c.reciprocal.a_X = rd.number("reciprocal", "a_X", c.reciprocal.a_X);
    c.reciprocal.a_Y = rd.number("reciprocal", "a_Y", c.reciprocal.a_Y);

    rd.reject_unknown("geometry", {"shape", "L", "band"});
    if (auto v = rd.raw("geometry", "shape")) {
        const auto s = detail::LineIndex::trim(*v);
        if (s == "triangle")
            c.geometry.shape = MaskShape::lower_triangle;
        else if (s == "rectangle")
            c.geometry.shape = MaskShape::rectangle;
        else
            rd.fail("geometry", "shape", "expected triangle or rectangle");
    }
    c.geometry.L = static_cast<int>(rd.integer("geometry", "L", c.geometry.L));
    c.geometry.band = static_cast<int>(rd.integer("geometry", "band", c.geometry.band));
    if (c.geometry.L < 1)
        rd.fail("geometry", "L", "must be positive");

    rd.reject_unknown("winding", {"base_energies", "samples", "margin"});
    c.winding.base_energies = rd.complex_list("winding", "base_energies", c.winding.base_energies);
    c.winding.samples = rd.integer("winding", "samples", c.winding.samples);
    c.winding.margin = rd.integer("winding", "margin", c.winding.margin);

    rd.reject_unknown("transfer", {"q_values", "energies", "lyapunov_length", "segments"});
    if (auto v = rd.raw("transfer", "q_values")) {
        for (const auto& t : detail::split(*v, ", \t")) {
            long q = 0;
            const auto res = std::from_chars(t.data(), t.data() + t.size(), q);
            if (res.ec != std::errc() || res.ptr != t.data() + t.size() || q < 1)
                rd.fail("transfer", "q_values", "expected positive integers");
            c.transfer.q_values.push_back(q);
        }
    }
    c.transfer.energies = rd.complex_list("transfer", "energies", c.transfer.energies);
    c.transfer.lyapunov_length = rd.integer("transfer", "lyapunov_length", c.transfer.lyapunov_length);
    c.transfer.segments = static_cast<int>(rd.integer("transfer", "segments", c.transfer.segments));

    rd.reject_unknown("sweep", {"k_x", "flux", "h_X", "h_Y"});
    if (const auto* sw = rd.section("sweep")) {
        for (const auto& [key, node] : *sw) {
            const auto parts = detail::split(node.data(), ", \t");
            SweepAxis ax;
            ax.name = key;
            if (parts.empty())
                rd.fail("sweep", key, "empty axis");
            if (parts[0] == "range") {
                if (parts.size() != 4)
                    rd.fail("sweep", key, "expected 'range start stop points'");
                const auto a = detail::parse_number(parts[1]), b = detail::parse_number(parts[2]);
                long n = 0;
                const auto res = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), n);
                if (!a || !b || res.ec != std::errc() || res.ptr != parts[3].data() + parts[3].size())
                    rd.fail("sweep", key, "malformed range");
                if (n < 1)
                    rd.fail("sweep", key, "step count must be positive");
                ax.start = *a;
                ax.stop = *b;
                ax.points = n;
            } else if (parts[0] == "values") {
                ax.is_range = false;
                for (std::size_t i = 1; i < parts.size(); ++i) {
                    const auto v = detail::parse_number(parts[i]);
                    if (!v)
                        rd.fail("sweep", key, "not a number: '" + parts[i] + "'");
                    ax.list.push_back(*v);
                }
                if (ax.list.empty())
                    rd.fail("sweep", key, "step count must be positive");
            } else {
                rd.fail("sweep", key, "expected 'range ...' or 'values ...'");
            }
            c.sweep.push_back(std::move(ax));
        }
    }

    if (const auto* meta = rd.section("meta"))
        for (const auto& [key, node] : *meta)
            c.meta.emplace_back(key, node.data());
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot open " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

/// Canonical INI text; parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& c) {
    auto num = format_double;
    auto cx = [](cplx z) { return format_double(z.real()) + ", " + format_double(z.imag()); };
    std::ostringstream o;
    o << "[run]\n";
    o << "name = " << c.name << "\n";
    o << "builder = " << to_string(c.builder) << "\n";
    o << "k_x = " << num(c.k_x) << "\n";
    o << "boundary = " << to_string(c.boundary) << "\n";
    if (c.diagnostics) {
        o << "diagnostics =";
        for (std::size_t i = 0; i < c.diagnostics->size(); ++i)
            o << (i ? ", " : " ") << (*c.diagnostics)[i];
        o << "\n";
    }
    o << "edge_budget = " << c.edge_budget << "\n";
    o << "threshold = " << num(c.threshold) << "\n";
    o << "residual_tol = " << num(c.residual_tol) << "\n";

    o << "\n[bravais]\na_X = " << num(c.bravais.a_X) << "\na_Y = " << num(c.bravais.a_Y)
      << "\nalpha = " << num(c.bravais.alpha) << "\n";
    if (!c.hops.empty()) {
        o << "\n[hops]\n";
        for (const auto& [key, t] : c.hops)
            o << key << " = " << t.n_X << ", " << t.n_Y << ", " << cx(t.amplitude) << "\n";
    }
    o << "\n[strip]\np = " << c.p << "\nq = " << c.q << "\nL = " << c.L << "\n";

    o << "\n[flux]\n";
    if (c.flux_ratio)
        o << "numerator = " << c.flux_ratio->first << "\ndenominator = " << c.flux_ratio->second << "\n";
    else
        o << "value = " << num(c.flux) << "\n";
    if (c.flux_alternate)
        o << "alternate = " << num(*c.flux_alternate) << "\n";

    const auto& h = c.hofstadter;
    o << "\n[hofstadter]\nJ_X = " << num(h.J_X) << "\nJ_Y = " << num(h.J_Y) << "\nh_X = " << num(h.h_X)
      << "\nh_Y = " << num(h.h_Y) << "\n";
    const auto& r = c.reciprocal;
    o << "\n[reciprocal]\nkappa_X = " << cx(r.kappa_X) << "\nkappa_Y = " << cx(r.kappa_Y) << "\na_X = " << num(r.a_X)
      << "\na_Y = " << num(r.a_Y) << "\n";
    o << "\n[geometry]\nshape = " << (c.geometry.shape == MaskShape::rectangle ? "rectangle" : "triangle")
      << "\nL = " << c.geometry.L << "\nband = " << c.geometry.band << "\n";

    auto cx_list = [&](const std::vector<cplx>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "; " : "") + format_double(v[i].real()) + " " + format_double(v[i].imag());
        return s;
    };
    o << "\n[winding]\n";
    o << "base_energies = " << cx_list(c.winding.base_energies) << "\n";
    o << "samples = " << c.winding.samples << "\nmargin = " << c.winding.margin << "\n";

    o << "\n[transfer]\n";
    if (!c.transfer.q_values.empty()) {
        o << "q_values =";
        for (std::size_t i = 0; i < c.transfer.q_values.size(); ++i)
            o << (i ? ", " : " ") << c.transfer.q_values[i];
        o << "\n";
    }
    o << "energies = " << cx_list(c.transfer.energies) << "\n";
    o << "lyapunov_length = " << c.transfer.lyapunov_length << "\nsegments = " << c.transfer.segments << "\n";

    if (!c.sweep.empty()) {
        o << "\n[sweep]\n";
        for (const auto& ax : c.sweep) {
            o << ax.name << " = ";
            if (ax.is_range) {
                o << "range " << num(ax.start) << " " << num(ax.stop) << " " << ax.points << "\n";
            } else {
                o << "values";
                for (double v : ax.list)
                    o << " " << num(v);
                o << "\n";
            }
        }
    }
    if (!c.meta.empty()) {
        o << "\n[meta]\n";
        for (const auto& [k, v] : c.meta)
            o << k << " = " << v << "\n";
    }
    return o.str();
}

inline std::string config_hash(const RunConfig& c) { return fnv1a64(serialize(c)); }

} // namespace nhse::io
