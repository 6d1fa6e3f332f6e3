#include "algchar/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace algchar {

using nlohmann::json;

std::string data_dir() {
    if (const char* d = std::getenv("ALGCHAR_DATA_DIR"); d && *d) return d;
#ifdef ALGCHAR_DATA_DIR
    return ALGCHAR_DATA_DIR;
#else
    return "data";
#endif
}

// ------------------------------------------------------------------- golden

Table parse_golden(std::istream& in) {
    Table t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": missing ':'");
        int e = std::stoi(line.substr(0, colon));
        if (t.count(e)) throw std::invalid_argument("line " + std::to_string(lineno) + ": repeated exponent");
        CountPoly f = parse_q_poly(line.substr(colon + 1));
        if (!f.is_zero()) t[e] = std::move(f);
    }
    return t;
}

Table load_golden(int n, const std::string& dir) {
    std::string path = dir + "/appendix/n" + std::to_string(n) + ".txt";
    std::ifstream in(path);
    if (!in) throw GoldenMissing("no golden table at " + path);
    return parse_golden(in);
}

std::string format_golden(const Table& t, int n) {
    std::ostringstream os;
    os << "# N_{" << n << ",e}(q): one line per nonzero degree exponent e\n";
    for (const auto& [e, f] : t) os << e << ": " << q_poly_string(f) << "\n";
    return os.str();
}

std::vector<int> golden_sizes(const std::string& dir) {
    std::vector<int> out;
    std::error_code ec;
    for (const auto& ent : std::filesystem::directory_iterator(dir + "/appendix", ec)) {
        std::string s = ent.path().filename().string();
        if (s.size() > 5 && s[0] == 'n' && s.substr(s.size() - 4) == ".txt") {
            try {
                out.push_back(std::stoi(s.substr(1, s.size() - 5)));
            } catch (const std::exception&) {
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string Mismatch::describe() const {
    return "N_{" + std::to_string(n) + "," + std::to_string(e) + "}: expected " +
           (expected.is_zero() ? std::string("0") : q_poly_string(expected)) + ", got " +
           (actual.is_zero() ? std::string("0") : q_poly_string(actual));
}

std::optional<Mismatch> compare_tables(int n, const Table& expected, const Table& actual) {
    std::set<int> es;
    for (const auto& kv : expected) es.insert(kv.first);
    for (const auto& kv : actual) es.insert(kv.first);
    for (int e : es) {
        auto a = expected.find(e), b = actual.find(e);
        CountPoly x = a == expected.end() ? CountPoly() : a->second;
        CountPoly y = b == actual.end() ? CountPoly() : b->second;
        if (!(x == y)) return Mismatch{n, e, x, y};
    }
    return std::nullopt;
}

// --------------------------------------------------------------- identities

std::vector<IdentityResult> check_identities(int n, const Table& t) {
    std::vector<IdentityResult> out;
    const int dim = n * (n - 1) / 2;

    CountPoly total;
    for (const auto& [e, f] : t) total += f.scaled(0, 2 * e, 0);
    CountPoly order = CountPoly::monomial(1, dim, 0);
    out.push_back({"sum rule", total == order,
                   "sum_e N_e q^2e = " + (total.is_zero() ? std::string("0") : q_poly_string(total)) +
                       ", |U_n| = " + q_poly_string(order)});

    auto it = t.find(0);
    CountPoly lin = it == t.end() ? CountPoly() : it->second;
    CountPoly want = CountPoly::monomial(1, n - 1, 0);
    out.push_back({"linear characters", lin == want,
                   "N_0 = " + (lin.is_zero() ? std::string("0") : q_poly_string(lin)) + ", expected " +
                       q_poly_string(want)});

    std::string bad;
    for (const auto& [e, f] : t) {
        CountPoly g = f.shift_q(1);
        for (const auto& term : g.terms())
            if (term.c < 0) {
                bad = "N_{" + std::to_string(n) + "," + std::to_string(e) + "}(t+1) = " + q_poly_string(g);
                break;
            }
        if (!bad.empty()) break;
    }
    out.push_back({"nonnegative in t+1", bad.empty(), bad.empty() ? "all shifted coefficients >= 0" : bad});
    return out;
}

// ------------------------------------------------------------------ compute

ComputeResult compute_chain(int n, const EngineConfig& cfg) {
    if (n < 1 || n > 64) throw std::invalid_argument("n must lie in [1, 64]");
    auto t0 = std::chrono::steady_clock::now();
    Engine engine(cfg);
    PatternEngine pattern(engine);
    Categorisation o = pattern.run(Poset::chain(n));
    ComputeResult r;
    r.table = resolve(o, n, cfg.audit);
    r.engine = engine.stats();
    r.pattern = pattern.stats();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// --------------------------------------------------------------------- JSON

namespace {

json bigint_json(const BigInt& c) {
    if (c >= std::numeric_limits<long long>::min() && c <= std::numeric_limits<long long>::max())
        return static_cast<long long>(c);
    return c.str();
}

BigInt bigint_from(const json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<long long>());
}

json system_json(const std::vector<ParamId>& params, const std::vector<Restriction>& rs) {
    json j;
    j["params"] = json::array();
    for (ParamId p : params) j["params"].push_back(param_name(p));
    j["restrictions"] = json::array();
    for (const auto& r : rs) j["restrictions"].push_back(restriction_to_json(r));
    return j;
}

}  // namespace

json count_poly_to_json(const CountPoly& f) {
    json terms = json::array();
    for (const auto& t : f.terms()) terms.push_back({{"q", t.q}, {"t", t.t}, {"c", bigint_json(t.c)}});
    return {{"terms", terms}};
}

CountPoly count_poly_from_json(const json& j) {
    CountPoly f;
    for (const auto& t : j.at("terms")) f += CountPoly::monomial(bigint_from(t.at("c")), t.at("q"), t.at("t"));
    return f;
}

json unresolved_to_json(const UnresolvedCount& u) {
    json j = system_json(u.params, u.restrictions);
    j["u"] = u.u;
    j["v"] = u.v;
    j["e"] = u.e;
    return j;
}

json table_to_json(const ResolvedTable& t) {
    json j;
    j["n"] = t.n;
    j["table"] = json::array();
    for (const auto& [e, f] : t.entries)
        j["table"].push_back({{"e", e}, {"poly", count_poly_to_json(f)}, {"text", q_poly_string(f)}});
    j["families"] = json::array();
    for (const auto& x : t.exceptional)
        j["families"].push_back({{"core", to_json(x.core)},
                                 {"z", x.core.label(x.z)},
                                 {"k", x.k},
                                 {"l", x.l},
                                 {"m", x.degree_shift},
                                 {"count", count_poly_to_json(x.total_count)},
                                 {"count_text", q_poly_string(x.total_count)}});
    j["dropped_families"] = t.dropped_families;
    j["unresolved_counts"] = json::array();
    for (const auto& u : t.unresolved_counts) j["unresolved_counts"].push_back(unresolved_to_json(u));
    return j;
}

ResolvedTable table_from_json(const json& j) {
    ResolvedTable t;
    t.n = j.at("n");
    for (const auto& row : j.at("table")) t.entries[row.at("e").get<int>()] = count_poly_from_json(row.at("poly"));
    for (const auto& f : j.at("families")) {
        ExceptionalFamily x;
        x.core = data_from_json(f.at("core"));
        std::string z = f.at("z");
        for (int i = 0; i < x.core.dim; ++i)
            if (x.core.label(i) == z) x.z = i;
        x.k = f.at("k");
        x.l = f.at("l");
        x.degree_shift = f.at("m");
        x.total_count = count_poly_from_json(f.at("count"));
        t.exceptional.push_back(std::move(x));
    }
    t.dropped_families = j.value("dropped_families", 0);
    if (!j.at("unresolved_counts").empty()) throw std::invalid_argument("cached tables never carry unresolved records");
    return t;
}

json categorisation_to_json(const Categorisation& o) {
    json j;
    j["resolved"] = count_poly_to_json(o.resolved);
    j["unresolved_counts"] = json::array();
    for (const auto& u : o.unresolved_counts) j["unresolved_counts"].push_back(unresolved_to_json(u));
    j["families"] = json::array();
    for (const auto& f : o.families) {
        json fj{{"kind", f.family.kind == FamilyRef::Kind::all_irr ? "all_irr" : "irr_at_z"},
                {"data", to_json(f.family.data)},
                {"k", f.k},
                {"l", f.l},
                {"m", f.m}};
        if (f.family.kind == FamilyRef::Kind::irr_at_z) fj["z"] = f.family.data.label(f.family.z);
        j["families"].push_back(std::move(fj));
    }
    return j;
}

// ---------------------------------------------------------------- CSV, LaTeX

std::string table_to_csv(const ResolvedTable& t) {
    std::ostringstream os;
    os << "n,e,q_degree,coefficient\n";
    for (const auto& [e, f] : t.entries) {
        auto terms = f.terms();
        std::sort(terms.begin(), terms.end(), [](const CountTerm& a, const CountTerm& b) { return a.q > b.q; });
        for (const auto& term : terms) os << t.n << "," << e << "," << term.q << "," << term.c << "\n";
    }
    return os.str();
}

namespace {

std::string latex_poly(const CountPoly& f) {
    std::string s = q_poly_string(f);
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '^') {
            std::size_t j = i + 1;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out += "^{" + s.substr(i + 1, j - i - 1) + "}";
            i = j - 1;
        } else {
            out += s[i];
        }
    }
    return out;
}

}  // namespace

std::string table_to_latex(const ResolvedTable& t) {
    std::ostringstream os;
    os << "\\begin{tabular}{r|l}\n";
    os << "\\multicolumn{2}{c}{$n = " << t.n << "$} \\\\\n\\hline\n";
    os << "$e$ & $N_{" << t.n << ",e}(q)$ \\\\\n\\hline\n";
    for (const auto& [e, f] : t.entries) os << e << " & $" << latex_poly(f) << "$ \\\\\n";
    os << "\\end{tabular}\n";
    return os.str();
}

}  // namespace algchar
