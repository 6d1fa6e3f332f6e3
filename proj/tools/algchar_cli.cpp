// algchar: character counts of unitriangular groups via the contraction calculus.
//
// exit status: 0 ok, 1 failed check or bad input, 2 unresolved records, 3 regression mismatch

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "algchar/oracle.hpp"
#include "algchar/report.hpp"

using namespace algchar;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1, kExitUnresolved = 2, kExitMismatch = 3;

struct Options {
    std::string n_spec = "10";
    std::string poset_file;
    std::string format = "json";
    std::string out;
    std::vector<int> oracle_qs{2, 3};
    int max_depth = 1 << 20;
    long long max_cases = -1;
    bool no_memo = false;
    bool no_cache = false;
    bool verify = false;
    int threads = 1;
    int max_n = 13;
};

// "13" or "10..13"
std::vector<int> parse_range(const std::string& s) {
    auto dots = s.find("..");
    int lo, hi;
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoi(s);
        } else {
            lo = std::stoi(s.substr(0, dots));
            hi = std::stoi(s.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--n", "expected N or A..B, got '" + s + "'");
    }
    if (lo < 1 || hi < lo || hi > 64) throw CLI::ValidationError("--n", "range out of bounds: " + s);
    std::vector<int> v;
    for (int n = lo; n <= hi; ++n) v.push_back(n);
    return v;
}

EngineConfig engine_config(const Options& o) {
    EngineConfig c;
    c.max_depth = o.max_depth;
    c.max_cases = o.max_cases;
    c.memo = !o.no_memo;
    return c;
}

std::string cache_dir() {
    const char* d = std::getenv("ALGCHAR_CACHE_DIR");
    return d ? d : "";
}

std::string cache_path(int n) { return cache_dir() + "/table_n" + std::to_string(n) + ".json"; }

ResolvedTable obtain_table(int n, const Options& o) {
    bool cacheable = !cache_dir().empty() && !o.no_cache && o.max_cases < 0 && o.max_depth == (1 << 20);
    if (cacheable) {
        std::ifstream in(cache_path(n));
        if (in) {
            try {
                return table_from_json(json::parse(in));
            } catch (const std::exception& e) {
                std::cerr << "ignoring unreadable cache entry " << cache_path(n) << ": " << e.what() << "\n";
            }
        }
    }
    auto r = compute_chain(n, engine_config(o));
    std::cerr << "n=" << n << ": " << r.seconds << " s, " << r.engine.general_calls << " General and "
              << r.engine.typeb_calls << " TypeB calls\n";
    if (cacheable && r.table.unresolved_counts.empty()) {
        std::filesystem::create_directories(cache_dir());
        std::ofstream(cache_path(n)) << table_to_json(r.table).dump() << "\n";
    }
    return r.table;
}

// computes several n, spreading them over worker threads
std::vector<ResolvedTable> obtain_tables(const std::vector<int>& ns, const Options& o) {
    std::vector<ResolvedTable> out(ns.size());
    std::vector<std::exception_ptr> errs(ns.size());
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lk(mu);
                if (next == ns.size()) return;
                i = next++;
            }
            try {
                out[i] = obtain_table(ns[i], o);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    int nt = std::max(1, std::min<int>(o.threads, static_cast<int>(ns.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

void emit(const std::string& text, const Options& o) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
}

std::string render(const std::vector<ResolvedTable>& ts, const std::string& format) {
    if (format == "json") {
        if (ts.size() == 1) return table_to_json(ts[0]).dump(2) + "\n";
        json j = json::array();
        for (const auto& t : ts) j.push_back(table_to_json(t));
        return j.dump(2) + "\n";
    }
    std::string s;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (format == "csv") {
            std::string c = table_to_csv(ts[i]);
            s += i == 0 ? c : c.substr(c.find('\n') + 1);
        } else {
            s += table_to_latex(ts[i]);
            if (i + 1 < ts.size()) s += "\n";
        }
    }
    return s;
}

// {"elems":[...], "rel":[[a,b],...]} with arbitrary element labels
Poset read_poset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j = json::parse(in);
    std::vector<std::string> names;
    for (const auto& e : j.at("elems")) names.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    auto idx = [&](const json& e) {
        std::string s = e.is_string() ? e.get<std::string>() : e.dump();
        auto it = std::find(names.begin(), names.end(), s);
        if (it == names.end()) throw std::invalid_argument("unknown poset element " + s);
        return static_cast<int>(it - names.begin());
    };
    std::vector<std::pair<int, int>> rel;
    for (const auto& r : j.at("rel")) rel.emplace_back(idx(r.at(0)), idx(r.at(1)));
    return Poset::from_pairs(static_cast<int>(names.size()), rel);
}

int exit_for(const std::vector<ResolvedTable>& ts) {
    for (const auto& t : ts)
        if (!t.unresolved_counts.empty()) return kExitUnresolved;
    return 0;
}

// ---------------------------------------------------------------- commands

int cmd_compute(const Options& o) {
    std::vector<ResolvedTable> ts;
    if (!o.poset_file.empty()) {
        Poset p = read_poset(o.poset_file);
        Engine engine(engine_config(o));
        PatternEngine pe(engine);
        ts.push_back(resolve(pe.run(p), p.size()));
    } else {
        ts = obtain_tables(parse_range(o.n_spec), o);
    }
    emit(render(ts, o.format), o);
    int rc = exit_for(ts);
    if (o.verify && o.poset_file.empty()) {
        for (const auto& t : ts) {
            if (t.n > 5) continue;
            for (int q : o.oracle_qs) {
                auto alg = instantiate(encode_pattern(Poset::chain(t.n)), {}, q);
                BigInt want = class_count(alg), got = 0;
                for (const auto& [e, f] : t.entries) got += f.eval(q, TMode::sum);
                std::cerr << "verify n=" << t.n << " q=" << q << ": oracle " << want << ", table " << got
                          << (want == got ? " ok" : " MISMATCH") << "\n";
                if (want != got && rc == 0) rc = kExitFail;
            }
        }
    }
    return rc;
}

int cmd_regress(const Options& o, const std::string& dir) {
    std::vector<int> ns = o.n_spec.empty() ? golden_sizes(dir) : parse_range(o.n_spec);
    if (ns.empty()) throw GoldenMissing("no golden tables under " + dir + "/appendix");
    std::vector<Table> golden;
    for (int n : ns) golden.push_back(load_golden(n, dir));
    auto ts = obtain_tables(ns, o);
    int rc = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!ts[i].unresolved_counts.empty()) {
            std::cout << "n=" << ns[i] << ": " << ts[i].unresolved_counts.size() << " unresolved count records\n";
            rc = std::max(rc, kExitUnresolved);
        }
        if (auto m = compare_tables(ns[i], golden[i], ts[i].entries)) {
            std::cout << "n=" << ns[i] << ": MISMATCH " << m->describe() << "\n";
            rc = kExitMismatch;
        } else {
            std::cout << "n=" << ns[i] << ": ok (" << golden[i].size() << " rows)\n";
        }
    }
    return rc;
}

int cmd_identities(const Options& o) {
    std::vector<int> ns;
    for (int n = 1; n <= o.max_n; ++n) ns.push_back(n);
    auto ts = obtain_tables(ns, o);
    bool ok = true;
    for (const auto& t : ts) {
        for (const auto& r : check_identities(t.n, t.entries)) {
            std::cout << "n=" << t.n << " " << r.name << ": " << (r.pass ? "ok" : "FAIL") << " (" << r.detail << ")\n";
            ok = ok && r.pass;
        }
    }
    int rc = exit_for(ts);
    return rc ? rc : (ok ? 0 : kExitFail);
}

int cmd_verify(const Options& o, const std::string& data_file) {
    json out = json::array();
    bool ok = true;
    if (!data_file.empty()) {
        std::ifstream in(data_file);
        if (!in) throw std::runtime_error("cannot read " + data_file);
        AlgebraicData a = data_from_json(json::parse(in));
        Engine engine(engine_config(o));
        Categorisation c = engine.general(a);
        for (int q : o.oracle_qs) {
            auto r = verify_categorisation(a, c, q, -1, data_file);
            for (const auto& ch : r.checks)
                out.push_back({{"instance", data_file + " (" + ch.quantity + ")"},
                               {"q", q},
                               {"expected", ch.expected.str()},
                               {"actual", ch.actual.str()},
                               {"pass", ch.pass}});
            if (!r.note.empty())
                out.push_back({{"instance", data_file}, {"q", q}, {"note", r.note}, {"pass", false}});
            ok = ok && r.pass;
        }
    } else {
        std::vector<int> ns;
        for (int n = 1; n <= o.max_n; ++n) ns.push_back(n);
        auto ts = obtain_tables(ns, o);
        for (const auto& t : ts)
            for (int q : o.oracle_qs) {
                auto alg = instantiate(encode_pattern(Poset::chain(t.n)), {}, q);
                BigInt want = class_count(alg), got = 0;
                for (const auto& [e, f] : t.entries) got += f.eval(q, TMode::sum);
                out.push_back({{"instance", "U_" + std::to_string(t.n)},
                               {"q", q},
                               {"expected", want.str()},
                               {"actual", got.str()},
                               {"pass", want == got}});
                ok = ok && want == got;
            }
    }
    std::cout << out.dump(2) << "\n";
    return ok ? 0 : kExitFail;
}

int cmd_dump_families(const Options& o) {
    auto ns = parse_range(o.n_spec);
    json out = json::array();
    for (int n : ns) {
        auto r = compute_chain(n, engine_config(o));
        json j = table_to_json(r.table);
        out.push_back({{"n", n},
                       {"families", j["families"]},
                       {"dropped_families", r.table.dropped_families},
                       {"contradictory_cases", r.engine.contradictory_cases},
                       {"unresolved_counts", j["unresolved_counts"]}});
    }
    emit((ns.size() == 1 ? out[0] : out).dump(2) + "\n", o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact character counts N_{n,e}(q) of unitriangular groups U_n(q)"};
    app.require_subcommand(1);
    Options o;
    std::string golden_dir = data_dir(), data_file;

    auto add_engine = [&](CLI::App* c) {
        c->add_option("--max-depth", o.max_depth, "recursion depth budget");
        c->add_option("--max-cases", o.max_cases, "case budget (negative: unlimited)");
        c->add_flag("--no-memo", o.no_memo, "disable memoisation");
        c->add_flag("--no-cache", o.no_cache, "ignore $ALGCHAR_CACHE_DIR");
        c->add_option("--threads", o.threads, "worker threads (one table per thread)")->check(CLI::Range(1, 256));
    };
    auto qs_check = CLI::IsMember({2, 3, 4, 5});

    auto* compute = app.add_subcommand("compute", "compute N_{n,e}(q) for the chain [1,n] or a poset");
    compute->add_option("--n", o.n_spec, "n or a range A..B");
    compute->add_option("--poset", o.poset_file, "JSON poset {\"elems\":[...],\"rel\":[[a,b],...]}");
    compute->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv", "latex"}));
    compute->add_option("--out", o.out, "output file (default: stdout)");
    compute->add_flag("--verify", o.verify, "cross-check n <= 5 against conjugacy class counts");
    compute->add_option("--oracle-q", o.oracle_qs, "field sizes for --verify")->check(qs_check);
    add_engine(compute);

    auto* regress = app.add_subcommand("regress", "compare against the golden appendix tables");
    regress->add_option("--n", o.n_spec, "n or a range (default: every golden table)");
    regress->add_option("--golden-dir", golden_dir, "data directory holding appendix/n<N>.txt");
    add_engine(regress);

    auto* ident = app.add_subcommand("identities", "sum rule, linear characters, nonnegativity in t+1");
    ident->add_option("--max-n", o.max_n)->check(CLI::Range(1, 64));
    add_engine(ident);

    auto* verify = app.add_subcommand("verify", "brute-force class-count checks");
    verify->add_option("--max-n", o.max_n)->check(CLI::Range(1, 6));
    verify->add_option("--q", o.oracle_qs)->check(qs_check);
    verify->add_option("--data", data_file, "algebraic data JSON to run General on instead");
    add_engine(verify);

    auto* dump = app.add_subcommand("dump-families", "list surviving families and unresolved records");
    dump->add_option("--n", o.n_spec, "n or a range");
    dump->add_option("--out", o.out);
    add_engine(dump);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compute) return cmd_compute(o);
        if (*regress) {
            if (regress->count("--n") == 0) o.n_spec.clear();
            return cmd_regress(o, golden_dir);
        }
        if (*ident) return cmd_identities(o);
        if (*verify) {
            if (verify->count("--max-n") == 0) o.max_n = 5;
            return cmd_verify(o, data_file);
        }
        if (*dump) return cmd_dump_families(o);
    } catch (const GoldenMissing& e) {
        std::cerr << "golden data missing: " << e.what() << "\n";
        return kExitFail;
    } catch (const UnknownCore& e) {
        std::cerr << "unrecognised core: " << e.what() << "\n";
        return kExitUnresolved;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return 0;
}
