// End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "algchar/oracle.hpp"
#include "algchar/report.hpp"
#include "support.hpp"

using namespace algchar;

namespace {

CountAudit g_audit(8);

EngineConfig audited() {
    EngineConfig cfg;
    cfg.audit = &g_audit;
    return cfg;
}

std::map<int, ComputeResult> g_tables;

const ComputeResult& table(int n) {
    auto it = g_tables.find(n);
    if (it == g_tables.end()) it = g_tables.emplace(n, compute_chain(n, audited())).first;
    return it->second;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failed = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& ex) {
        o = {false, std::string("exception: ") + ex.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++g_failed;
    std::printf("[%s] %d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", id, name, s, o.detail.c_str());
    std::fflush(stdout);
}

Outcome appendix() {
    std::ostringstream os;
    for (int n : {10, 11, 12, 13}) {
        const auto& r = table(n);
        if (auto m = compare_tables(n, load_golden(n), r.table.entries)) return {false, m->describe()};
        os << "n=" << n << " " << r.seconds << "s ";
    }
    return {true, os.str() + "all four tables equal"};
}

Outcome full_resolution() {
    for (int n = 1; n <= 12; ++n) {
        const auto& t = table(n).table;
        if (!t.unresolved_counts.empty() || !t.exceptional.empty() || t.dropped_families)
            return {false, "n=" + std::to_string(n) + " has leftover records"};
    }
    return {true, "n=1..12: no unresolved counts, no families"};
}

Outcome exceptional() {
    const auto& r = table(13);
    const auto& t = r.table;
    if (!t.unresolved_counts.empty()) return {false, std::to_string(t.unresolved_counts.size()) + " unresolved counts"};
    if (t.exceptional.size() != 1) return {false, std::to_string(t.exceptional.size()) + " families"};
    const auto& f = t.exceptional[0];
    if (!is_cyclic_core({FamilyRef::Kind::irr_at_z, f.core, f.z})) return {false, "core is not cyclic"};
    CountPoly want = CountPoly::constant(1).scaled(13, 1, 0);
    if (!(f.total_count == want)) return {false, "count " + q_poly_string(f.total_count)};
    if (f.degree_shift != 16) return {false, "degree shift " + std::to_string(f.degree_shift)};
    // contradictory branches are pruned when the case split happens, before any family is
    // built, so they show up in the engine statistics rather than as dropped families
    std::uint64_t contra = r.engine.contradictory_cases;
    if (contra + t.dropped_families == 0) return {false, "no contradictory restrictions detected"};
    return {true, "one cyclic core, q(q-1)^13 characters of degree q^16; contradictory cases pruned: " +
                      std::to_string(contra) + ", families dropped at resolution: " +
                      std::to_string(t.dropped_families)};
}

Outcome identities() {
    for (int n = 1; n <= 13; ++n)
        for (const auto& id : check_identities(n, table(n).table.entries))
            if (!id.pass) return {false, "n=" + std::to_string(n) + " " + id.name + ": " + id.detail};
    return {true, "sum rule, linear characters, t+1 positivity for n=1..13"};
}

Outcome oracle() {
    std::ostringstream os;
    for (int n = 1; n <= 5; ++n)
        for (int q : {2, 3}) {
            BigInt total = 0;
            for (const auto& [e, f] : table(n).table.entries) total += f.eval(q, TMode::sum);
            std::uint64_t k = class_count(instantiate(algchar::testing::t_n(n), {}, q));
            if (total != BigInt(k))
                return {false, "n=" + std::to_string(n) + " q=" + std::to_string(q) + ": " + total.str() +
                                   " vs " + std::to_string(k)};
            if (n == 5) os << "k(U_5(" << q << "))=" << k << " ";
        }
    return {true, os.str() + "n=1..5, q=2,3"};
}

Outcome type_b_property() {
    std::mt19937_64 rng(20240613);
    int done = 0, substitutions = 0;
    while (done < 220) {
        AlgebraicData a = algchar::testing::random_data(rng, 5, 2);
        auto zs = algchar::testing::annihilating(a);
        std::uniform_int_distribution<std::size_t> pick(0, zs.size() - 1);
        int z = zs[pick(rng)];
        Engine e(audited());
        for (int q : {2, 3}) {
            auto r = verify_substitutions(a, q, z, e, "random");
            if (!r.pass) return {false, to_json(a).dump() + " z=" + std::to_string(z) + " q=" + std::to_string(q) + " " + r.note};
            substitutions += static_cast<int>(enumerate_substitutions(a.params, a.restrictions, q).size());
        }
        ++done;
    }
    return {true, std::to_string(done) + " data, " + std::to_string(substitutions) + " substitutions"};
}

Outcome two_paths() {
    for (int n = 1; n <= 8; ++n) {
        Engine e(audited());
        ResolvedTable g = resolve(e.general(algchar::testing::t_n(n)), n);
        if (auto m = compare_tables(n, g.entries, table(n).table.entries)) return {false, m->describe()};
    }
    return {true, "n=1..8 equal"};
}

Outcome orbits() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> size_d(2, 6);
    std::uniform_real_distribution<double> u(0, 1);
    int checks = 0;
    for (int it = 0; it < 80; ++it) {
        int n = size_d(rng);
        std::vector<ElemSet> succ(n, 0);
        for (int i = n - 1; i >= 0; --i)
            for (int j = i + 1; j < n; ++j)
                if (u(rng) < 0.4) succ[i] |= (ElemSet(1) << j) | succ[j];
        Poset p = Poset::from_masks(succ);
        for (int q : {2, 3}) {
            std::uniform_int_distribution<int> val(0, q - 1);
            std::vector<int> v(n);
            ElemSet supp = 0;
            for (int i = 0; i < n; ++i)
                if ((v[i] = val(rng))) supp |= ElemSet(1) << i;
            auto tc = top_and_closure(supp, p);
            std::uint64_t want = 1;
            for (int i = 0; i < popcount(tc.closure & ~tc.top); ++i) want *= q;
            std::uint64_t got = orbit_size(p, v, q);
            if (got != want) return {false, p.key() + ": " + std::to_string(got) + " vs " + std::to_string(want)};
            ++checks;
        }
    }
    return {true, std::to_string(checks) + " orbits over F_2 and F_3"};
}

Outcome audit() {
    int bad = 0;
    for (const auto& en : g_audit.entries())
        for (int q : {2, 3, 4, 5})
            if (en.poly.eval(q, TMode::sum) != BigInt(count_substitutions(en.system.params, en.system.restrictions, q)))
                ++bad;
    return {bad == 0, std::to_string(g_audit.size()) + " counted systems re-checked at q=2..5, " +
                          std::to_string(bad) + " violations"};
}

}  // namespace

int main() {
    criterion(1, "appendix reproduction", appendix);
    criterion(2, "full resolution for n<=12", full_resolution);
    criterion(3, "exceptional family at n=13", exceptional);
    criterion(4, "formal identities", identities);
    criterion(5, "class numbers of U_n(q)", oracle);
    criterion(6, "Type B bijection", type_b_property);
    criterion(7, "pattern and General paths", two_paths);
    criterion(8, "orbit sizes", orbits);
    criterion(9, "solution counts", audit);
    std::printf("%d of 9 criteria failed\n", g_failed);
    return g_failed ? 1 : 0;
}
