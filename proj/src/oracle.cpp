#include "algchar/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace algchar {

namespace {

std::uint64_t checked_order(int q, int dim, std::uint64_t max_order) {
    std::uint64_t n = 1;
    for (int i = 0; i < dim; ++i) {
        n *= static_cast<std::uint64_t>(q);
        if (n > max_order) throw TooLarge("group order exceeds " + std::to_string(max_order));
    }
    return n;
}

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

// x -> g^{-1} x g for g = 1 + alpha*e_i, as a dim x dim matrix (columns are images)
std::vector<int> conjugation_matrix(const ConcreteAlgebra& alg, int i, int alpha) {
    const int d = alg.dim();
    const auto& F = alg.field();
    std::vector<int> a(d, 0);
    a[i] = alpha;
    // g^{-1} = 1 + sum_{k>=1} (-a)^k
    std::vector<int> na(d);
    for (int j = 0; j < d; ++j) na[j] = F.neg(a[j]);
    std::vector<int> inv(d, 0), pw = na;
    while (std::any_of(pw.begin(), pw.end(), [](int v) { return v != 0; })) {
        for (int j = 0; j < d; ++j) inv[j] = F.add(inv[j], pw[j]);
        pw = alg.multiply(pw, na);
    }
    std::vector<int> m(d * d, 0);
    for (int c = 0; c < d; ++c) {
        std::vector<int> x(d, 0);
        x[c] = 1;
        auto ix = alg.multiply(inv, x);
        auto xa = alg.multiply(x, a);
        auto ixa = alg.multiply(ix, a);
        for (int r = 0; r < d; ++r) m[r * d + c] = F.add(F.add(x[r], ix[r]), F.add(xa[r], ixa[r]));
    }
    return m;
}

}  // namespace

std::uint64_t class_count(const ConcreteAlgebra& alg, std::uint64_t max_order) {
    const int d = alg.dim(), q = alg.q();
    const std::uint64_t order = checked_order(q, d, max_order);
    const auto& F = alg.field();
    UnionFind uf(order);
    std::uint64_t classes = order;
    std::vector<int> x(d);
    for (int i = 0; i < d; ++i)
        for (int alpha : F.prime_basis()) {
            auto m = conjugation_matrix(alg, i, alpha);
            for (std::uint64_t idx = 0; idx < order; ++idx) {
                std::uint64_t t = idx;
                for (int r = 0; r < d; ++r) {
                    x[r] = static_cast<int>(t % q);
                    t /= q;
                }
                std::uint64_t img = 0;
                for (int r = d - 1; r >= 0; --r) {
                    int v = 0;
                    for (int c = 0; c < d; ++c)
                        if (x[c] && m[r * d + c]) v = F.add(v, F.mul(m[r * d + c], x[c]));
                    img = img * q + v;
                }
                if (uf.unite(static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(img))) --classes;
            }
        }
    return classes;
}

std::uint64_t irr_count_at_z(const ConcreteAlgebra& alg, int z, std::uint64_t max_order) {
    if (z < 0 || z >= alg.dim()) throw NotCentralIdeal("z is not a basis index");
    for (int i = 0; i < alg.dim(); ++i)
        for (int k = 0; k < alg.dim(); ++k)
            if (alg.at(i, z, k) != 0 || alg.at(z, i, k) != 0) throw NotCentralIdeal("J z or z J is nonzero");
    return class_count(alg, max_order) - class_count(alg.quotient(z), max_order);
}

// ------------------------------------------------------------- verification

namespace {

BigInt power(int q, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= q;
    return r;
}

BigInt expected_weighted(int q, int dim, int z) {
    return z < 0 ? power(q, dim) : power(q, dim) - power(q, dim - 1);
}

std::uint64_t oracle_count(const AlgebraicData& a, const Substitution& h, int q0, int z) {
    auto alg = instantiate(a, h, q0);
    return z < 0 ? class_count(alg) : irr_count_at_z(alg, z);
}

struct Totals {
    BigInt sum = 0, weighted = 0;
};

// resolved part plus every family record counted by the oracle
Totals categorisation_totals(const Categorisation& o, int q0) {
    Totals t{o.resolved.eval(q0, TMode::sum), o.resolved.eval(q0, TMode::weight_q2e)};
    for (const auto& f : o.families) {
        const auto& d = f.family.data;
        const int z = f.family.kind == FamilyRef::Kind::irr_at_z ? f.family.z : -1;
        BigInt s = 0, w = 0;
        for (const auto& h : enumerate_substitutions(d, q0)) {
            s += oracle_count(d, h, q0, z);
            w += expected_weighted(q0, d.dim, z);
        }
        BigInt scale = power(q0 - 1, f.k) * power(q0, f.l);
        t.sum += s * scale;
        t.weighted += w * scale * power(q0, 2 * f.m);
    }
    return t;
}

void finish(VerifyReport& r) {
    r.pass = !r.checks.empty() &&
             std::all_of(r.checks.begin(), r.checks.end(), [](const OracleCheck& c) { return c.pass; });
}

}  // namespace

VerifyReport verify_categorisation(const AlgebraicData& a, const Categorisation& o, int q0, int z,
                                   const std::string& instance) {
    VerifyReport r;
    r.instance = instance;
    r.q = q0;
    if (!o.unresolved_counts.empty()) {
        r.note = "categorisation carries unresolved counts";
        return r;
    }
    BigInt sum = 0, weighted = 0;
    for (const auto& h : enumerate_substitutions(a, q0)) {
        sum += oracle_count(a, h, q0, z);
        weighted += expected_weighted(q0, a.dim, z);
    }
    Totals act = categorisation_totals(o, q0);
    const BigInt &s_act = act.sum, &w_act = act.weighted;
    r.checks.push_back({"sum", sum, s_act, sum == s_act});
    r.checks.push_back({"weighted", weighted, w_act, weighted == w_act});
    finish(r);
    return r;
}

AlgebraicData pin_substitution(const AlgebraicData& a, const Substitution& h, int q0) {
    if (q0 != 2 && q0 != 3) throw std::invalid_argument("pinning is only available for q = 2, 3");
    AlgebraicData out = a;
    for (auto [p, v] : h) {
        if (v == 0) {
            out = set_param_zero(out, p);
            continue;
        }
        // 1 or -1
        BigInt c = v == 1 ? 1 : -1;
        out.restrictions.push_back(Restriction::equation(ParamPoly::var(p) - ParamPoly::constant(c)));
    }
    out.normalize();
    return out;
}

VerifyReport verify_substitutions(const AlgebraicData& a, int q0, int z, Engine& engine, const std::string& instance) {
    VerifyReport r;
    r.instance = instance;
    r.q = q0;
    BigInt s_tot_exp = 0, s_tot_act = 0, w_tot_exp = 0, w_tot_act = 0;
    for (const auto& h : enumerate_substitutions(a, q0)) {
        AlgebraicData pinned = pin_substitution(a, h, q0);
        Categorisation o = z < 0 ? engine.general(pinned) : engine.type_b(pinned, z);
        if (!o.unresolved_counts.empty()) {
            r.note = "categorisation carries unresolved counts";
            r.counterexample = h;
            return r;
        }
        BigInt s_exp = oracle_count(a, h, q0, z), w_exp = expected_weighted(q0, a.dim, z);
        Totals act = categorisation_totals(o, q0);
        const BigInt &s_act = act.sum, &w_act = act.weighted;
        if (s_exp != s_act || w_exp != w_act) {
            r.checks = {{"sum", s_exp, s_act, s_exp == s_act}, {"weighted", w_exp, w_act, w_exp == w_act}};
            r.counterexample = h;
            finish(r);
            return r;
        }
        s_tot_exp += s_exp;
        s_tot_act += s_act;
        w_tot_exp += w_exp;
        w_tot_act += w_act;
    }
    r.checks = {{"sum", s_tot_exp, s_tot_act, true}, {"weighted", w_tot_exp, w_tot_act, true}};
    finish(r);
    return r;
}

// ------------------------------------------------------------------- orbits

std::uint64_t orbit_size(const Poset& p, const std::vector<int>& u, int q) {
    const int n = p.size();
    if (static_cast<int>(u.size()) != n) throw std::invalid_argument("vector length does not match the poset");
    FiniteField F(q);
    checked_order(q, n, kDefaultMaxOrder);
    auto encode = [&](const std::vector<int>& v) {
        std::uint64_t c = 0;
        for (int i = n - 1; i >= 0; --i) c = c * q + v[i];
        return c;
    };
    auto rel = p.relation();
    auto basis = F.prime_basis();
    std::unordered_set<std::uint64_t> seen{encode(u)};
    std::vector<std::vector<int>> stack{u};
    while (!stack.empty()) {
        auto v = std::move(stack.back());
        stack.pop_back();
        // (1 + alpha e_ij) v adds alpha v_j to v_i
        for (auto [i, j] : rel) {
            if (v[j] == 0) continue;
            for (int alpha : basis) {
                auto w = v;
                w[i] = F.add(w[i], F.mul(alpha, v[j]));
                if (seen.insert(encode(w)).second) stack.push_back(std::move(w));
            }
        }
    }
    return seen.size();
}

}  // namespace algchar
