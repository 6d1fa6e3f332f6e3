#include "algchar/engine.hpp"

#include <algorithm>
#include <map>

namespace algchar {

// ------------------------------------------------------------ categorisations

Categorisation& Categorisation::operator+=(const Categorisation& o) {
    resolved += o.resolved;
    unresolved_counts.insert(unresolved_counts.end(), o.unresolved_counts.begin(), o.unresolved_counts.end());
    families.insert(families.end(), o.families.begin(), o.families.end());
    return *this;
}

Categorisation scale_categorisation(const Categorisation& o, int k, int l, int m) {
    if (k == 0 && l == 0 && m == 0) return o;
    Categorisation r;
    r.resolved = o.resolved.scaled(k, l, m);
    r.unresolved_counts = o.unresolved_counts;
    for (auto& u : r.unresolved_counts) {
        u.u += k;
        u.v += l;
        u.e += m;
    }
    r.families = o.families;
    for (auto& f : r.families) {
        f.k += k;
        f.l += l;
        f.m += m;
    }
    return r;
}

Categorisation aggregate(const std::vector<Categorisation>& parts) {
    Categorisation r;
    for (const auto& p : parts) r += p;
    return r;
}

// ------------------------------------------------------------------ helpers

namespace {

ParamPoly set_poly(const ParamSet& s) { return ParamPoly::product_of(s); }

// +1 times a product of distinct symbols
bool as_param_set(const ParamPoly& f, ParamSet& out) {
    if (f.terms().size() != 1 || f.terms()[0].c != 1) return false;
    out.clear();
    for (auto [s, e] : f.terms()[0].m) {
        if (e != 1) return false;
        out.push_back(s);
    }
    return true;
}

// exact division of f by the monomial prod(c); false if some term is not divisible
bool divide_by_set(const ParamPoly& f, const ParamSet& c, ParamPoly& out) {
    out = ParamPoly();
    for (const auto& t : f.terms()) {
        Monomial m = t.m;
        for (ParamId a : c) {
            auto it = std::find_if(m.begin(), m.end(), [a](const auto& p) { return p.first == a; });
            if (it == m.end()) return false;
            if (--it->second == 0) m.erase(it);
        }
        out = out + ParamPoly::monomial(t.c, std::move(m));
    }
    return true;
}

// Turns structure-constant expressions into parameter sets, adding fresh symbols
// with defining equations where the expression is not a plain product.
class ConstantBuilder {
public:
    explicit ConstantBuilder(AlgebraicData& out) : out_(out), next_(fresh_param(out)) {}

    void put(int u, int v, int w, const ParamPoly& expr) {
        if (expr.is_zero()) return;
        Product p{static_cast<std::uint16_t>(u), static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(w), {}};
        if (!as_param_set(expr, p.factors)) {
            auto it = by_expr_.find(expr);
            ParamId d;
            if (it != by_expr_.end()) {
                d = it->second;
            } else {
                d = next_++;
                out_.params.push_back(d);
                out_.restrictions.push_back(Restriction::equation(ParamPoly::var(d) - expr));
                by_expr_.emplace(expr, d);
            }
            p.factors = {d};
        }
        out_.products.push_back(std::move(p));
    }

    // expr / prod(c), encoding the quotient by d*c = expr when it is not exact
    void put_divided(int u, int v, int w, const ParamPoly& expr, const ParamSet& c) {
        if (expr.is_zero()) return;
        ParamPoly qt;
        if (divide_by_set(expr, c, qt)) {
            put(u, v, w, qt);
            return;
        }
        auto key = std::make_pair(expr, c);
        ParamId d;
        auto it = by_div_.find(key);
        if (it != by_div_.end()) {
            d = it->second;
        } else {
            d = next_++;
            out_.params.push_back(d);
            out_.restrictions.push_back(Restriction::equation(ParamPoly::var(d) * set_poly(c) - expr));
            by_div_.emplace(std::move(key), d);
        }
        out_.products.push_back(
            {static_cast<std::uint16_t>(u), static_cast<std::uint16_t>(v), static_cast<std::uint16_t>(w), {d}});
    }

private:
    struct PolyLess {
        bool operator()(const ParamPoly& a, const ParamPoly& b) const { return a < b; }
    };
    struct DivLess {
        bool operator()(const std::pair<ParamPoly, ParamSet>& a, const std::pair<ParamPoly, ParamSet>& b) const {
            if (a.first < b.first) return true;
            if (b.first < a.first) return false;
            return std::lexicographical_compare(a.second.begin(), a.second.end(), b.second.begin(), b.second.end());
        }
    };
    AlgebraicData& out_;
    ParamId next_;
    std::map<ParamPoly, ParamId, PolyLess> by_expr_;
    std::map<std::pair<ParamPoly, ParamSet>, ParamId, DivLess> by_div_;
};

struct Roles {
    std::vector<char> factor;  // appears as x or y of some product
    std::vector<char> right;   // appears as y
    std::vector<char> hit;     // appears as z
};

Roles roles_of(const AlgebraicData& a) {
    Roles r;
    r.factor.assign(a.dim, 0);
    r.right.assign(a.dim, 0);
    r.hit.assign(a.dim, 0);
    for (const auto& p : a.products) {
        r.factor[p.x] = r.factor[p.y] = 1;
        r.right[p.y] = 1;
        r.hit[p.z] = 1;
    }
    return r;
}

// drop basis vectors that take part in no product (other than `keep`)
AlgebraicData strip_isolated(const AlgebraicData& a, int keep, int& removed, int& new_keep) {
    std::vector<char> used(a.dim, 0);
    for (const auto& p : a.products) used[p.x] = used[p.y] = used[p.z] = 1;
    if (keep >= 0) used[keep] = 1;
    removed = static_cast<int>(std::count(used.begin(), used.end(), 0));
    new_keep = keep;
    if (removed == 0) return a;
    std::vector<int> idx(a.dim, -1);
    int n = 0;
    AlgebraicData r;
    for (int i = 0; i < a.dim; ++i)
        if (used[i]) {
            idx[i] = n++;
            if (!a.labels.empty()) r.labels.push_back(a.labels[i]);
        }
    r.dim = n;
    r.params = a.params;
    r.restrictions = a.restrictions;
    r.param_labels = a.param_labels;
    r.products.reserve(a.products.size());
    for (const auto& p : a.products)
        r.products.push_back({static_cast<std::uint16_t>(idx[p.x]), static_cast<std::uint16_t>(idx[p.y]),
                              static_cast<std::uint16_t>(idx[p.z]), p.factors});
    if (keep >= 0) new_keep = idx[keep];
    return r;
}

void put_u32(std::string& s, std::uint32_t v) {
    do {
        unsigned char b = v & 0x7f;
        v >>= 7;
        if (v) b |= 0x80;
        s.push_back(static_cast<char>(b));
    } while (v);
}

}  // namespace

std::string data_key(const AlgebraicData& a, int z) {
    std::vector<std::pair<ParamId, ParamId>> ren;
    ParamId next = 0;
    auto see = [&](ParamId p) {
        for (auto& [o, n] : ren)
            if (o == p) return;
        ren.emplace_back(p, next++);
    };
    for (const auto& p : a.products)
        for (ParamId s : p.factors) see(s);
    for (const auto& r : a.restrictions) {
        if (r.is_nonzero())
            see(r.param);
        else
            for (const auto& t : r.poly.terms())
                for (auto [s, e] : t.m) see(s);
    }
    for (ParamId p : a.params) see(p);
    std::sort(ren.begin(), ren.end());
    auto nm = [&](ParamId p) {
        auto it = std::lower_bound(ren.begin(), ren.end(), std::make_pair(p, ParamId(0)));
        return it->second;
    };

    std::string s;
    s.reserve(8 + a.products.size() * 4);
    put_u32(s, a.dim);
    put_u32(s, static_cast<std::uint32_t>(z + 1));
    put_u32(s, static_cast<std::uint32_t>(a.params.size()));
    put_u32(s, static_cast<std::uint32_t>(a.products.size()));
    ParamSet tmp;
    for (const auto& p : a.products) {
        put_u32(s, p.x);
        put_u32(s, p.y);
        put_u32(s, p.z);
        put_u32(s, static_cast<std::uint32_t>(p.factors.size()));
        if (p.factors.empty()) continue;
        tmp.clear();
        for (ParamId f : p.factors) tmp.push_back(nm(f));
        std::sort(tmp.begin(), tmp.end());
        for (ParamId f : tmp) put_u32(s, f);
    }
    if (a.restrictions.empty()) return s;
    std::vector<ParamId> nz;
    std::vector<ParamPoly> eqs;
    for (const auto& r : a.restrictions) {
        if (r.is_nonzero())
            nz.push_back(nm(r.param));
        else
            eqs.push_back(r.poly.rename(ren).negated_if_leading_negative());
    }
    std::sort(nz.begin(), nz.end());
    std::sort(eqs.begin(), eqs.end());
    s.push_back('#');
    for (ParamId p : nz) put_u32(s, p);
    for (const auto& e : eqs) {
        s.push_back('=');
        s += e.to_string();
    }
    return s;
}

std::vector<PreparedCase> prepare_cases(const AlgebraicData& a, std::uint64_t* contradictions) {
    std::vector<PreparedCase> out;
    auto s = simplify_data(a);
    if (!s) {
        if (contradictions) ++*contradictions;
        return out;
    }
    for (auto& c : split_into_cases(s->data)) {
        auto s2 = simplify_data(std::move(c));
        if (!s2) {
            if (contradictions) ++*contradictions;
            continue;
        }
        out.push_back({std::move(s2->data), s->k + s2->k, s->l + s2->l});
    }
    return out;
}

// ------------------------------------------------------------ witness search

int choose_z(const AlgebraicData& a) {
    // the last vector that is hit is never a factor: a product out of it would
    // land further along and be hit as well
    int z = -1;
    for (const auto& p : a.products) z = std::max<int>(z, p.z);
    return z < 0 ? a.dim - 1 : z;
}

std::optional<int> find_step2_witness(const AlgebraicData& a, int z) {
    Roles r = roles_of(a);
    std::vector<int> k(a.dim, 0);
    std::vector<char> bad(a.dim, 0);
    for (const auto& p : a.products) {
        if (p.z == z)
            ++k[p.x];
        else
            bad[p.x] = 1;
    }
    std::optional<int> best;
    for (int y = 0; y < a.dim; ++y) {
        if (r.right[y] || bad[y] || k[y] == 0) continue;
        if (!best || k[y] < k[*best]) best = y;
    }
    return best;
}

namespace {

struct Step3Info {
    std::vector<int> L;
    bool has_z = false;
};

std::optional<Step3Info> step3_info(const AlgebraicData& a, const Roles& r, int y, int z) {
    if (r.right[y]) return std::nullopt;
    Step3Info info;
    for (const auto& p : a.products) {
        if (p.x != y) continue;
        if (r.factor[p.z]) return std::nullopt;
        if (info.L.empty() || info.L.back() != p.z) info.L.push_back(p.z);
    }
    std::sort(info.L.begin(), info.L.end());
    info.L.erase(std::unique(info.L.begin(), info.L.end()), info.L.end());
    info.has_z = std::binary_search(info.L.begin(), info.L.end(), z);
    if (info.L.size() - (info.has_z ? 1 : 0) == 0) return std::nullopt;
    return info;
}

}  // namespace

std::optional<int> find_step3_witness(const AlgebraicData& a, int z) {
    Roles r = roles_of(a);
    std::optional<int> best;
    Step3Info bi;
    for (int y = 0; y < a.dim; ++y) {
        auto info = step3_info(a, r, y, z);
        if (!info) continue;
        bool better = !best || (info->has_z && !bi.has_z) ||
                      (info->has_z == bi.has_z && info->L.size() < bi.L.size());
        if (better) {
            best = y;
            bi = *info;
        }
    }
    return best;
}

// ------------------------------------------------------------- contractions

int step2_image_of_z(const AlgebraicData& a, int z, int y) {
    int xk = -1;
    for (const auto& p : a.products)
        if (p.x == y) xk = std::max<int>(xk, p.y);
    return z - (y < z ? 1 : 0) - (xk < z ? 1 : 0);
}

AlgebraicData typeb_step2_contract(const AlgebraicData& a, int z, int y) {
    if (y < 0 || y >= a.dim || z < 0 || z >= a.dim) throw BadWitness("index out of range");
    Roles r = roles_of(a);
    if (r.factor[z]) throw BadWitness("z is not annihilated");
    if (r.right[y]) throw BadWitness("J*y is not zero");
    std::vector<int> xs;
    std::vector<ParamSet> cs;
    for (const auto& p : a.products) {
        if (p.x != y) continue;
        if (p.z != z) throw BadWitness("y*J is not inside <z>");
        xs.push_back(p.y);
        cs.push_back(p.factors);
    }
    if (xs.empty()) throw BadWitness("y*J is zero");
    const int k = static_cast<int>(xs.size());
    const int xk = xs.back();
    const ParamSet& ck = cs.back();
    const ParamPoly ckp = set_poly(ck);

    // position in xs, or -1
    std::vector<int> xpos(a.dim, -1);
    for (int i = 0; i < k; ++i) xpos[xs[i]] = i;
    std::vector<int> nidx(a.dim, -1);
    AlgebraicData out;
    for (int i = 0; i < a.dim; ++i) {
        if (i == y || i == xk) continue;
        nidx[i] = out.dim++;
        if (!a.labels.empty()) out.labels.push_back(xpos[i] >= 0 ? a.labels[i] + "'" : a.labels[i]);
    }
    out.params = a.params;
    out.restrictions = a.restrictions;
    out.param_labels = a.param_labels;

    // old vector -> list of (new vector, coefficient) whose expansion contains it
    auto uses = [&](int old, std::vector<std::pair<int, ParamPoly>>& v) {
        v.clear();
        if (old == y) return;
        if (old == xk) {
            for (int j = 0; j + 1 < k; ++j) v.emplace_back(nidx[xs[j]], -set_poly(cs[j]));
        } else if (xpos[old] >= 0) {
            v.emplace_back(nidx[old], ckp);
        } else {
            v.emplace_back(nidx[old], ParamPoly::constant(1));
        }
    };

    std::map<std::tuple<int, int, int>, ParamPoly> acc;
    std::vector<std::pair<int, ParamPoly>> us, vs;
    for (const auto& p : a.products) {
        if (p.z == y || p.z == xk) continue;
        uses(p.x, us);
        if (us.empty()) continue;
        uses(p.y, vs);
        ParamPoly pp = set_poly(p.factors);
        for (const auto& [u, al] : us)
            for (const auto& [v, be] : vs) {
                auto& slot = acc[{u, v, p.z}];
                slot = slot + al * be * pp;
            }
    }
    ConstantBuilder cb(out);
    for (const auto& [key, expr] : acc) {
        auto [u, v, w] = key;
        if (xpos[w] >= 0)
            cb.put_divided(u, v, nidx[w], expr, ck);
        else
            cb.put(u, v, nidx[w], expr);
    }
    out.normalize();
#ifndef NDEBUG
    validate(out);
#endif
    return out;
}

AlgebraicData typeb_step3_contract(const AlgebraicData& a, int z, int y) {
    if (y < 0 || y >= a.dim || z < 0 || z >= a.dim) throw BadWitness("index out of range");
    Roles r = roles_of(a);
    if (r.factor[z]) throw BadWitness("z is not annihilated");
    auto info = step3_info(a, r, y, z);
    if (!info) throw BadWitness("no Type A contraction through this vector");
    std::vector<char> in_l(a.dim, 0);
    for (int w : info->L) in_l[w] = 1;
    in_l[z] = 1;

    AlgebraicData out;
    out.params = a.params;
    out.restrictions = a.restrictions;
    out.param_labels = a.param_labels;
    std::vector<int> nidx(a.dim, -1);
    for (int i = 0; i < a.dim; ++i) {
        if (in_l[i]) continue;
        nidx[i] = out.dim++;
        if (!a.labels.empty()) out.labels.push_back(a.labels[i]);
    }
    const int zn = out.dim++;
    if (!a.labels.empty()) out.labels.push_back(a.labels[z] + "'");

    // b_i for each w_i in L \ {z}
    std::vector<ParamId> b(a.dim, 0);
    ParamId next = fresh_param(a);
    for (int w : info->L) {
        if (w == z) continue;
        b[w] = next++;
        out.params.push_back(b[w]);
    }
    // keep fresh symbols of the builder clear of the b_i
    std::map<std::tuple<int, int, int>, ParamPoly> acc;
    for (const auto& p : a.products) {
        int u = nidx[p.x], v = nidx[p.y];
        ParamPoly pp = set_poly(p.factors);
        if (!in_l[p.z]) {
            acc[{u, v, nidx[p.z]}] = pp;
        } else if (p.z == z) {
            auto& slot = acc[{u, v, zn}];
            slot = slot + pp;
        } else {
            auto& slot = acc[{u, v, zn}];
            slot = slot + ParamPoly::var(b[p.z]) * pp;
        }
    }
    std::sort(out.params.begin(), out.params.end());
    ConstantBuilder cb(out);
    for (const auto& [key, expr] : acc) {
        auto [u, v, w] = key;
        cb.put(u, v, w, expr);
    }
    out.normalize();
#ifndef NDEBUG
    validate(out);
#endif
    return out;
}

// ------------------------------------------------------------------ engine

Engine::Engine(EngineConfig cfg) : cfg_(cfg) {}

void Engine::clear_memo() {
    general_memo_.clear();
    typeb_memo_.clear();
    count_memo_.clear();
}

bool Engine::over_budget(int depth) {
    if (depth > cfg_.max_depth) return true;
    if (cfg_.max_cases >= 0 && static_cast<std::int64_t>(stats_.cases) > cfg_.max_cases) return true;
    return false;
}

Categorisation Engine::leaf(const AlgebraicData& a) {
    ++stats_.leaves;
    System s{a.params, a.restrictions};
    std::string key = system_key(s);
    auto it = count_memo_.find(key);
    if (it == count_memo_.end()) it = count_memo_.emplace(key, count_solutions(s.params, s.restrictions, cfg_.audit)).first;
    Categorisation o;
    if (it->second.counted) {
        o.resolved = it->second.poly.scaled(0, a.dim, 0);
    } else {
        UnresolvedCount u = it->second.record;
        u.v += a.dim;
        o.unresolved_counts.push_back(std::move(u));
    }
    return o;
}

Categorisation Engine::general(const AlgebraicData& a) {
    validate(a);
    Categorisation out;
    for (auto& c : prepare_cases(a, &stats_.contradictory_cases)) {
        ++stats_.cases;
        out += scale_categorisation(general_rec(c.data, 0), c.k, c.l, 0);
    }
    return out;
}

Categorisation Engine::type_b(const AlgebraicData& a, int z) {
    validate(a);
    if (z < 0 || z >= a.dim) throw std::invalid_argument("z out of range");
    Roles r = roles_of(a);
    if (r.factor[z]) throw std::invalid_argument("z must annihilate the algebra on both sides");
    Categorisation out;
    for (auto& c : prepare_cases(a, &stats_.contradictory_cases)) {
        ++stats_.cases;
        out += scale_categorisation(type_b_rec(c.data, z, 0), c.k, c.l, 0);
    }
    return out;
}

Categorisation Engine::general_rec(const AlgebraicData& in, int depth) {
    ++stats_.general_calls;
    int iso = 0, unused = -1;
    AlgebraicData a = strip_isolated(in, -1, iso, unused);
    if (a.products.empty()) return scale_categorisation(leaf(a), 0, iso, 0);
    if (over_budget(depth)) {
        ++stats_.budget_stops;
        Categorisation o;
        o.families.push_back({{FamilyRef::Kind::all_irr, a, -1}, 0, iso, 0});
        return o;
    }
    std::string key;
    if (cfg_.memo) {
        key = data_key(a);
        auto it = general_memo_.find(key);
        if (it != general_memo_.end()) {
            ++stats_.general_hits;
            return scale_categorisation(it->second, 0, iso, 0);
        }
    }
    int z = choose_z(a);
    Categorisation res;
    {
        auto s = simplify_data(remove_basis_vector(a, z));
        if (s) res += scale_categorisation(general_rec(s->data, depth + 1), s->k, s->l, 0);
    }
    res += type_b_rec(a, z, depth + 1);
    if (cfg_.memo) general_memo_.emplace(std::move(key), res);
    return scale_categorisation(res, 0, iso, 0);
}

Categorisation Engine::type_b_rec(const AlgebraicData& in, int zin, int depth) {
    ++stats_.typeb_calls;
    int iso = 0, z = zin;
    AlgebraicData a = strip_isolated(in, zin, iso, z);
    if (over_budget(depth)) {
        ++stats_.budget_stops;
        Categorisation o;
        o.families.push_back({{FamilyRef::Kind::irr_at_z, a, z}, 0, iso, 0});
        return o;
    }
    std::string key;
    if (cfg_.memo) {
        key = data_key(a, z);
        auto it = typeb_memo_.find(key);
        if (it != typeb_memo_.end()) {
            ++stats_.typeb_hits;
            return scale_categorisation(it->second, 0, iso, 0);
        }
    }
    Categorisation res;
    Roles r = roles_of(a);
    if (!r.hit[z]) {
        ++stats_.step1;
        auto s = simplify_data(remove_basis_vector(a, z));
        if (s) res = scale_categorisation(general_rec(s->data, depth + 1), 1 + s->k, s->l, 0);
    } else if (auto y = find_step2_witness(a, z)) {
        ++stats_.step2;
        AlgebraicData c = typeb_step2_contract(a, z, *y);
        int zc = step2_image_of_z(a, z, *y);
        for (auto& pc : prepare_cases(c, &stats_.contradictory_cases)) {
            ++stats_.cases;
            res += scale_categorisation(type_b_rec(pc.data, zc, depth + 1), pc.k, pc.l, 0);
        }
        res = scale_categorisation(res, 0, 0, 1);
    } else if (auto y3 = find_step3_witness(a, z)) {
        ++stats_.step3;
        AlgebraicData c = typeb_step3_contract(a, z, *y3);
        int zc = c.dim - 1;
        for (auto& pc : prepare_cases(c, &stats_.contradictory_cases)) {
            ++stats_.cases;
            res += scale_categorisation(type_b_rec(pc.data, zc, depth + 1), pc.k, pc.l, 0);
        }
    } else {
        ++stats_.step4;
        res.families.push_back({{FamilyRef::Kind::irr_at_z, a, z}, 0, 0, 0});
    }
    if (cfg_.memo) typeb_memo_.emplace(std::move(key), res);
    return scale_categorisation(res, 0, iso, 0);
}

// ------------------------------------------------------------------ resolve

bool is_cyclic_core(const FamilyRef& f) {
    if (f.kind != FamilyRef::Kind::irr_at_z) return false;
    const auto& d = f.data;
    return d.dim == 2 && f.z == 1 && d.products.size() == 1 && d.products[0].x == 0 && d.products[0].y == 0 &&
           d.products[0].z == 1;
}

ResolvedTable resolve(const Categorisation& o, int n, CountAudit* audit) {
    ResolvedTable t;
    t.n = n;
    for (int e = 0; e <= o.resolved.max_t(); ++e) {
        CountPoly c = o.resolved.t_coeff(e);
        if (!c.is_zero()) t.entries[e] = c;
    }
    t.unresolved_counts = o.unresolved_counts;
    const CountPoly core_count = CountPoly::monomial(1, 1, 0) * CountPoly::q_minus_one_pow(1);
    for (const auto& f : o.families) {
        const auto& d = f.family.data;
        CountResult cnt = count_solutions(d.params, d.restrictions, audit);
        if (cnt.counted && cnt.poly.is_zero()) {
            ++t.dropped_families;
            continue;
        }
        if (!is_cyclic_core(f.family))
            throw UnknownCore("family with a " + std::to_string(d.dim) + "-dimensional core is not recognised");
        if (!cnt.counted) throw UnknownCore("cannot count the substitutions of an exceptional family");
        CountPoly total = (cnt.poly * core_count).scaled(f.k, f.l, 0);
        t.entries[f.m] += total;
        if (t.entries[f.m].is_zero()) t.entries.erase(f.m);
        t.exceptional.push_back({d, f.family.z, f.k, f.l, f.m, total});
    }
    std::sort(t.exceptional.begin(), t.exceptional.end(), [](const ExceptionalFamily& a, const ExceptionalFamily& b) {
        if (a.degree_shift != b.degree_shift) return a.degree_shift < b.degree_shift;
        if (a.k != b.k) return a.k < b.k;
        if (a.l != b.l) return a.l < b.l;
        return data_key(a.core, a.z) < data_key(b.core, b.z);
    });
    return t;
}

}  // namespace algchar
