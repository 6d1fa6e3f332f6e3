#include "algchar/solcount.hpp"

#include <algorithm>
#include <sstream>

namespace algchar {

namespace {

enum class Status { ok, contradiction };

bool is_pm_one(const BigInt& c) { return c == 1 || c == -1; }

std::vector<ParamId> nonzero_params(const std::vector<Restriction>& e) {
    std::vector<ParamId> out;
    for (const auto& r : e)
        if (r.is_nonzero()) out.push_back(r.param);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool contains(const std::vector<ParamId>& v, ParamId a) { return std::binary_search(v.begin(), v.end(), a); }

// single term, coefficient +-1, every symbol known to be nonzero
bool is_unit(const ParamPoly& f, const std::vector<ParamId>& nz) {
    if (f.terms().size() != 1 || !is_pm_one(f.terms()[0].c)) return false;
    for (auto [s, e] : f.terms()[0].m)
        if (!contains(nz, s)) return false;
    return true;
}

// divide f by the largest monomial in nonzero symbols that divides every term
ParamPoly strip_nonzero_content(const ParamPoly& f, const std::vector<ParamId>& nz) {
    if (f.terms().size() < 2) return f;
    Monomial g = f.terms()[0].m;
    for (const auto& t : f.terms()) {
        Monomial h;
        for (auto [s, e] : g) {
            auto it = std::find_if(t.m.begin(), t.m.end(), [s](const auto& p) { return p.first == s; });
            if (it != t.m.end() && contains(nz, s)) h.emplace_back(s, std::min(e, it->second));
        }
        g = std::move(h);
        if (g.empty()) return f;
    }
    ParamPoly out;
    for (const auto& t : f.terms()) {
        Monomial m;
        for (auto [s, e] : t.m) {
            auto it = std::find_if(g.begin(), g.end(), [s](const auto& p) { return p.first == s; });
            std::uint32_t left = it == g.end() ? e : e - it->second;
            if (left) m.emplace_back(s, left);
        }
        out = out + ParamPoly::monomial(t.c, std::move(m));
    }
    return out;
}

// Drop zero equations, cancel nonzero monomial factors, sign-normalise, dedupe;
// detect "unit = 0".
Status normalize(std::vector<Restriction>& e) {
    auto nz = nonzero_params(e);
    std::vector<Restriction> out;
    for (auto& r : e) {
        if (!r.is_nonzero()) {
            if (r.poly.is_zero()) continue;
            r.poly = strip_nonzero_content(r.poly, nz);
            if (is_unit(r.poly, nz)) return Status::contradiction;
            r.poly = r.poly.negated_if_leading_negative();
        }
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    e = std::move(out);
    return Status::ok;
}

System with_zero(const System& s, ParamId x) {
    System r;
    for (ParamId p : s.params)
        if (p != x) r.params.push_back(p);
    for (const auto& e : s.restrictions) {
        if (e.is_nonzero()) {
            if (e.param == x)
                r.restrictions.push_back(Restriction::equation(ParamPoly::constant(1)));
            else
                r.restrictions.push_back(e);
        } else {
            r.restrictions.push_back(Restriction::equation(e.poly.set_zero(x)));
        }
    }
    return r;
}

System with_nonzero(System s, ParamId x) {
    s.restrictions.push_back(Restriction::nonzero(x));
    return s;
}

System without_nonzero(System s, ParamId x) {
    s.restrictions.erase(std::remove_if(s.restrictions.begin(), s.restrictions.end(),
                                        [x](const Restriction& r) { return r.is_nonzero() && r.param == x; }),
                         s.restrictions.end());
    return s;
}

// x occurs in f to the first power with a unit coefficient; rest is the x-free part
struct LinearHit {
    std::size_t eq;
    ParamId x;
    ParamPoly coef, rest;
};

std::optional<LinearHit> linear_in(const ParamPoly& f, std::size_t idx, ParamId x, const std::vector<ParamId>& nz) {
    if (f.degree_in(x) != 1) return std::nullopt;
    auto cs = f.coefficients_in(x);
    if (!is_unit(cs[1], nz)) return std::nullopt;
    return LinearHit{idx, x, cs[1], cs[0]};
}

// rest is a nonzero value in every field: +-1 times a product of nonzero symbols
bool rest_is_unit(const ParamPoly& rest, const std::vector<ParamId>& nz) { return is_unit(rest, nz); }

// rest is +-(monomial); after elimination x != 0 becomes "each symbol of rest != 0"
bool rest_is_pm_monomial(const ParamPoly& rest) {
    return rest.terms().size() == 1 && is_pm_one(rest.terms()[0].c);
}

System apply_elimination(const System& s, const LinearHit& h, bool x_nonzero) {
    System r;
    for (ParamId p : s.params)
        if (p != h.x) r.params.push_back(p);
    ParamPoly neg_rest = -h.rest;
    for (std::size_t i = 0; i < s.restrictions.size(); ++i) {
        const auto& e = s.restrictions[i];
        if (i == h.eq) continue;
        if (e.is_nonzero()) {
            if (e.param != h.x) r.restrictions.push_back(e);
            continue;
        }
        unsigned d = e.poly.degree_in(h.x);
        if (d == 0) {
            r.restrictions.push_back(e);
            continue;
        }
        auto gs = e.poly.coefficients_in(h.x);
        ParamPoly out;
        ParamPoly rp = ParamPoly::constant(1);
        for (unsigned j = 0; j <= d; ++j) {
            if (!gs[j].is_zero()) out = out + gs[j] * rp * h.coef.pow(d - j);
            rp = rp * neg_rest;
        }
        r.restrictions.push_back(Restriction::equation(std::move(out)));
    }
    if (x_nonzero) {
        if (h.rest.is_zero()) {
            r.restrictions.push_back(Restriction::equation(ParamPoly::constant(1)));
        } else {
            for (auto [sym, ex] : h.rest.terms()[0].m) r.restrictions.push_back(Restriction::nonzero(sym));
        }
    }
    return r;
}

std::optional<System> eliminate_one(const System& s, const std::vector<ParamId>& keep) {
    auto nz = nonzero_params(s.restrictions);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < s.restrictions.size(); ++i) {
            const auto& e = s.restrictions[i];
            if (e.is_nonzero()) continue;
            for (ParamId x : e.poly.symbols()) {
                if (std::find(keep.begin(), keep.end(), x) != keep.end()) continue;
                bool xnz = contains(nz, x);
                if ((pass == 0) == xnz) continue;
                auto hit = linear_in(e.poly, i, x, nz);
                if (!hit) continue;
                if (xnz && !hit->rest.is_zero() && !rest_is_pm_monomial(hit->rest)) continue;
                return apply_elimination(s, *hit, xnz);
            }
        }
    }
    return std::nullopt;
}

const CountPoly& q_poly() {
    static const CountPoly q = CountPoly::monomial(1, 1, 0);
    return q;
}
const CountPoly& qm1_poly() {
    static const CountPoly q = CountPoly::q_minus_one_pow(1);
    return q;
}

std::optional<CountPoly> count_rec(System s, int depth) {
    if (depth > 200) return std::nullopt;
    if (normalize(s.restrictions) == Status::contradiction) return CountPoly{};
    auto nz = nonzero_params(s.restrictions);

    // a constant with |c| >= 2 depends on the characteristic
    for (const auto& e : s.restrictions)
        if (!e.is_nonzero() && e.poly.is_constant()) return std::nullopt;

    // +-monomial = 0 with exactly one possibly-zero symbol forces it to vanish
    for (const auto& e : s.restrictions) {
        if (e.is_nonzero() || e.poly.terms().size() != 1 || !is_pm_one(e.poly.terms()[0].c)) continue;
        std::vector<ParamId> open;
        for (auto [sym, ex] : e.poly.terms()[0].m)
            if (!contains(nz, sym)) open.push_back(sym);
        if (open.size() == 1) return count_rec(with_zero(s, open[0]), depth + 1);
    }

    CountPoly factor = CountPoly::constant(1);
    {
        std::vector<ParamId> mentioned;
        for (const auto& e : s.restrictions)
            if (!e.is_nonzero())
                for (ParamId x : e.poly.symbols()) mentioned.push_back(x);
        std::sort(mentioned.begin(), mentioned.end());
        System t;
        for (ParamId p : s.params) {
            if (contains(mentioned, p)) {
                t.params.push_back(p);
                continue;
            }
            factor = factor * (contains(nz, p) ? qm1_poly() : q_poly());
        }
        for (const auto& e : s.restrictions)
            if (!e.is_nonzero() || contains(mentioned, e.param)) t.restrictions.push_back(e);
        s = std::move(t);
    }
    if (s.restrictions.empty()) return factor;
    nz = nonzero_params(s.restrictions);

    if (auto r = eliminate_one(s, {})) {
        auto c = count_rec(std::move(*r), depth + 1);
        if (!c) return std::nullopt;
        return factor * *c;
    }

    // split on a possibly-zero symbol, preferring one inside a coefficient of a linear symbol
    std::optional<ParamId> pick;
    for (const auto& e : s.restrictions) {
        if (e.is_nonzero() || pick) continue;
        for (ParamId x : e.poly.symbols()) {
            if (e.poly.degree_in(x) != 1) continue;
            auto cs = e.poly.coefficients_in(x);
            if (cs[1].terms().size() != 1 || !is_pm_one(cs[1].terms()[0].c)) continue;
            for (auto [sym, ex] : cs[1].terms()[0].m)
                if (!contains(nz, sym)) {
                    pick = sym;
                    break;
                }
            if (pick) break;
        }
    }
    if (!pick)
        for (const auto& e : s.restrictions) {
            if (e.is_nonzero() || pick) continue;
            for (ParamId x : e.poly.symbols())
                if (!contains(nz, x)) {
                    pick = x;
                    break;
                }
        }
    if (pick) {
        auto a = count_rec(with_nonzero(s, *pick), depth + 1);
        if (!a) return std::nullopt;
        auto b = count_rec(with_zero(s, *pick), depth + 1);
        if (!b) return std::nullopt;
        return factor * (*a + *b);
    }

    // every symbol is nonzero: |V(E)| = |V(E minus x!=0)| - |V(E, x=0)| for a linear x
    for (std::size_t i = 0; i < s.restrictions.size(); ++i) {
        const auto& e = s.restrictions[i];
        if (e.is_nonzero()) continue;
        for (ParamId x : e.poly.symbols()) {
            if (!linear_in(e.poly, i, x, nz)) continue;
            auto a = count_rec(without_nonzero(s, x), depth + 1);
            if (!a) return std::nullopt;
            auto b = count_rec(with_zero(without_nonzero(s, x), x), depth + 1);
            if (!b) return std::nullopt;
            return factor * (*a - *b);
        }
    }
    return std::nullopt;
}

}  // namespace

std::string system_key(const System& s) {
    std::ostringstream os;
    for (ParamId p : s.params) os << p << ',';
    os << '|';
    for (const auto& r : s.restrictions) os << r.to_string() << ';';
    return os.str();
}

void CountAudit::record(const System& s, const CountPoly& f) {
    if (s.params.size() > max_params_) return;
    std::string k = system_key(s);
    std::lock_guard<std::mutex> g(mu_);
    if (!seen_.insert(std::move(k)).second) return;
    entries_.push_back({s, f});
}

std::vector<CountAudit::Entry> CountAudit::entries() const {
    std::lock_guard<std::mutex> g(mu_);
    return entries_;
}

std::size_t CountAudit::size() const {
    std::lock_guard<std::mutex> g(mu_);
    return entries_.size();
}

CountResult count_solutions(const std::vector<ParamId>& q, const std::vector<Restriction>& e, CountAudit* audit) {
    System s{q, e};
    std::sort(s.params.begin(), s.params.end());
    auto r = count_rec(s, 0);
    if (!r) return CountResult::make_unresolved({q, e, 0, 0, 0});
    if (audit) audit->record(System{q, e}, *r);
    return CountResult::make_counted(std::move(*r));
}

std::optional<System> eliminate_linear(const System& s, const std::vector<ParamId>& keep) {
    std::optional<System> cur;
    while (true) {
        auto next = eliminate_one(cur ? *cur : s, keep);
        if (!next) break;
        if (normalize(next->restrictions) == Status::contradiction)
            next->restrictions = {Restriction::equation(ParamPoly::constant(1))};
        cur = std::move(next);
    }
    return cur;
}

std::optional<Simplified> simplify_data(AlgebraicData a) {
    Simplified out;
    while (true) {
        if (normalize(a.restrictions) == Status::contradiction) return std::nullopt;
        auto nz = nonzero_params(a.restrictions);
        bool changed = false;

        for (const auto& e : a.restrictions) {
            if (e.is_nonzero()) continue;
            if (e.poly.is_constant()) continue;  // |c| >= 2: left for the counter
            if (e.poly.terms().size() != 1 || !is_pm_one(e.poly.terms()[0].c)) continue;
            std::vector<ParamId> open;
            for (auto [sym, ex] : e.poly.terms()[0].m)
                if (!contains(nz, sym)) open.push_back(sym);
            if (open.size() == 1) {
                a = set_param_zero(a, open[0]);
                changed = true;
                break;
            }
        }
        if (changed) continue;

        // x*unit + unit = 0 gives x != 0
        std::vector<ParamId> implied;
        for (std::size_t i = 0; i < a.restrictions.size(); ++i) {
            const auto& e = a.restrictions[i];
            if (e.is_nonzero()) continue;
            for (ParamId x : e.poly.symbols()) {
                if (contains(nz, x)) continue;
                auto hit = linear_in(e.poly, i, x, nz);
                if (hit && rest_is_unit(hit->rest, nz)) implied.push_back(x);
            }
        }
        if (!implied.empty()) {
            for (ParamId x : implied) a.restrictions.push_back(Restriction::nonzero(x));
            a.normalize();
            continue;
        }

        std::vector<ParamId> in_r;
        for (const auto& p : a.products) in_r.insert(in_r.end(), p.factors.begin(), p.factors.end());
        std::sort(in_r.begin(), in_r.end());
        in_r.erase(std::unique(in_r.begin(), in_r.end()), in_r.end());

        if (auto r = eliminate_one(System{a.params, a.restrictions}, in_r)) {
            for (ParamId p : a.params)
                if (std::find(r->params.begin(), r->params.end(), p) == r->params.end()) a.param_labels.erase(p);
            a.params = std::move(r->params);
            a.restrictions = std::move(r->restrictions);
            a.normalize();
            continue;
        }

        std::vector<ParamId> mentioned = in_r;
        for (const auto& e : a.restrictions)
            if (!e.is_nonzero())
                for (ParamId x : e.poly.symbols()) mentioned.push_back(x);
        std::sort(mentioned.begin(), mentioned.end());
        std::vector<ParamId> keep;
        for (ParamId p : a.params) {
            if (contains(mentioned, p)) {
                keep.push_back(p);
                continue;
            }
            if (contains(nz, p))
                ++out.k;
            else
                ++out.l;
            a.param_labels.erase(p);
            changed = true;
        }
        if (changed) {
            a.params = std::move(keep);
            std::vector<Restriction> rs;
            for (auto& e : a.restrictions)
                if (!e.is_nonzero() || contains(a.params, e.param)) rs.push_back(std::move(e));
            a.restrictions = std::move(rs);
            continue;
        }
        break;
    }
    a.normalize();
    out.data = std::move(a);
    return out;
}

}  // namespace algchar
