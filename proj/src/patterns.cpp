#include "algchar/patterns.hpp"

#include <algorithm>
#include <map>

namespace algchar {

std::vector<int> members(ElemSet s) {
    std::vector<int> v;
    while (s) {
        v.push_back(__builtin_ctzll(s));
        s &= s - 1;
    }
    return v;
}

namespace {
constexpr ElemSet bit(int i) { return ElemSet(1) << i; }
}  // namespace

// ------------------------------------------------------------------- Poset

Poset Poset::from_pairs(int n, const std::vector<std::pair<int, int>>& rel) {
    if (n < 0 || n > 64) throw std::invalid_argument("posets are limited to 64 elements");
    Poset p;
    p.n_ = n;
    p.succ_.assign(n, 0);
    for (auto [i, j] : rel) {
        if (i < 0 || j < 0 || i >= n || j >= n) throw std::invalid_argument("relation element out of range");
        if (i == j) throw std::invalid_argument("relation is not irreflexive");
        p.succ_[i] |= bit(j);
    }
    for (int i = 0; i < n; ++i)
        for (int j : members(p.succ_[i]))
            if ((p.succ_[j] & ~p.succ_[i]) != 0 || p.less(j, i))
                throw std::invalid_argument("relation is not a strict partial order");
    return p;
}

Poset Poset::chain(int n) {
    Poset p;
    p.n_ = n;
    p.succ_.assign(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) p.succ_[i] |= bit(j);
    return p;
}

Poset Poset::from_masks(std::vector<ElemSet> succ) {
    Poset p;
    p.n_ = static_cast<int>(succ.size());
    p.succ_ = std::move(succ);
    return p;
}

ElemSet Poset::pred(int i) const {
    ElemSet r = 0;
    for (int k = 0; k < n_; ++k)
        if (less(k, i)) r |= bit(k);
    return r;
}

std::vector<std::pair<int, int>> Poset::relation() const {
    std::vector<std::pair<int, int>> r;
    for (int i = 0; i < n_; ++i)
        for (int j : members(succ_[i])) r.emplace_back(i, j);
    return r;
}

int Poset::relation_size() const {
    int c = 0;
    for (ElemSet s : succ_) c += popcount(s);
    return c;
}

bool Poset::empty_relation() const {
    return std::all_of(succ_.begin(), succ_.end(), [](ElemSet s) { return s == 0; });
}

bool Poset::index_compatible() const {
    for (int i = 0; i < n_; ++i)
        if (succ_[i] & (bit(i + 1) - 1)) return false;
    return true;
}

Poset Poset::relabeled(const std::vector<int>& order) const {
    std::vector<int> pos(n_);
    for (int i = 0; i < n_; ++i) pos[order[i]] = i;
    Poset p;
    p.n_ = n_;
    p.succ_.assign(n_, 0);
    for (int i = 0; i < n_; ++i)
        for (int j : members(succ_[order[i]])) p.succ_[i] |= bit(pos[j]);
    return p;
}

std::vector<int> Poset::linear_extension() const {
    std::vector<int> indeg(n_, 0);
    for (int i = 0; i < n_; ++i)
        for (int j : members(succ_[i])) ++indeg[j];
    std::vector<int> out;
    std::vector<char> done(n_, 0);
    while (static_cast<int>(out.size()) < n_) {
        int i = 0;
        while (done[i] || indeg[i] != 0) ++i;
        done[i] = 1;
        out.push_back(i);
        for (int j : members(succ_[i])) --indeg[j];
    }
    return out;
}

std::string Poset::key() const {
    std::string s(1, static_cast<char>(n_));
    for (ElemSet m : succ_) s.append(reinterpret_cast<const char*>(&m), (n_ + 7) / 8);
    return s;
}

// --------------------------------------------------------------- closures

TopClosure top_and_closure(ElemSet e, const Poset& p) {
    TopClosure r;
    r.closure = e;
    for (int i = 0; i < p.size(); ++i) {
        if ((e >> i & 1) && !(p.succ(i) & e)) r.top |= bit(i);
        if (p.succ(i) & e) r.closure |= bit(i);
    }
    return r;
}

Poset normal_closure(const Poset& p, const std::vector<int>& total) {
    const int n = p.size();
    std::vector<ElemSet> pred(n);
    for (int i = 0; i < n; ++i) pred[i] = p.pred(i);
    std::vector<ElemSet> succ(n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            int k = total[a], l = total[b];
            if ((pred[k] & ~pred[l]) == 0 && (p.succ(l) & ~p.succ(k)) == 0) succ[k] |= bit(l);
        }
    return Poset::from_masks(std::move(succ));
}

std::vector<int> optimal_total_order(const Poset& p) {
    // (k,l) may join the closure iff k precedes l in the preorder
    // pred(k) <= pred(l), succ(l) <= succ(k); any linear extension of it is optimal
    const int n = p.size();
    std::vector<ElemSet> pred(n);
    for (int i = 0; i < n; ++i) pred[i] = p.pred(i);
    auto weak = [&](int k, int l) { return (pred[k] & ~pred[l]) == 0 && (p.succ(l) & ~p.succ(k)) == 0; };
    std::vector<ElemSet> strict(n, 0);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            if (k != l && weak(k, l) && !weak(l, k)) strict[k] |= bit(l);
    return Poset::from_masks(std::move(strict)).linear_extension();
}

std::vector<ElemSet> antichains(ElemSet d, const Poset& rel) {
    std::vector<ElemSet> out;
    std::vector<ElemSet> comp(rel.size(), 0);
    for (int i = 0; i < rel.size(); ++i) comp[i] = rel.succ(i) | rel.pred(i);
    auto go = [&](auto&& self, ElemSet cur, ElemSet allowed) -> void {
        out.push_back(cur);
        for (int i : members(allowed)) {
            ElemSet later = allowed & ~(bit(i + 1) - 1);
            self(self, cur | bit(i), later & ~comp[i]);
        }
    };
    go(go, 0, d);
    return out;
}

// ---------------------------------------------------------------- encodings

namespace {

std::string unit_label(int i, int j) { return "e" + std::to_string(i + 1) + "_" + std::to_string(j + 1); }

}  // namespace

AlgebraicData encode_pattern(const Poset& p) {
    if (!p.index_compatible()) throw std::invalid_argument("encode_pattern needs an index-compatible poset");
    auto rel = p.relation();
    std::sort(rel.begin(), rel.end(), [](auto a, auto b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::map<std::pair<int, int>, int> idx;
    AlgebraicData a;
    a.dim = static_cast<int>(rel.size());
    for (int i = 0; i < a.dim; ++i) {
        idx[rel[i]] = i;
        a.labels.push_back(unit_label(rel[i].first, rel[i].second));
    }
    for (auto [i, j] : rel)
        for (int k : members(p.succ(j)))
            a.products.push_back({static_cast<std::uint16_t>(idx[{i, j}]), static_cast<std::uint16_t>(idx[{j, k}]),
                                  static_cast<std::uint16_t>(idx[{i, k}]), {}});
    a.normalize();
    return a;
}

Poset without_first(const Poset& p) {
    std::vector<ElemSet> s;
    for (int i = 1; i < p.size(); ++i) s.push_back(p.succ(i) >> 1);
    return Poset::from_masks(std::move(s));
}

Poset drop_column(const Poset& p, int d0) {
    const ElemSet d = p.succ(0);
    std::vector<ElemSet> s;
    for (int i = 1; i < p.size(); ++i) {
        ElemSet m = p.succ(i);
        if (d >> i & 1) m &= ~bit(d0);
        s.push_back(m >> 1);
    }
    return Poset::from_masks(std::move(s));
}

AlgebraicData stabilizer_data(const Poset& p, ElemSet e) {
    const int sz = popcount(e);
    if (sz >= 3) throw UnsupportedAntichain("stabiliser data only covers antichains of size at most 2");
    if (sz == 0) return encode_pattern(without_first(p));
    if (sz == 1) return encode_pattern(drop_column(p, __builtin_ctzll(e)));

    const ElemSet d = p.succ(0);
    const int k = members(e)[0], l = members(e)[1];
    struct Vec {
        int ki, kj;  // ordering key (-ki, kj)
        std::vector<std::pair<int, int>> units;
        std::string label;
    };
    std::vector<Vec> basis;
    for (int i = 1; i < p.size(); ++i) {
        for (int j : members(p.succ(i)))
            if (!(d >> i & 1) || (j != k && j != l)) basis.push_back({i, j, {{i, j}}, unit_label(i, j)});
        if ((d >> i & 1) && p.less(i, k) && p.less(i, l))
            basis.push_back({i, k, {{i, k}, {i, l}}, "f" + std::to_string(i + 1)});
    }
    std::sort(basis.begin(), basis.end(), [](const Vec& a, const Vec& b) {
        if (a.ki != b.ki) return a.ki > b.ki;
        return a.kj < b.kj;
    });
    // matrix unit -> basis vector containing it
    std::map<std::pair<int, int>, int> owner;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i)
        for (auto u : basis[i].units) owner[u] = i;

    AlgebraicData a;
    a.dim = static_cast<int>(basis.size());
    for (const auto& v : basis) a.labels.push_back(v.label);
    for (int x = 0; x < a.dim; ++x)
        for (int y = 0; y < a.dim; ++y) {
            std::map<std::pair<int, int>, int> prod;
            for (auto [i, j] : basis[x].units)
                for (auto [j2, m] : basis[y].units)
                    if (j == j2) ++prod[{i, m}];
            std::map<int, int> coeff;
            for (auto [u, c] : prod) {
                auto it = owner.find(u);
                if (it == owner.end()) throw std::logic_error("stabiliser basis is not closed under products");
                int w = it->second;
                auto [cit, fresh] = coeff.emplace(w, c);
                if (!fresh && cit->second != c) throw std::logic_error("product leaves the stabiliser");
            }
            for (auto [w, c] : coeff) {
                for (auto u : basis[w].units)
                    if (!prod.count(u)) throw std::logic_error("product leaves the stabiliser");
                if (c != 1) throw std::logic_error("unexpected structure constant in stabiliser data");
                a.products.push_back(
                    {static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), static_cast<std::uint16_t>(w), {}});
            }
        }
    a.normalize();
    validate(a);
    return a;
}

// ---------------------------------------------------------- PatternAlgebra

Categorisation PatternEngine::run(const Poset& p) {
    if (p.index_compatible()) return rec(p);
    return rec(p.relabeled(p.linear_extension()));
}

Categorisation PatternEngine::rec(const Poset& in) {
    ++stats_.calls;
    if (in.empty_relation()) {
        Categorisation o;
        o.resolved = CountPoly::constant(1);
        return o;
    }
    std::string key = in.key();
    if (auto it = memo_.find(key); it != memo_.end()) {
        ++stats_.memo_hits;
        return it->second;
    }

    // c0 = 0; relabel B along a total order with the largest normal closure
    std::vector<int> full{0};
    for (int i : optimal_total_order(without_first(in))) full.push_back(i + 1);
    const Poset p = in.relabeled(full);
    const int n = p.size();
    const ElemSet d = p.succ(0);

    // P-bar restricted to D, and R' = R on D
    std::vector<ElemSet> pbar(n, 0), rprime(n, 0);
    {
        std::vector<int> idorder(n - 1);
        for (int i = 0; i < n - 1; ++i) idorder[i] = i;
        Poset b = without_first(p);
        Poset nc = normal_closure(b, idorder);
        for (int i = 1; i < n; ++i) {
            if (!(d >> i & 1)) continue;
            pbar[i] = (nc.succ(i - 1) << 1) & d;
            rprime[i] = p.succ(i) & d;
        }
    }
    const Poset pbar_d = Poset::from_masks(pbar), r_d = Poset::from_masks(rprime);

    Categorisation res;
    auto acs = antichains(d, pbar_d);
    if (std::any_of(acs.begin(), acs.end(), [](ElemSet e) { return popcount(e) >= 3; })) {
        ++stats_.general_fallbacks;
        res = engine_.general(encode_pattern(p));
    } else {
        for (ElemSet e : acs) {
            Categorisation o;
            switch (popcount(e)) {
                case 0: o = rec(without_first(p)); break;
                case 1: o = rec(drop_column(p, __builtin_ctzll(e))); break;
                default:
                    ++stats_.pair_runs;
                    o = engine_.general(stabilizer_data(p, e));
            }
            ElemSet cp = top_and_closure(e, pbar_d).closure;
            ElemSet cr = top_and_closure(e, r_d).closure;
            res += scale_categorisation(o, popcount(e), popcount(cp & ~cr), popcount(cr & ~e));
        }
    }
    memo_.emplace(std::move(key), res);
    return res;
}

}  // namespace algchar
