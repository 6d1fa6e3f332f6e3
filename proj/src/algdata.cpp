#include "algchar/algdata.hpp"

#include <algorithm>
#include <sstream>

namespace algchar {

using nlohmann::json;

bool Restriction::operator<(const Restriction& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (kind == Kind::nonzero) return param < o.param;
    return poly < o.poly;
}

std::string Restriction::to_string() const {
    if (is_nonzero()) return param_name(param) + " != 0";
    return poly.to_string() + " = 0";
}

std::string AlgebraicData::label(int i) const {
    if (i < static_cast<int>(labels.size())) return labels[i];
    return "b" + std::to_string(i);
}

std::string AlgebraicData::param_label(ParamId a) const {
    auto it = param_labels.find(a);
    return it == param_labels.end() ? param_name(a) : it->second;
}

const ParamSet* AlgebraicData::find(int x, int y, int z) const {
    auto key = std::make_tuple(x, y, z);
    auto it = std::lower_bound(products.begin(), products.end(), key, [](const Product& p, const auto& k) {
        return std::make_tuple(int(p.x), int(p.y), int(p.z)) < k;
    });
    if (it != products.end() && it->x == x && it->y == y && it->z == z) return &it->factors;
    return nullptr;
}

bool AlgebraicData::has_nonzero(ParamId a) const {
    for (const auto& r : restrictions)
        if (r.is_nonzero() && r.param == a) return true;
    return false;
}

void AlgebraicData::normalize() {
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    std::sort(products.begin(), products.end(), [](const Product& a, const Product& b) {
        return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
    });
    for (auto& r : restrictions)
        if (!r.is_nonzero()) r.poly = r.poly.negated_if_leading_negative();
    std::sort(restrictions.begin(), restrictions.end());
    restrictions.erase(std::unique(restrictions.begin(), restrictions.end()), restrictions.end());
}

void validate(const AlgebraicData& a) {
    if (a.dim < 0) throw MalformedData("negative dimension");
    if (!a.labels.empty() && static_cast<int>(a.labels.size()) != a.dim)
        throw MalformedData("label count does not match dimension");
    auto known = [&](ParamId p) { return std::binary_search(a.params.begin(), a.params.end(), p); };
    if (!std::is_sorted(a.params.begin(), a.params.end())) throw MalformedData("params not sorted");
    for (std::size_t i = 0; i < a.products.size(); ++i) {
        const auto& p = a.products[i];
        if (p.x >= a.dim || p.y >= a.dim || p.z >= a.dim) throw MalformedData("product index out of range");
        if (p.z <= p.x || p.z <= p.y)
            throw MalformedData("product " + a.label(p.x) + "*" + a.label(p.y) + " lands on " + a.label(p.z) +
                                ", which is not after both factors");
        if (i > 0) {
            const auto& q = a.products[i - 1];
            if (std::tie(q.x, q.y, q.z) >= std::tie(p.x, p.y, p.z))
                throw MalformedData("products not sorted or repeated");
        }
        for (std::size_t k = 0; k < p.factors.size(); ++k) {
            if (!known(p.factors[k])) throw MalformedData("unknown parameter " + a.param_label(p.factors[k]));
            if (k > 0 && p.factors[k - 1] >= p.factors[k]) throw MalformedData("factor set not sorted");
        }
    }
    for (const auto& r : a.restrictions) {
        if (r.is_nonzero()) {
            if (!known(r.param)) throw MalformedData("unknown parameter " + a.param_label(r.param));
        } else {
            for (ParamId s : r.poly.symbols())
                if (!known(s)) throw MalformedData("unknown parameter " + a.param_label(s));
        }
    }
}

namespace {

// a parameter in some structure constant without an inequation, if any
bool nz_witness(const AlgebraicData& a, ParamId& out) {
    std::vector<ParamId> nz;
    for (const auto& r : a.restrictions)
        if (r.is_nonzero()) nz.push_back(r.param);
    std::sort(nz.begin(), nz.end());
    bool found = false;
    for (const auto& p : a.products)
        for (ParamId s : p.factors)
            if (!std::binary_search(nz.begin(), nz.end(), s) && (!found || s < out)) {
                out = s;
                found = true;
            }
    return found;
}

void split_rec(AlgebraicData a, std::vector<AlgebraicData>& out) {
    ParamId w = 0;
    if (!nz_witness(a, w)) {
        out.push_back(std::move(a));
        return;
    }
    AlgebraicData zero = set_param_zero(a, w);
    a.restrictions.push_back(Restriction::nonzero(w));
    a.normalize();
    split_rec(std::move(a), out);
    split_rec(std::move(zero), out);
}

}  // namespace

bool satisfies_nz(const AlgebraicData& a) {
    ParamId w;
    return !nz_witness(a, w);
}

std::vector<AlgebraicData> split_into_cases(const AlgebraicData& a) {
    std::vector<AlgebraicData> out;
    split_rec(a, out);
    return out;
}

AlgebraicData remove_basis_vector(const AlgebraicData& a, int idx) {
    AlgebraicData r;
    r.params = a.params;
    r.restrictions = a.restrictions;
    r.param_labels = a.param_labels;
    r.dim = a.dim - 1;
    if (!a.labels.empty()) {
        r.labels = a.labels;
        r.labels.erase(r.labels.begin() + idx);
    }
    auto sh = [idx](int v) { return static_cast<std::uint16_t>(v > idx ? v - 1 : v); };
    r.products.reserve(a.products.size());
    for (const auto& p : a.products) {
        if (p.x == idx || p.y == idx || p.z == idx) continue;
        r.products.push_back({sh(p.x), sh(p.y), sh(p.z), p.factors});
    }
    return r;
}

AlgebraicData set_param_zero(const AlgebraicData& a, ParamId w) {
    AlgebraicData r = a;
    r.products.clear();
    for (const auto& p : a.products)
        if (std::find(p.factors.begin(), p.factors.end(), w) == p.factors.end()) r.products.push_back(p);
    r.restrictions.clear();
    for (const auto& e : a.restrictions) {
        if (e.is_nonzero()) {
            // w != 0 and w := 0 together: record the contradiction as 1 = 0
            if (e.param == w)
                r.restrictions.push_back(Restriction::equation(ParamPoly::constant(1)));
            else
                r.restrictions.push_back(e);
        } else {
            ParamPoly f = e.poly.set_zero(w);
            if (!f.is_zero()) r.restrictions.push_back(Restriction::equation(std::move(f)));
        }
    }
    r.params.erase(std::remove(r.params.begin(), r.params.end(), w), r.params.end());
    r.param_labels.erase(w);
    r.normalize();
    return r;
}

ParamId fresh_param(const AlgebraicData& a) { return a.params.empty() ? 0 : a.params.back() + 1; }

int eval_in_field(const ParamPoly& f, const FiniteField& F, const Substitution& h) {
    int s = 0;
    for (const auto& t : f.terms()) {
        int v = F.from_int(t.c);
        for (auto [sym, e] : t.m) {
            auto it = h.find(sym);
            if (it == h.end()) throw BadSubstitution("substitution misses " + param_name(sym));
            for (std::uint32_t i = 0; i < e; ++i) v = F.mul(v, it->second);
        }
        s = F.add(s, v);
    }
    return s;
}

bool satisfies(const std::vector<Restriction>& e, const FiniteField& F, const Substitution& h) {
    for (const auto& r : e) {
        if (r.is_nonzero()) {
            auto it = h.find(r.param);
            if (it == h.end()) throw BadSubstitution("substitution misses " + param_name(r.param));
            if (it->second == 0) return false;
        } else if (eval_in_field(r.poly, F, h) != 0) {
            return false;
        }
    }
    return true;
}

namespace {

// restrictions compiled against positional variables
struct CompiledSystem {
    struct Term {
        int c;
        std::vector<std::pair<int, int>> vars;
    };
    std::vector<int> nonzero;
    std::vector<std::vector<Term>> eqs;

    CompiledSystem(const std::vector<ParamId>& q, const std::vector<Restriction>& e, const FiniteField& F) {
        auto pos = [&](ParamId a) {
            auto it = std::find(q.begin(), q.end(), a);
            if (it == q.end()) throw MalformedData("restriction mentions " + param_name(a) + " outside Q");
            return static_cast<int>(it - q.begin());
        };
        for (const auto& r : e) {
            if (r.is_nonzero()) {
                nonzero.push_back(pos(r.param));
                continue;
            }
            std::vector<Term> ts;
            for (const auto& t : r.poly.terms()) {
                Term tt{F.from_int(t.c), {}};
                if (tt.c == 0) continue;
                for (auto [s, ex] : t.m) tt.vars.emplace_back(pos(s), static_cast<int>(ex));
                ts.push_back(std::move(tt));
            }
            eqs.push_back(std::move(ts));
        }
    }

    bool holds(const std::vector<int>& v, const FiniteField& F) const {
        for (int i : nonzero)
            if (v[i] == 0) return false;
        for (const auto& eq : eqs) {
            int s = 0;
            for (const auto& t : eq) {
                int x = t.c;
                for (auto [i, ex] : t.vars)
                    for (int k = 0; k < ex; ++k) x = F.mul(x, v[i]);
                s = F.add(s, x);
            }
            if (s != 0) return false;
        }
        return true;
    }
};

template <class Fn>
void for_each_solution(const std::vector<ParamId>& q, const std::vector<Restriction>& e, int field_size, int cap,
                       Fn&& fn) {
    if (static_cast<int>(q.size()) > cap)
        throw TooLarge("too many parameters to enumerate: " + std::to_string(q.size()));
    if (field_size > 5) throw TooLarge("field too large to enumerate");
    FiniteField F(field_size);
    CompiledSystem sys(q, e, F);
    std::vector<int> v(q.size(), 0);
    while (true) {
        if (sys.holds(v, F)) fn(v);
        std::size_t i = 0;
        while (i < v.size() && ++v[i] == field_size) v[i++] = 0;
        if (i == v.size()) break;
    }
}

}  // namespace

std::vector<Substitution> enumerate_substitutions(const std::vector<ParamId>& q, const std::vector<Restriction>& e,
                                                  int field_size, int cap) {
    std::vector<Substitution> out;
    for_each_solution(q, e, field_size, cap, [&](const std::vector<int>& v) {
        Substitution h;
        for (std::size_t i = 0; i < q.size(); ++i) h[q[i]] = v[i];
        out.push_back(std::move(h));
    });
    return out;
}

std::vector<Substitution> enumerate_substitutions(const AlgebraicData& a, int field_size, int cap) {
    return enumerate_substitutions(a.params, a.restrictions, field_size, cap);
}

std::uint64_t count_substitutions(const std::vector<ParamId>& q, const std::vector<Restriction>& e, int field_size,
                                  int cap) {
    std::uint64_t n = 0;
    for_each_solution(q, e, field_size, cap, [&](const std::vector<int>&) { ++n; });
    return n;
}

// ------------------------------------------------------------ ConcreteAlgebra

ConcreteAlgebra::ConcreteAlgebra(int field_size, int dim, std::vector<int> table)
    : field_(field_size), dim_(dim), table_(std::move(table)) {
    if (static_cast<int>(table_.size()) != dim * dim * dim) throw MalformedData("table size mismatch");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                if (at(i, j, k) != 0 && (k <= i || k <= j)) throw MalformedData("table is not strictly triangular");
    // (e_i e_j) e_k == e_i (e_j e_k)
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int v = 0; v < dim; ++v) {
                    int l = 0, r = 0;
                    for (int w = 0; w < dim; ++w) {
                        l = field_.add(l, field_.mul(at(i, j, w), at(w, k, v)));
                        r = field_.add(r, field_.mul(at(j, k, w), at(i, w, v)));
                    }
                    if (l != r)
                        throw NotAssociative("associativity fails on basis triple (" + std::to_string(i) + "," +
                                             std::to_string(j) + "," + std::to_string(k) + ")");
                }
}

ConcreteAlgebra ConcreteAlgebra::quotient(int z) const {
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k)
            if (at(i, z, k) != 0 || at(z, i, k) != 0) throw MalformedData("quotient vector is not annihilated");
    int d = dim_ - 1;
    std::vector<int> t(d * d * d, 0);
    auto src = [z](int v) { return v >= z ? v + 1 : v; };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) t[(i * d + j) * d + k] = at(src(i), src(j), src(k));
    return ConcreteAlgebra(q(), d, std::move(t));
}

std::vector<int> ConcreteAlgebra::multiply(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> out(dim_, 0);
    for (int i = 0; i < dim_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < dim_; ++j) {
            if (b[j] == 0) continue;
            int ab = field_.mul(a[i], b[j]);
            for (int k = 0; k < dim_; ++k)
                if (at(i, j, k)) out[k] = field_.add(out[k], field_.mul(ab, at(i, j, k)));
        }
    }
    return out;
}

ConcreteAlgebra instantiate(const AlgebraicData& a, const Substitution& h, int field_size) {
    FiniteField F(field_size);
    for (ParamId p : a.params)
        if (!h.count(p)) throw BadSubstitution("substitution misses " + a.param_label(p));
    if (!satisfies(a.restrictions, F, h)) throw BadSubstitution("substitution violates the restrictions");
    int d = a.dim;
    std::vector<int> t(d * d * d, 0);
    for (const auto& p : a.products) {
        int v = 1;
        for (ParamId s : p.factors) v = F.mul(v, h.at(s));
        t[(p.x * d + p.y) * d + p.z] = v;
    }
    return ConcreteAlgebra(field_size, d, std::move(t));
}

// ------------------------------------------------------------------- JSON

json restriction_to_json(const Restriction& r, const AlgebraicData* names) {
    auto nm = [&](ParamId a) { return names ? names->param_label(a) : param_name(a); };
    if (r.is_nonzero()) return {{"kind", "nonzero"}, {"param", nm(r.param)}};
    json terms = json::array();
    for (const auto& t : r.poly.terms()) {
        json mono = json::array();
        for (auto [s, e] : t.m) mono.push_back({nm(s), e});
        terms.push_back({{"c", t.c.str()}, {"mono", mono}});
    }
    return {{"kind", "equation"}, {"terms", terms}, {"text", r.poly.to_string() + " = 0"}};
}

json to_json(const AlgebraicData& a) {
    json j;
    j["params"] = json::array();
    for (ParamId p : a.params) j["params"].push_back(a.param_label(p));
    j["restrictions"] = json::array();
    for (const auto& r : a.restrictions) j["restrictions"].push_back(restriction_to_json(r, &a));
    j["basis"] = json::array();
    for (int i = 0; i < a.dim; ++i) j["basis"].push_back(a.label(i));
    j["products"] = json::array();
    for (const auto& p : a.products) {
        json f = json::array();
        for (ParamId s : p.factors) f.push_back(a.param_label(s));
        j["products"].push_back({{"x", a.label(p.x)}, {"y", a.label(p.y)}, {"z", a.label(p.z)}, {"factors", f}});
    }
    return j;
}

AlgebraicData data_from_json(const json& j) {
    AlgebraicData a;
    std::map<std::string, ParamId> pid;
    try {
        for (const auto& p : j.at("params")) {
            std::string s = p.get<std::string>();
            if (pid.count(s)) throw MalformedData("duplicate parameter " + s);
            ParamId id = static_cast<ParamId>(pid.size());
            pid[s] = id;
            a.params.push_back(id);
            a.param_labels[id] = s;
        }
        auto param = [&](const json& v) {
            auto it = pid.find(v.get<std::string>());
            if (it == pid.end()) throw MalformedData("unknown parameter " + v.get<std::string>());
            return it->second;
        };
        std::map<std::string, int> bid;
        for (const auto& b : j.at("basis")) {
            std::string s = b.get<std::string>();
            if (bid.count(s)) throw MalformedData("duplicate basis symbol " + s);
            bid[s] = a.dim++;
            a.labels.push_back(s);
        }
        auto basis = [&](const json& v) {
            auto it = bid.find(v.get<std::string>());
            if (it == bid.end()) throw MalformedData("unknown basis symbol " + v.get<std::string>());
            return static_cast<std::uint16_t>(it->second);
        };
        if (j.contains("restrictions"))
            for (const auto& r : j.at("restrictions")) {
                std::string kind = r.at("kind").get<std::string>();
                if (kind == "nonzero") {
                    a.restrictions.push_back(Restriction::nonzero(param(r.at("param"))));
                } else if (kind == "equation") {
                    ParamPoly f;
                    for (const auto& t : r.at("terms")) {
                        BigInt c = t.at("c").is_string() ? BigInt(t.at("c").get<std::string>())
                                                          : BigInt(t.at("c").get<long long>());
                        Monomial m;
                        for (const auto& pe : t.at("mono"))
                            m.emplace_back(param(pe.at(0)), pe.at(1).get<std::uint32_t>());
                        f = f + ParamPoly::monomial(c, ParamPoly::normalize_monomial(std::move(m)));
                    }
                    a.restrictions.push_back(Restriction::equation(std::move(f)));
                } else {
                    throw MalformedData("unknown restriction kind " + kind);
                }
            }
        for (const auto& p : j.at("products")) {
            Product pr{basis(p.at("x")), basis(p.at("y")), basis(p.at("z")), {}};
            for (const auto& f : p.at("factors")) pr.factors.push_back(param(f));
            std::sort(pr.factors.begin(), pr.factors.end());
            if (std::adjacent_find(pr.factors.begin(), pr.factors.end()) != pr.factors.end())
                throw MalformedData("repeated factor in a structure constant");
            a.products.push_back(std::move(pr));
        }
    } catch (const json::exception& e) {
        throw MalformedData(std::string("bad algebraic data JSON: ") + e.what());
    }
    a.normalize();
    validate(a);
    return a;
}

}  // namespace algchar
