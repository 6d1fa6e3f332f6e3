#include "algchar/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace algchar {

namespace {

bool term_key_less(const CountTerm& a, const CountTerm& b) {
    return a.t != b.t ? a.t < b.t : a.q < b.q;
}

BigInt ipow(const BigInt& b, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

BigInt binom(int n, int k) {
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

}  // namespace

CountPoly CountPoly::from_unsorted(std::vector<CountTerm> v) {
    std::sort(v.begin(), v.end(), term_key_less);
    CountPoly out;
    for (auto& t : v) {
        if (!out.terms_.empty() && out.terms_.back().q == t.q && out.terms_.back().t == t.t)
            out.terms_.back().c += t.c;
        else
            out.terms_.push_back(std::move(t));
        if (out.terms_.back().c == 0) out.terms_.pop_back();
    }
    return out;
}

CountPoly CountPoly::constant(const BigInt& c) { return monomial(c, 0, 0); }

CountPoly CountPoly::monomial(const BigInt& c, int q_deg, int t_deg) {
    CountPoly p;
    if (c != 0) p.terms_.push_back({q_deg, t_deg, c});
    return p;
}

CountPoly CountPoly::q_minus_one_pow(int k) {
    CountPoly p;
    for (int j = 0; j <= k; ++j) {
        BigInt c = binom(k, j);
        if ((k - j) % 2) c = -c;
        p.terms_.push_back({j, 0, c});
    }
    return p;
}

CountPoly CountPoly::operator+(const CountPoly& o) const {
    CountPoly r = *this;
    r += o;
    return r;
}

CountPoly& CountPoly::operator+=(const CountPoly& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) {
        terms_ = o.terms_;
        return *this;
    }
    std::vector<CountTerm> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() || j != o.terms_.end()) {
        if (j == o.terms_.end() || (i != terms_.end() && term_key_less(*i, *j))) {
            out.push_back(std::move(*i++));
        } else if (i == terms_.end() || term_key_less(*j, *i)) {
            out.push_back(*j++);
        } else {
            CountTerm t = std::move(*i++);
            t.c += (j++)->c;
            if (t.c != 0) out.push_back(std::move(t));
        }
    }
    terms_ = std::move(out);
    return *this;
}

CountPoly CountPoly::operator-() const {
    CountPoly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
}

CountPoly CountPoly::operator-(const CountPoly& o) const { return *this + (-o); }

CountPoly CountPoly::operator*(const CountPoly& o) const {
    std::vector<CountTerm> v;
    v.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) v.push_back({a.q + b.q, a.t + b.t, a.c * b.c});
    return from_unsorted(std::move(v));
}

CountPoly CountPoly::scaled(int k, int l, int m) const {
    if (terms_.empty()) return {};
    CountPoly r = *this;
    for (auto& t : r.terms_) {
        t.q += l;
        t.t += m;
    }
    if (k > 0) r = r * q_minus_one_pow(k);
    return r;
}

BigInt CountPoly::eval(const BigInt& q0, TMode mode, const BigInt& t0) const {
    BigInt s = 0;
    for (const auto& t : terms_) {
        BigInt v = t.c * ipow(q0, t.q);
        switch (mode) {
            case TMode::sum: break;
            case TMode::weight_q2e: v *= ipow(q0, 2 * t.t); break;
            case TMode::at_t: v *= ipow(t0, t.t); break;
        }
        s += v;
    }
    return s;
}

int CountPoly::max_t() const {
    int m = -1;
    for (const auto& t : terms_) m = std::max(m, t.t);
    return m;
}

int CountPoly::max_q() const {
    int m = -1;
    for (const auto& t : terms_) m = std::max(m, t.q);
    return m;
}

bool CountPoly::has_t() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const CountTerm& t) { return t.t != 0; });
}

CountPoly CountPoly::t_coeff(int e) const {
    CountPoly r;
    for (const auto& t : terms_)
        if (t.t == e) r.terms_.push_back({t.q, 0, t.c});
    return r;
}

CountPoly CountPoly::shift_q(int by) const {
    std::vector<CountTerm> v;
    for (const auto& t : terms_) {
        BigInt pw = 1;
        for (int j = t.q; j >= 0; --j) {
            v.push_back({j, t.t, t.c * binom(t.q, j) * pw});
            pw *= by;
        }
    }
    return from_unsorted(std::move(v));
}

std::string CountPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend();) {
        int e = it->t;
        CountPoly part;
        for (; it != terms_.rend() && it->t == e; ++it) part.terms_.push_back({it->q, 0, it->c});
        std::reverse(part.terms_.begin(), part.terms_.end());
        std::string body = q_poly_string(part);
        if (!first) os << " + ";
        first = false;
        if (e == 0)
            os << body;
        else
            os << "(" << body << ")" << (e == 1 ? std::string("t") : "t^" + std::to_string(e));
    }
    return os.str();
}

std::string q_poly_string(const CountPoly& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    const auto& ts = f.terms();
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        BigInt a = it->c < 0 ? BigInt(-it->c) : it->c;
        if (first)
            os << (it->c < 0 ? "-" : "");
        else
            os << (it->c < 0 ? " - " : " + ");
        first = false;
        if (a != 1 || it->q == 0) os << a;
        if (it->q == 1) os << "q";
        if (it->q > 1) os << "q^" << it->q;
    }
    return os.str();
}

CountPoly parse_q_poly(const std::string& s) {
    std::vector<CountTerm> v;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    auto bad = [&] { throw std::invalid_argument("cannot parse polynomial: " + s); };
    skip();
    if (i == s.size()) bad();
    bool any = false;
    while (true) {
        skip();
        if (i == s.size()) break;
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = -1;
            ++i;
            skip();
        } else if (any) {
            bad();
        }
        BigInt c = 1;
        bool have_c = false;
        std::size_t st = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > st) {
            c = BigInt(s.substr(st, i - st));
            have_c = true;
        }
        int d = 0;
        if (i < s.size() && s[i] == '*') ++i;
        if (i < s.size() && s[i] == 'q') {
            ++i;
            d = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ds = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == ds) bad();
                d = std::stoi(s.substr(ds, i - ds));
            }
        } else if (!have_c) {
            bad();
        }
        v.push_back({d, 0, sign * c});
        any = true;
    }
    CountPoly out;
    for (auto& t : v) out += CountPoly::monomial(t.c, t.q, 0);
    return out;
}

// ---------------------------------------------------------------- ParamPoly

bool monomial_less(const Monomial& a, const Monomial& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Monomial ParamPoly::normalize_monomial(Monomial m) {
    std::sort(m.begin(), m.end());
    Monomial out;
    for (auto& p : m) {
        if (!out.empty() && out.back().first == p.first)
            out.back().second += p.second;
        else
            out.push_back(p);
    }
    return out;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first))
            out.push_back(*i++);
        else if (i == a.end() || j->first < i->first)
            out.push_back(*j++);
        else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return out;
}

ParamPoly ParamPoly::from_unsorted(std::vector<ParamTerm> v) {
    std::sort(v.begin(), v.end(),
              [](const ParamTerm& a, const ParamTerm& b) { return monomial_less(a.m, b.m); });
    ParamPoly out;
    for (auto& t : v) {
        if (!out.terms_.empty() && out.terms_.back().m == t.m)
            out.terms_.back().c += t.c;
        else
            out.terms_.push_back(std::move(t));
        if (out.terms_.back().c == 0) out.terms_.pop_back();
    }
    return out;
}

ParamPoly ParamPoly::constant(const BigInt& c) { return monomial(c, {}); }
ParamPoly ParamPoly::var(ParamId a) { return monomial(1, Monomial{{a, 1u}}); }

ParamPoly ParamPoly::monomial(const BigInt& c, Monomial m) {
    ParamPoly p;
    if (c != 0) p.terms_.push_back({std::move(m), c});
    return p;
}

bool ParamPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].m.empty());
}

BigInt ParamPoly::constant_term() const {
    if (!terms_.empty() && terms_[0].m.empty()) return terms_[0].c;
    return 0;
}

bool ParamPoly::operator<(const ParamPoly& o) const {
    return std::lexicographical_compare(
        terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(),
        [](const ParamTerm& a, const ParamTerm& b) {
            if (a.m != b.m) return monomial_less(a.m, b.m);
            return a.c < b.c;
        });
}

ParamPoly ParamPoly::operator+(const ParamPoly& o) const {
    std::vector<ParamTerm> v = terms_;
    v.insert(v.end(), o.terms_.begin(), o.terms_.end());
    return from_unsorted(std::move(v));
}

ParamPoly ParamPoly::operator-() const {
    ParamPoly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
}

ParamPoly ParamPoly::operator-(const ParamPoly& o) const { return *this + (-o); }

ParamPoly ParamPoly::operator*(const ParamPoly& o) const {
    std::vector<ParamTerm> v;
    v.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) v.push_back({monomial_mul(a.m, b.m), a.c * b.c});
    return from_unsorted(std::move(v));
}

ParamPoly ParamPoly::pow(unsigned e) const {
    ParamPoly r = constant(1);
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

unsigned ParamPoly::degree_in(ParamId a) const {
    unsigned d = 0;
    for (const auto& t : terms_)
        for (auto [s, e] : t.m)
            if (s == a) d = std::max<unsigned>(d, e);
    return d;
}

bool ParamPoly::mentions(ParamId a) const {
    for (const auto& t : terms_)
        for (auto [s, e] : t.m)
            if (s == a) return true;
    return false;
}

std::vector<ParamId> ParamPoly::symbols() const {
    std::vector<ParamId> out;
    for (const auto& t : terms_)
        for (auto [s, e] : t.m) out.push_back(s);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ParamPoly> ParamPoly::coefficients_in(ParamId a) const {
    std::vector<std::vector<ParamTerm>> parts(degree_in(a) + 1);
    for (const auto& t : terms_) {
        Monomial m;
        unsigned e = 0;
        for (auto p : t.m) {
            if (p.first == a)
                e = p.second;
            else
                m.push_back(p);
        }
        parts[e].push_back({std::move(m), t.c});
    }
    std::vector<ParamPoly> out;
    for (auto& p : parts) out.push_back(from_unsorted(std::move(p)));
    return out;
}

ParamPoly ParamPoly::substitute(ParamId a, const ParamPoly& value) const {
    if (!mentions(a)) return *this;
    auto cs = coefficients_in(a);
    ParamPoly r;
    ParamPoly pw = constant(1);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (!cs[j].is_zero()) r = r + cs[j] * pw;
        if (j + 1 < cs.size()) pw = pw * value;
    }
    return r;
}

ParamPoly ParamPoly::set_zero(ParamId a) const {
    ParamPoly r;
    for (const auto& t : terms_) {
        bool hit = false;
        for (auto [s, e] : t.m) hit |= s == a;
        if (!hit) r.terms_.push_back(t);
    }
    return r;
}

ParamPoly ParamPoly::rename(const std::vector<std::pair<ParamId, ParamId>>& sorted_map) const {
    std::vector<ParamTerm> v;
    v.reserve(terms_.size());
    for (const auto& t : terms_) {
        Monomial m;
        for (auto [s, e] : t.m) {
            auto it = std::lower_bound(sorted_map.begin(), sorted_map.end(), std::make_pair(s, ParamId(0)));
            m.emplace_back(it != sorted_map.end() && it->first == s ? it->second : s, e);
        }
        v.push_back({normalize_monomial(std::move(m)), t.c});
    }
    return from_unsorted(std::move(v));
}

ParamPoly ParamPoly::negated_if_leading_negative() const {
    if (!terms_.empty() && terms_.back().c < 0) return -*this;
    return *this;
}

std::string param_name(ParamId a) { return "p" + std::to_string(a); }

std::string ParamPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        BigInt a = it->c < 0 ? BigInt(-it->c) : it->c;
        if (first)
            os << (it->c < 0 ? "-" : "");
        else
            os << (it->c < 0 ? " - " : " + ");
        first = false;
        bool need_star = false;
        if (a != 1 || it->m.empty()) {
            os << a;
            need_star = true;
        }
        for (auto [s, e] : it->m) {
            if (need_star) os << "*";
            os << param_name(s);
            if (e > 1) os << "^" << e;
            need_star = true;
        }
    }
    return os.str();
}

}  // namespace algchar
