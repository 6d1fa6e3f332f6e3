#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace algchar {

using BigInt = boost::multiprecision::cpp_int;
using ParamId = std::uint32_t;

// Z[q,t].  Terms are kept sorted by (t, q) with no zero coefficients.
struct CountTerm {
    int q = 0;
    int t = 0;
    BigInt c;
    bool operator==(const CountTerm&) const = default;
};

enum class TMode { sum, weight_q2e, at_t };

class CountPoly {
public:
    CountPoly() = default;
    static CountPoly constant(const BigInt& c);
    static CountPoly monomial(const BigInt& c, int q_deg, int t_deg);
    static CountPoly q_minus_one_pow(int k);

    const std::vector<CountTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool operator==(const CountPoly&) const = default;

    CountPoly operator+(const CountPoly& o) const;
    CountPoly operator-(const CountPoly& o) const;
    CountPoly operator*(const CountPoly& o) const;
    CountPoly operator-() const;
    CountPoly& operator+=(const CountPoly& o);

    // (q-1)^k q^l t^m * f
    CountPoly scaled(int k, int l, int m) const;

    BigInt eval(const BigInt& q0, TMode mode, const BigInt& t0 = 0) const;
    int max_t() const;
    int max_q() const;
    // coefficient of t^e, as a polynomial in q only
    CountPoly t_coeff(int e) const;
    // f(q) -> f(q+1); only meaningful for t-free polynomials but applied termwise
    CountPoly shift_q(int by) const;
    bool has_t() const;

    std::string to_string() const;

private:
    static CountPoly from_unsorted(std::vector<CountTerm> v);
    std::vector<CountTerm> terms_;
};

// One-variable rendering of a t-free CountPoly, e.g. "7q^9 - 6q^8 - q^7".
std::string q_poly_string(const CountPoly& f);
// Inverse of q_poly_string; throws std::invalid_argument on junk.
CountPoly parse_q_poly(const std::string& s);

// Monomials over parameter symbols: sorted (symbol, exponent) pairs.
using Monomial = boost::container::small_vector<std::pair<ParamId, std::uint32_t>, 3>;

struct ParamTerm {
    Monomial m;
    BigInt c;
    bool operator==(const ParamTerm&) const = default;
};

class ParamPoly {
public:
    ParamPoly() = default;
    static ParamPoly constant(const BigInt& c);
    static ParamPoly var(ParamId a);
    static ParamPoly monomial(const BigInt& c, Monomial m);
    // product of distinct symbols, coefficient 1
    template <class Range>
    static ParamPoly product_of(const Range& syms) {
        Monomial m;
        for (ParamId a : syms) m.emplace_back(a, 1u);
        return monomial(1, normalize_monomial(std::move(m)));
    }

    const std::vector<ParamTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    BigInt constant_term() const;
    bool operator==(const ParamPoly&) const = default;
    bool operator<(const ParamPoly& o) const;

    ParamPoly operator+(const ParamPoly& o) const;
    ParamPoly operator-(const ParamPoly& o) const;
    ParamPoly operator*(const ParamPoly& o) const;
    ParamPoly operator-() const;
    ParamPoly pow(unsigned e) const;

    unsigned degree_in(ParamId a) const;
    bool mentions(ParamId a) const;
    std::vector<ParamId> symbols() const;
    // coefficient list by power of a: result[j] is the coefficient of a^j
    std::vector<ParamPoly> coefficients_in(ParamId a) const;
    ParamPoly substitute(ParamId a, const ParamPoly& value) const;
    // drop every monomial containing a (i.e. a := 0)
    ParamPoly set_zero(ParamId a) const;
    ParamPoly rename(const std::vector<std::pair<ParamId, ParamId>>& sorted_map) const;
    ParamPoly negated_if_leading_negative() const;

    // value at a point with integer arguments; callers reduce as needed
    template <class F>
    BigInt eval_with(F&& value_of) const {
        BigInt s = 0;
        for (const auto& t : terms_) {
            BigInt p = t.c;
            for (auto [a, e] : t.m)
                for (std::uint32_t i = 0; i < e; ++i) p *= value_of(a);
            s += p;
        }
        return s;
    }

    std::string to_string() const;

    static Monomial normalize_monomial(Monomial m);

private:
    static ParamPoly from_unsorted(std::vector<ParamTerm> v);
    std::vector<ParamTerm> terms_;
};

Monomial monomial_mul(const Monomial& a, const Monomial& b);
bool monomial_less(const Monomial& a, const Monomial& b);
std::string param_name(ParamId a);

}  // namespace algchar
