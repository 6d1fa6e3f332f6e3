#include <random>

#include "algchar/polyring.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace algchar;
using algchar::testing::q_pow;
using algchar::testing::qt;

TEST_CASE("count polynomial addition") {
    CountPoly f = qt(7, 9, 1) - qt(6, 8, 1) - qt(1, 7, 1);
    CountPoly s = q_pow(9) + f;
    CHECK(s.terms().size() == 4);
    CHECK(s.t_coeff(0) == q_pow(9));
    CHECK(s.t_coeff(1) == parse_q_poly("7q^9 - 6q^8 - q^7"));
    CHECK(f + CountPoly() == f);
    CHECK(CountPoly::q_minus_one_pow(1) + CountPoly::constant(1) == q_pow(1));
    CHECK((f - f).is_zero());
}

TEST_CASE("scaling by (q-1)^k q^l t^m") {
    CountPoly s = CountPoly::constant(1).scaled(13, 1, 16);
    CHECK(s == CountPoly::q_minus_one_pow(13) * qt(1, 1, 16));
    CHECK(s.max_t() == 16);
    CHECK(s.t_coeff(16).eval(2, TMode::sum) == 2);
    CHECK(s.t_coeff(16).eval(3, TMode::sum) == 3 * (BigInt(1) << 13));

    CountPoly f = q_pow(1) + qt(1, 0, 1);
    CHECK(f.scaled(0, 0, 0) == f);
    CountPoly want = (q_pow(2) - q_pow(1)) * qt(1, 0, 1) + CountPoly::q_minus_one_pow(1) * qt(1, 0, 2);
    CHECK(f.scaled(1, 0, 1) == want);
}

TEST_CASE("evaluation modes") {
    CountPoly t3 = q_pow(2) + CountPoly::q_minus_one_pow(1) * qt(1, 0, 1);
    CHECK(t3.eval(2, TMode::sum) == 5);
    CHECK(t3.eval(2, TMode::weight_q2e) == 8);
    CHECK(t3.eval(3, TMode::sum) == 11);
    CHECK(t3.eval(3, TMode::weight_q2e) == 27);
    CHECK(t3.eval(2, TMode::at_t, 0) == 4);
    CHECK(CountPoly().eval(7, TMode::sum) == 0);
}

TEST_CASE("q-polynomial text round trip") {
    for (std::string s : {"7q^9 - 6q^8 - q^7", "q^6 - 6q^5 + 15q^4 - 20q^3 + 15q^2 - 6q + 1", "-q", "3", "q"}) {
        CHECK(q_poly_string(parse_q_poly(s)) == s);
    }
    CHECK(parse_q_poly("0").is_zero());
    CHECK_THROWS_AS(parse_q_poly("7x^2"), std::invalid_argument);
    CHECK(q_poly_string(q_pow(2).shift_q(1)) == "q^2 + 2q + 1");
}

TEST_CASE("big coefficients do not overflow") {
    CountPoly f = CountPoly::q_minus_one_pow(80);
    BigInt v = f.eval(3, TMode::sum);
    CHECK(v == boost::multiprecision::pow(BigInt(2), 80));
}

namespace {

CountPoly random_count(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg(0, 4), coef(-5, 5), len(0, 5);
    CountPoly f;
    for (int i = 0, n = len(rng); i < n; ++i) f += qt(coef(rng), deg(rng), deg(rng));
    return f;
}

ParamPoly random_param(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> sym(0, 3), ex(1, 2), coef(-3, 3), len(0, 4), msz(0, 2);
    ParamPoly f;
    for (int i = 0, n = len(rng); i < n; ++i) {
        Monomial m;
        for (int j = 0, k = msz(rng); j < k; ++j) m.emplace_back(sym(rng), ex(rng));
        f = f + ParamPoly::monomial(coef(rng), ParamPoly::normalize_monomial(std::move(m)));
    }
    return f;
}

}  // namespace

TEST_CASE("ring axioms on random count polynomials") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 300; ++it) {
        CountPoly a = random_count(rng), b = random_count(rng), c = random_count(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK(((a - b) == CountPoly()) == (a == b));
        for (TMode m : {TMode::sum, TMode::weight_q2e}) CHECK((a + b).eval(3, m) == a.eval(3, m) + b.eval(3, m));
        CHECK((a * b).eval(2, TMode::sum) == a.eval(2, TMode::sum) * b.eval(2, TMode::sum));
    }
}

TEST_CASE("ring axioms on random parameter polynomials") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 300; ++it) {
        ParamPoly a = random_param(rng), b = random_param(rng), c = random_param(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        auto val = [](ParamId s) { return BigInt(static_cast<int>(s) + 2); };
        CHECK((a * b).eval_with(val) == a.eval_with(val) * b.eval_with(val));
    }
}

TEST_CASE("parameter polynomial substitution and coefficients") {
    ParamPoly a = ParamPoly::var(0), b = ParamPoly::var(1), c = ParamPoly::var(2);
    ParamPoly f = a * b - c;
    CHECK(f.degree_in(0) == 1);
    CHECK(f.substitute(2, a * b).is_zero());
    auto co = f.coefficients_in(2);
    REQUIRE(co.size() == 2);
    CHECK(co[0] == a * b);
    CHECK(co[1] == ParamPoly::constant(-1));
    CHECK(f.set_zero(0) == -c);
    CHECK((a.pow(3) - a * a * a).is_zero());
    CHECK(f.symbols() == std::vector<ParamId>{0, 1, 2});
    CHECK(f.rename({{0, 5}, {1, 6}, {2, 7}}).symbols() == std::vector<ParamId>{5, 6, 7});
}
