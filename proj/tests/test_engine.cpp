#include <random>

#include "algchar/engine.hpp"
#include "algchar/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace algchar;
using algchar::testing::q_pow;
using algchar::testing::qt;
using algchar::testing::t_n;

namespace {

Product prod(int x, int y, int z, ParamSet f = {}) {
    return {static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), static_cast<std::uint16_t>(z), f};
}

AlgebraicData core() {
    AlgebraicData a;
    a.dim = 2;
    a.params = {0};
    a.restrictions = {Restriction::nonzero(0)};
    a.products = {prod(0, 0, 1, {0})};
    return a;
}

int index_of(const AlgebraicData& a, const std::string& label) {
    for (int i = 0; i < a.dim; ++i)
        if (a.label(i) == label) return i;
    FAIL("no basis vector " << label);
    return -1;
}

const CountPoly kT3 = q_pow(2) + CountPoly::q_minus_one_pow(1) * qt(1, 0, 1);

}  // namespace

TEST_CASE("scale_categorisation") {
    Categorisation o;
    o.resolved = CountPoly::constant(1) + qt(1, 1, 2);
    o.unresolved_counts.push_back({{0}, {Restriction::nonzero(0)}, 1, 2, 3});
    o.families.push_back({{FamilyRef::Kind::irr_at_z, core(), 1}, 0, 0, 0});

    auto s = scale_categorisation(o, 0, 0, 1);
    CHECK(s.resolved == qt(1, 0, 1) + qt(1, 1, 3));
    CHECK(s.unresolved_counts[0].e == 4);
    CHECK(s.families[0].m == 1);

    Categorisation one;
    one.resolved = CountPoly::constant(1);
    CHECK(scale_categorisation(one, 1, 0, 0).resolved == CountPoly::q_minus_one_pow(1));

    auto id = scale_categorisation(o, 0, 0, 0);
    CHECK(id.resolved == o.resolved);
    CHECK(id.unresolved_counts[0].u == 1);
}

TEST_CASE("aggregate") {
    Categorisation a, b;
    a.resolved = q_pow(1);
    b.resolved = qt(1, 0, 1);
    CHECK(aggregate({a}).resolved == a.resolved);
    auto s = aggregate({a, b});
    CHECK(s.resolved == q_pow(1) + qt(1, 0, 1));
    CHECK(s.fully_resolved());
}

TEST_CASE("General on small unitriangular algebras") {
    Engine e;
    CHECK(e.general(t_n(2)).resolved == q_pow(1));
    auto o3 = e.general(t_n(3));
    CHECK(o3.fully_resolved());
    CHECK(o3.resolved == kT3);

    auto o4 = e.general(t_n(4));
    CHECK(o4.resolved.t_coeff(0) == q_pow(3));
    CHECK(o4.resolved.t_coeff(1) == q_pow(3) - q_pow(1));
    CHECK(o4.resolved.t_coeff(2) == q_pow(2) - q_pow(1));
}

TEST_CASE("General leaf counts q^|B| characters per algebra") {
    AlgebraicData a;
    a.dim = 3;
    a.params = {0};
    a.restrictions = {Restriction::nonzero(0)};
    Engine e;
    CHECK(e.general(a).resolved == CountPoly::q_minus_one_pow(1) * q_pow(3));
}

TEST_CASE("TypeB") {
    Engine e;
    AlgebraicData t3 = t_n(3);
    int z = index_of(t3, "e1_3");
    CHECK(e.type_b(t3, z).resolved == CountPoly::q_minus_one_pow(1) * qt(1, 0, 1));

    // z is a direct summand: Step 1
    AlgebraicData d;
    d.dim = 4;
    d.products = {prod(0, 1, 2)};
    Engine e1;
    auto o = e1.type_b(d, 3);
    CHECK(e1.stats().step1 >= 1);
    Engine e2;
    CHECK(o.resolved == scale_categorisation(e2.general(remove_basis_vector(d, 3)), 1, 0, 0).resolved);

    // the cyclic core gives up
    Engine e3;
    auto c = e3.type_b(core(), 1);
    REQUIRE(c.families.size() == 1);
    CHECK(c.families[0].family.kind == FamilyRef::Kind::irr_at_z);
    CHECK(c.families[0].k + c.families[0].l + c.families[0].m == 0);
    CHECK(is_cyclic_core(c.families[0].family));
    CHECK(e3.stats().step4 == 1);

    CHECK_THROWS(e.type_b(t3, index_of(t3, "e1_2")));
}

TEST_CASE("Step 2 contraction") {
    AlgebraicData t3 = t_n(3);
    int z = index_of(t3, "e1_3"), y = index_of(t3, "e1_2");
    auto w = find_step2_witness(t3, z);
    REQUIRE(w);
    CHECK(*w == y);
    AlgebraicData c = typeb_step2_contract(t3, z, y);
    CHECK(c.dim == 1);
    CHECK(c.products.empty());
    CHECK(c.label(0) == "e1_3");
    CHECK(step2_image_of_z(t3, z, y) == 0);
    CHECK_THROWS_AS(typeb_step2_contract(t3, z, index_of(t3, "e2_3")), BadWitness);
}

TEST_CASE("Step 2 division equations") {
    // y x1 = a z, y x2 = b z: x2 is replaced by b x1 - a x2
    AlgebraicData d;
    d.dim = 4;
    d.labels = {"y", "x2", "x1", "z"};
    d.params = {0, 1};
    d.restrictions = {Restriction::nonzero(0), Restriction::nonzero(1)};
    d.products = {prod(0, 2, 3, {0}), prod(0, 1, 3, {1})};
    d.normalize();
    REQUIRE(algchar::testing::symbolically_associative(d));
    auto w = find_step2_witness(d, 3);
    REQUIRE(w);
    AlgebraicData c = typeb_step2_contract(d, 3, *w);
    CHECK_NOTHROW(validate(c));
    CHECK(c.dim == 2);

    // correctness of the contraction by the oracle, per substitution
    Engine e;
    for (int q : {2, 3}) {
        auto r = verify_substitutions(d, q, 3, e, "division");
        CHECK(r.pass);
    }
}

TEST_CASE("Step 3 contraction") {
    // L = {z}: y*x = z with nothing else; relabelling only
    AlgebraicData d;
    d.dim = 3;
    d.products = {prod(0, 1, 2)};
    auto none = find_step3_witness(d, 2);
    CHECK_FALSE(none);  // L \ {z} would be empty

    // y*x = w, u*v = z + w
    AlgebraicData a;
    a.dim = 6;
    a.labels = {"u", "v", "y", "x", "w", "z"};
    a.products = {prod(0, 1, 5), prod(2, 3, 4), prod(0, 1, 4)};
    a.normalize();
    REQUIRE(algchar::testing::symbolically_associative(a));
    auto y = find_step3_witness(a, 5);
    REQUIRE(y);
    AlgebraicData c = typeb_step3_contract(a, 5, *y);
    CHECK_NOTHROW(validate(c));
    CHECK(c.dim == 5);
    CHECK(c.label(c.dim - 1) == "z'");

    Engine e;
    for (int q : {2, 3}) {
        auto o = e.type_b(a, 5);
        auto r = verify_categorisation(a, o, q, 5, "step3");
        CHECK(r.pass);
    }
}

TEST_CASE("choose_z picks an annihilating vector") {
    AlgebraicData t5 = t_n(5);
    int z = choose_z(t5);
    for (const auto& p : t5.products) {
        CHECK(p.x != z);
        CHECK(p.y != z);
    }
}

TEST_CASE("data_key ignores parameter names") {
    AlgebraicData a = core();
    AlgebraicData b = a;
    b.params = {9};
    b.restrictions = {Restriction::nonzero(9)};
    b.products[0].factors = {9};
    CHECK(data_key(a) == data_key(b));
    CHECK(data_key(a, 1) != data_key(a));
    CHECK(data_key(a) != data_key(t_n(3)));
}

TEST_CASE("resolve") {
    Engine e;
    auto t = resolve(e.general(t_n(4)), 4);
    CHECK(t.exceptional.empty());
    CHECK(t.entries.size() == 3);

    Categorisation o;
    // the core's own parameter contributes one factor q-1
    o.families.push_back({{FamilyRef::Kind::irr_at_z, core(), 1}, 11, 0, 16});
    auto r = resolve(o, 13);
    REQUIRE(r.exceptional.size() == 1);
    CountPoly want = CountPoly::constant(1).scaled(13, 1, 0);
    CHECK(r.exceptional[0].total_count == want);
    CHECK(r.entries.at(16) == want);

    // contradictory restrictions: dropped
    Categorisation dead;
    AlgebraicData c = core();
    c.restrictions.push_back(Restriction::equation(ParamPoly::var(0)));
    dead.families.push_back({{FamilyRef::Kind::irr_at_z, c, 1}, 0, 0, 0});
    auto rd = resolve(dead, 2);
    CHECK(rd.dropped_families == 1);
    CHECK(rd.exceptional.empty());

    Categorisation odd;
    odd.families.push_back({{FamilyRef::Kind::all_irr, t_n(3), -1}, 0, 0, 0});
    CHECK_THROWS_AS(resolve(odd, 3), UnknownCore);
}

TEST_CASE("budget exhaustion emits families") {
    EngineConfig cfg;
    cfg.max_depth = 1;
    Engine e(cfg);
    auto o = e.general(t_n(5));
    CHECK_FALSE(o.families.empty());
    CHECK(e.stats().budget_stops > 0);
}

TEST_CASE("partition identity against the oracle on random data") {
    std::mt19937_64 rng(2024);
    for (int it = 0; it < 25; ++it) {
        AlgebraicData a = algchar::testing::random_data(rng, 4, 2);
        Engine e;
        auto o = e.general(a);
        for (int q : {2, 3}) {
            auto r = verify_categorisation(a, o, q);
            CHECK_MESSAGE(r.pass, to_json(a).dump() << " q=" << q << " " << r.note);
        }
    }
}
