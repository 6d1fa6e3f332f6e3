#include <random>

#include "algchar/oracle.hpp"
#include "algchar/patterns.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace algchar;
using algchar::testing::t_n;

namespace {

ElemSet set_of(std::initializer_list<int> xs) {
    ElemSet s = 0;
    for (int x : xs) s |= ElemSet(1) << x;
    return s;
}

// random index-compatible poset on n elements, transitively closed
Poset random_poset(std::mt19937_64& rng, int n, double density) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<ElemSet> succ(n, 0);
    for (int i = n - 1; i >= 0; --i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < density) succ[i] |= (ElemSet(1) << j) | succ[j];
    return Poset::from_masks(succ);
}

}  // namespace

TEST_CASE("posets") {
    Poset c = Poset::chain(4);
    CHECK(c.relation_size() == 6);
    CHECK(c.index_compatible());
    CHECK(c.pred(3) == set_of({0, 1, 2}));
    CHECK_THROWS_AS(Poset::from_pairs(3, {{0, 1}, {1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Poset::from_pairs(2, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_NOTHROW(Poset::from_pairs(3, {{0, 1}, {1, 2}, {0, 2}}));

    Poset v = Poset::from_pairs(3, {{2, 0}, {2, 1}});
    CHECK_FALSE(v.index_compatible());
    auto ext = v.linear_extension();
    CHECK(ext.front() == 2);
    CHECK(v.relabeled(ext).index_compatible());
}

TEST_CASE("top and closure") {
    Poset c = Poset::chain(4);
    auto tc = top_and_closure(set_of({1, 2}), c);
    CHECK(tc.top == set_of({2}));
    CHECK(tc.closure == set_of({0, 1, 2}));

    Poset v = Poset::from_pairs(4, {{0, 2}, {1, 2}, {0, 3}});
    auto tv = top_and_closure(set_of({2}), v);
    CHECK(tv.top == set_of({2}));
    CHECK(tv.closure == set_of({0, 1, 2}));
    CHECK(top_and_closure(0, v).closure == 0);
}

TEST_CASE("normal closure") {
    Poset anti = Poset::from_pairs(2, {});
    CHECK(normal_closure(anti, {0, 1}) == Poset::chain(2));
    CHECK(normal_closure(anti, {1, 0}).less(1, 0));

    Poset v = Poset::from_pairs(3, {{0, 1}, {0, 2}});
    Poset nv = normal_closure(v, {0, 1, 2});
    CHECK(nv.less(1, 2));
    CHECK(nv.relation_size() == 3);

    // the closure always contains the poset itself
    std::mt19937_64 rng(3);
    for (int it = 0; it < 100; ++it) {
        Poset p = random_poset(rng, 6, 0.3);
        Poset nc = normal_closure(p, p.linear_extension());
        for (auto [i, j] : p.relation()) CHECK(nc.less(i, j));
        auto best = optimal_total_order(p);
        CHECK(normal_closure(p, best).relation_size() >= nc.relation_size());
    }
}

TEST_CASE("antichains") {
    for (int n = 1; n <= 6; ++n) {
        Poset c = Poset::chain(n);
        CHECK(antichains((ElemSet(1) << n) - 1, c).size() == static_cast<std::size_t>(n + 1));
        Poset a = Poset::from_pairs(n, {});
        CHECK(antichains((ElemSet(1) << n) - 1, a).size() == (std::size_t(1) << n));
    }
    Poset v = Poset::from_pairs(3, {{0, 1}, {0, 2}});
    auto acs = antichains(set_of({0, 1, 2}), v);
    // {}, {0}, {1}, {1,2}, {2}
    CHECK(acs == std::vector<ElemSet>{0, set_of({0}), set_of({1}), set_of({1, 2}), set_of({2})});
    CHECK(antichains(set_of({1, 2}), v).size() == 4);
}

TEST_CASE("encode_pattern") {
    AlgebraicData t4 = t_n(4);
    CHECK(t4.dim == 6);
    CHECK(t4.products.size() == 4);
    CHECK_NOTHROW(validate(t4));
    CHECK(algchar::testing::symbolically_associative(t4));

    Poset v = Poset::from_pairs(4, {{0, 2}, {1, 2}, {0, 3}, {2, 3}, {1, 3}});
    AlgebraicData a = encode_pattern(v);
    CHECK(a.dim == 5);
    CHECK(algchar::testing::symbolically_associative(a));
    CHECK_THROWS(encode_pattern(Poset::from_pairs(2, {{1, 0}})));
}

TEST_CASE("stabiliser data") {
    Poset c = Poset::chain(4);
    // E = {} and {d0}: reductions to smaller patterns
    CHECK(stabilizer_data(c, 0).dim == 3);
    CHECK(stabilizer_data(c, set_of({1})).dim == 3);

    // 1 lies under both members of E = {2, 3}, so e_12 and e_13 merge into f2
    Poset p = Poset::from_pairs(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
    AlgebraicData m = stabilizer_data(p, set_of({2, 3}));
    CHECK_NOTHROW(validate(m));
    CHECK(algchar::testing::symbolically_associative(m));
    int merged = 0;
    for (int i = 0; i < m.dim; ++i) merged += m.label(i).rfind("f", 0) == 0;
    CHECK(merged == 1);

    Poset wide = Poset::from_pairs(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK_THROWS_AS(stabilizer_data(wide, set_of({1, 2, 3})), UnsupportedAntichain);

    std::mt19937_64 rng(11);
    for (int it = 0; it < 60; ++it) {
        Poset r = random_poset(rng, 6, 0.45);
        for (ElemSet e : antichains(r.succ(0), r)) {
            if (popcount(e) > 2) continue;
            AlgebraicData s = stabilizer_data(r, e);
            CHECK_NOTHROW(validate(s));
            CHECK(algchar::testing::symbolically_associative(s));
        }
    }
}

TEST_CASE("reductions of the ground set") {
    Poset c = Poset::chain(4);
    CHECK(without_first(c) == Poset::chain(3));
    Poset d = drop_column(c, 2);
    CHECK(d.size() == 3);
    CHECK_FALSE(d.less(0, 1));
    CHECK(d.less(0, 2));
    CHECK(d.less(1, 2));
}

TEST_CASE("pattern recursion") {
    Engine e;
    PatternEngine pe(e);
    CHECK(pe.run(Poset::from_pairs(3, {})).resolved == CountPoly::constant(1));
    CountPoly t3 = algchar::testing::q_pow(2) + CountPoly::q_minus_one_pow(1) * algchar::testing::qt(1, 0, 1);
    CHECK(pe.run(Poset::chain(3)).resolved == t3);
}

TEST_CASE("pattern and General paths agree") {
    for (int n = 2; n <= 7; ++n) {
        Engine e1, e2;
        PatternEngine pe(e2);
        auto g = e1.general(t_n(n));
        auto p = pe.run(Poset::chain(n));
        CHECK_MESSAGE(g.resolved == p.resolved, "n=" << n);
        CHECK(p.fully_resolved());
    }
    std::mt19937_64 rng(41);
    for (int it = 0; it < 30; ++it) {
        Poset r = random_poset(rng, 6, 0.4);
        Engine e1, e2;
        PatternEngine pe(e2);
        auto g = e1.general(encode_pattern(r));
        auto p = pe.run(r);
        CHECK_MESSAGE(g.resolved == p.resolved, r.key());
    }
}

TEST_CASE("orbit sizes") {
    // orbit of u is q^|cl(top) \ top| where top is the set of maximal support elements
    std::mt19937_64 rng(8);
    for (int it = 0; it < 60; ++it) {
        Poset r = random_poset(rng, 5, 0.4);
        for (int q : {2, 3}) {
            std::uniform_int_distribution<int> val(0, q - 1);
            std::vector<int> u(5);
            ElemSet supp = 0;
            for (int i = 0; i < 5; ++i) {
                u[i] = val(rng);
                if (u[i]) supp |= ElemSet(1) << i;
            }
            auto tc = top_and_closure(supp, r);
            std::uint64_t want = 1;
            for (int i = 0; i < popcount(tc.closure & ~tc.top); ++i) want *= q;
            CHECK(orbit_size(r, u, q) == want);
        }
    }
}
