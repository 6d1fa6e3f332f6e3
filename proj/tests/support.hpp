#pragma once

// Shared helpers for the unit and acceptance tests.

#include <random>
#include <vector>

#include "algchar/algdata.hpp"
#include "algchar/engine.hpp"
#include "algchar/patterns.hpp"

namespace algchar::testing {

inline AlgebraicData t_n(int n) { return encode_pattern(Poset::chain(n)); }

inline CountPoly q_pow(int e) { return CountPoly::monomial(1, e, 0); }
inline CountPoly qt(const BigInt& c, int qd, int td) { return CountPoly::monomial(c, qd, td); }

// (e_i e_j) e_k == e_i (e_j e_k) as polynomials in the parameters
inline bool symbolically_associative(const AlgebraicData& a) {
    const int d = a.dim;
    std::vector<ParamPoly> c(static_cast<std::size_t>(d) * d * d);
    auto at = [&](int i, int j, int k) -> ParamPoly& { return c[(static_cast<std::size_t>(i) * d + j) * d + k]; };
    for (const auto& p : a.products) at(p.x, p.y, p.z) = ParamPoly::product_of(p.factors);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int v = 0; v < d; ++v) {
                    ParamPoly l, r;
                    for (int w = 0; w < d; ++w) {
                        l = l + at(i, j, w) * at(w, k, v);
                        r = r + at(i, w, v) * at(j, k, w);
                    }
                    if (!(l == r)) return false;
                }
    return true;
}

// vectors that take no part as a factor in any product
inline std::vector<int> annihilating(const AlgebraicData& a) {
    std::vector<char> f(a.dim, 0);
    for (const auto& p : a.products) f[p.x] = f[p.y] = 1;
    std::vector<int> out;
    for (int i = 0; i < a.dim; ++i)
        if (!f[i]) out.push_back(i);
    return out;
}

// Random associative data: dim in [2, max_dim], up to max_params parameters, each
// with an inequation.  Rejection sampled.
inline AlgebraicData random_data(std::mt19937_64& rng, int max_dim = 5, int max_params = 2, double density = 0.35) {
    std::uniform_int_distribution<int> dim_d(2, max_dim), par_d(0, max_params);
    std::uniform_real_distribution<double> u(0, 1);
    while (true) {
        AlgebraicData a;
        a.dim = dim_d(rng);
        int m = par_d(rng);
        for (int i = 0; i < m; ++i) {
            a.params.push_back(static_cast<ParamId>(i));
            a.restrictions.push_back(Restriction::nonzero(static_cast<ParamId>(i)));
        }
        for (int z = 0; z < a.dim; ++z)
            for (int x = 0; x < z; ++x)
                for (int y = 0; y < z; ++y) {
                    if (u(rng) >= density) continue;
                    Product p{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                              static_cast<std::uint16_t>(z), {}};
                    for (int s = 0; s < m; ++s)
                        if (u(rng) < 0.5) p.factors.push_back(static_cast<ParamId>(s));
                    a.products.push_back(std::move(p));
                }
        if (a.products.empty()) continue;
        a.normalize();
        if (symbolically_associative(a)) return a;
    }
}

}  // namespace algchar::testing
