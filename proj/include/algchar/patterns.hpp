#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "algchar/algdata.hpp"
#include "algchar/engine.hpp"

namespace algchar {

struct UnsupportedAntichain : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// subsets of a poset's ground set {0..63}
using ElemSet = std::uint64_t;

inline int popcount(ElemSet s) { return __builtin_popcountll(s); }
std::vector<int> members(ElemSet s);

// Strict partial order on {0..n-1}.
class Poset {
public:
    Poset() = default;
    // throws std::invalid_argument unless the pairs form a strict partial order
    static Poset from_pairs(int n, const std::vector<std::pair<int, int>>& rel);
    static Poset chain(int n);
    // unchecked; succ[i] is the set of elements above i
    static Poset from_masks(std::vector<ElemSet> succ);

    int size() const { return n_; }
    bool less(int i, int j) const { return (succ_[i] >> j) & 1; }
    ElemSet succ(int i) const { return succ_[i]; }
    ElemSet pred(int i) const;
    std::vector<std::pair<int, int>> relation() const;
    int relation_size() const;
    bool empty_relation() const;
    // every related pair (i,j) has i < j
    bool index_compatible() const;

    // order[new] = old
    Poset relabeled(const std::vector<int>& order) const;
    // a topological order, ties broken by index
    std::vector<int> linear_extension() const;
    std::string key() const;

    bool operator==(const Poset&) const = default;

private:
    int n_ = 0;
    std::vector<ElemSet> succ_;
};

struct TopClosure {
    ElemSet top = 0;
    ElemSet closure = 0;
};
TopClosure top_and_closure(ElemSet e, const Poset& p);

// {(k,l): k before l in `total` and P + (k,l) transitive}; total lists the ground set
Poset normal_closure(const Poset& p, const std::vector<int>& total);

// a total order maximising the normal closure of p; ties by index
std::vector<int> optimal_total_order(const Poset& p);

// all antichains of (d, rel), lexicographic by sorted member list
std::vector<ElemSet> antichains(ElemSet d, const Poset& rel);

// basis e_ij for each related pair, ordered by (-i, j); requires index_compatible()
AlgebraicData encode_pattern(const Poset& p);

// Data for the stabiliser algebra M_E, with c0 = 0 and B = 1..n-1 in index order.
// p must be index compatible.  |E| <= 2, otherwise UnsupportedAntichain.
AlgebraicData stabilizer_data(const Poset& p, ElemSet e);

// (B, P): remove element 0 and shift labels down by one
Poset without_first(const Poset& p);
// (B, S) for E = {d0}: as without_first, also dropping every pair (d, d0) with d in D
Poset drop_column(const Poset& p, int d0);

struct PatternStats {
    std::uint64_t calls = 0, memo_hits = 0, general_fallbacks = 0, pair_runs = 0;
};

class PatternEngine {
public:
    explicit PatternEngine(Engine& general) : engine_(general) {}
    Categorisation run(const Poset& p);
    const PatternStats& stats() const { return stats_; }

private:
    Categorisation rec(const Poset& p);

    Engine& engine_;
    PatternStats stats_;
    std::unordered_map<std::string, Categorisation> memo_;
};

}  // namespace algchar
