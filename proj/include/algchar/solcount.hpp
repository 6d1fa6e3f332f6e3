#pragma once

#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "algchar/algdata.hpp"
#include "algchar/polyring.hpp"

namespace algchar {

// (q-1)^u q^v |V(Q,E,q)| characters of degree t^e
struct UnresolvedCount {
    std::vector<ParamId> params;
    std::vector<Restriction> restrictions;
    int u = 0, v = 0, e = 0;
};

struct CountResult {
    bool counted = false;
    CountPoly poly;  // when counted; t-free
    UnresolvedCount record;

    static CountResult make_counted(CountPoly f) { return {true, std::move(f), {}}; }
    static CountResult make_unresolved(UnresolvedCount u) { return {false, {}, std::move(u)}; }
};

struct System {
    std::vector<ParamId> params;
    std::vector<Restriction> restrictions;
};

// Collects distinct counted systems so they can be re-checked by enumeration.
class CountAudit {
public:
    struct Entry {
        System system;
        CountPoly poly;
    };
    explicit CountAudit(std::size_t max_params = 8) : max_params_(max_params) {}
    void record(const System& s, const CountPoly& f);
    std::vector<Entry> entries() const;
    std::size_t size() const;

private:
    std::size_t max_params_;
    mutable std::mutex mu_;
    std::set<std::string> seen_;
    std::vector<Entry> entries_;
};

CountResult count_solutions(const std::vector<ParamId>& q, const std::vector<Restriction>& e,
                            CountAudit* audit = nullptr);

// Substitute out variables that occur linearly with a unit coefficient.  Variables in
// `keep` are never eliminated.  Returns nullopt when nothing was eliminated.
std::optional<System> eliminate_linear(const System& s, const std::vector<ParamId>& keep = {});

// Engine-side normalisation of (Q,E) for algebraic data: contradictions, forced zeros,
// implied inequations, elimination of parameters outside R, and removal of parameters
// that occur in no equation (the latter contribute the factor (q-1)^k q^l).
struct Simplified {
    AlgebraicData data;
    int k = 0;
    int l = 0;
};
std::optional<Simplified> simplify_data(AlgebraicData a);

std::string system_key(const System& s);

}  // namespace algchar
