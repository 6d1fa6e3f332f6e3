#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "algchar/algdata.hpp"
#include "algchar/polyring.hpp"
#include "algchar/solcount.hpp"

namespace algchar {

struct BadWitness : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownCore : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FamilyRef {
    enum class Kind { all_irr, irr_at_z };
    Kind kind = Kind::all_irr;
    AlgebraicData data;
    int z = -1;
};

struct FamilyRecord {
    FamilyRef family;
    int k = 0, l = 0, m = 0;
};

struct Categorisation {
    CountPoly resolved;
    std::vector<UnresolvedCount> unresolved_counts;
    std::vector<FamilyRecord> families;

    bool fully_resolved() const { return unresolved_counts.empty() && families.empty(); }
    Categorisation& operator+=(const Categorisation& o);
};

Categorisation scale_categorisation(const Categorisation& o, int k, int l, int m);
Categorisation aggregate(const std::vector<Categorisation>& parts);

struct EngineConfig {
    int max_depth = 1 << 20;
    std::int64_t max_cases = -1;  // negative: unlimited
    bool memo = true;
    CountAudit* audit = nullptr;
};

struct EngineStats {
    std::uint64_t general_calls = 0, typeb_calls = 0;
    std::uint64_t general_hits = 0, typeb_hits = 0;
    std::uint64_t step1 = 0, step2 = 0, step3 = 0, step4 = 0;
    std::uint64_t leaves = 0, cases = 0, contradictory_cases = 0, budget_stops = 0;
};

// a case produced by simplification and splitting; |V| gains (q-1)^k q^l
struct PreparedCase {
    AlgebraicData data;
    int k = 0, l = 0;
};
std::vector<PreparedCase> prepare_cases(const AlgebraicData& a, std::uint64_t* contradictions = nullptr);

class Engine {
public:
    explicit Engine(EngineConfig cfg = {});

    Categorisation general(const AlgebraicData& a);
    Categorisation type_b(const AlgebraicData& a, int z);

    const EngineStats& stats() const { return stats_; }
    std::size_t memo_size() const { return general_memo_.size() + typeb_memo_.size(); }
    void clear_memo();
    CountAudit* audit() const { return cfg_.audit; }

private:
    Categorisation general_rec(const AlgebraicData& a, int depth);
    Categorisation type_b_rec(const AlgebraicData& a, int z, int depth);
    Categorisation leaf(const AlgebraicData& a);
    bool over_budget(int depth);

    EngineConfig cfg_;
    EngineStats stats_;
    std::unordered_map<std::string, Categorisation> general_memo_;
    std::unordered_map<std::string, Categorisation> typeb_memo_;
    std::unordered_map<std::string, CountResult> count_memo_;
};

int choose_z(const AlgebraicData& a);
std::optional<int> find_step2_witness(const AlgebraicData& a, int z);
std::optional<int> find_step3_witness(const AlgebraicData& a, int z);
// Type B contraction by the good pair (<z>,<y>); the image of z keeps its relative place
AlgebraicData typeb_step2_contract(const AlgebraicData& a, int z, int y);
// Type A quotient by S(b); the new vector z' is last
AlgebraicData typeb_step3_contract(const AlgebraicData& a, int z, int y);
// index of z after typeb_step2_contract
int step2_image_of_z(const AlgebraicData& a, int z, int y);

// canonical serialisation up to parameter renaming
std::string data_key(const AlgebraicData& a, int z = -1);

// one surviving family whose core is the cyclic 2-dimensional algebra
struct ExceptionalFamily {
    AlgebraicData core;
    int z = -1;
    int k = 0, l = 0;
    int degree_shift = 0;
    CountPoly total_count;  // t-free: (q-1)^k q^l |V| q(q-1)
};

struct ResolvedTable {
    int n = 0;
    std::map<int, CountPoly> entries;
    std::vector<ExceptionalFamily> exceptional;
    std::vector<UnresolvedCount> unresolved_counts;
    int dropped_families = 0;
};

// the 2-dimensional core {y,z}, y^2 in <z> nonzero, z = second vector
bool is_cyclic_core(const FamilyRef& f);
ResolvedTable resolve(const Categorisation& o, int n, CountAudit* audit = nullptr);

}  // namespace algchar
