#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "algchar/algdata.hpp"
#include "algchar/engine.hpp"
#include "algchar/patterns.hpp"

namespace algchar {

struct NotCentralIdeal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultMaxOrder = 1000000;

// number of conjugacy classes of 1+J
std::uint64_t class_count(const ConcreteAlgebra& alg, std::uint64_t max_order = kDefaultMaxOrder);
// k(1+J) - k(1+J/<z>); z must satisfy Jz = zJ = 0
std::uint64_t irr_count_at_z(const ConcreteAlgebra& alg, int z, std::uint64_t max_order = kDefaultMaxOrder);

struct OracleCheck {
    std::string quantity;  // "sum" (t := 1) or "weighted" (t^e := q^2e)
    BigInt expected, actual;
    bool pass = false;
};

struct VerifyReport {
    std::string instance;
    int q = 0;
    bool pass = false;
    std::vector<OracleCheck> checks;
    std::optional<Substitution> counterexample;
    std::string note;
};

// Compares the totals of O over all of V(Q,E,q0) with the oracle.  z < 0 checks a
// categorisation of Irr(A); otherwise of Irr(A,z).  Family records are counted by
// brute force over their own substitutions; unresolved counts fail the check.
VerifyReport verify_categorisation(const AlgebraicData& a, const Categorisation& o, int q0, int z = -1,
                                   const std::string& instance = "");

// A copy of `a` whose only admissible substitution is h (q0 in {2,3}).
AlgebraicData pin_substitution(const AlgebraicData& a, const Substitution& h, int q0);

// Runs the engine once per substitution (pinned) and checks each against the oracle;
// stops at the first failing h.
VerifyReport verify_substitutions(const AlgebraicData& a, int q0, int z, Engine& engine,
                                  const std::string& instance = "");

// size of the orbit of u in F_q^C under 1 + T_{C,R}(q) acting on column vectors
std::uint64_t orbit_size(const Poset& p, const std::vector<int>& u, int q);

}  // namespace algchar
