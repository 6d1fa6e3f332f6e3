#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>
#include "json.hpp"

#include "algchar/field.hpp"
#include "algchar/polyring.hpp"

namespace algchar {

struct MalformedData : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadSubstitution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAssociative : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sorted, no repeats
using ParamSet = boost::container::small_vector<ParamId, 3>;

struct Restriction {
    enum class Kind : std::uint8_t { nonzero, equation };
    Kind kind = Kind::nonzero;
    ParamId param = 0;  // nonzero only
    ParamPoly poly;     // equation: poly == 0

    static Restriction nonzero(ParamId a) { return {Kind::nonzero, a, {}}; }
    static Restriction equation(ParamPoly p) { return {Kind::equation, 0, std::move(p)}; }
    bool is_nonzero() const { return kind == Kind::nonzero; }
    bool operator==(const Restriction&) const = default;
    bool operator<(const Restriction& o) const;
    std::string to_string() const;
};

struct Product {
    std::uint16_t x = 0, y = 0, z = 0;
    ParamSet factors;
    bool operator==(const Product&) const = default;
};

// (Q, E, B, R).  The basis is 0..dim-1 in order; labels are cosmetic.
struct AlgebraicData {
    std::vector<ParamId> params;
    std::vector<Restriction> restrictions;
    int dim = 0;
    std::vector<std::string> labels;
    std::vector<Product> products;
    std::map<ParamId, std::string> param_labels;

    std::string label(int i) const;
    std::string param_label(ParamId a) const;
    const ParamSet* find(int x, int y, int z) const;
    bool has_nonzero(ParamId a) const;
    bool zero_multiplication() const { return products.empty(); }
    // sort params, products, restrictions; drop duplicate restrictions
    void normalize();
};

using Substitution = std::map<ParamId, int>;

void validate(const AlgebraicData& a);
bool satisfies_nz(const AlgebraicData& a);
std::vector<AlgebraicData> split_into_cases(const AlgebraicData& a);

AlgebraicData remove_basis_vector(const AlgebraicData& a, int idx);
AlgebraicData set_param_zero(const AlgebraicData& a, ParamId p);
ParamId fresh_param(const AlgebraicData& a);

int eval_in_field(const ParamPoly& f, const FiniteField& F, const Substitution& h);
bool satisfies(const std::vector<Restriction>& e, const FiniteField& F, const Substitution& h);
std::vector<Substitution> enumerate_substitutions(const std::vector<ParamId>& q,
                                                  const std::vector<Restriction>& e, int field_size,
                                                  int cap = 8);
std::vector<Substitution> enumerate_substitutions(const AlgebraicData& a, int field_size, int cap = 8);
// |V(Q,E,q)| without materialising the list
std::uint64_t count_substitutions(const std::vector<ParamId>& q, const std::vector<Restriction>& e,
                                  int field_size, int cap = 8);

class ConcreteAlgebra {
public:
    ConcreteAlgebra(int field_size, int dim, std::vector<int> table);
    int q() const { return field_.q(); }
    int dim() const { return dim_; }
    const FiniteField& field() const { return field_; }
    // coefficient of e_k in e_i e_j
    int at(int i, int j, int k) const { return table_[(i * dim_ + j) * dim_ + k]; }
    const std::vector<int>& table() const { return table_; }
    // J / <z>; requires J z = z J = 0
    ConcreteAlgebra quotient(int z) const;
    std::vector<int> multiply(const std::vector<int>& a, const std::vector<int>& b) const;

private:
    FiniteField field_;
    int dim_;
    std::vector<int> table_;
};

ConcreteAlgebra instantiate(const AlgebraicData& a, const Substitution& h, int field_size);

nlohmann::json to_json(const AlgebraicData& a);
AlgebraicData data_from_json(const nlohmann::json& j);
nlohmann::json restriction_to_json(const Restriction& r, const AlgebraicData* names = nullptr);

}  // namespace algchar
