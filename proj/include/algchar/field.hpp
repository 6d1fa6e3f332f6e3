#pragma once

#include <cstdint>
#include <vector>

#include "algchar/polyring.hpp"

namespace algchar {

// GF(q) for q in {2,3,4,5}.  Elements are 0..q-1; for q=4 the element a+2b
// stands for a + b*w with w^2 = w + 1.
class FiniteField {
public:
    explicit FiniteField(int q);

    int q() const { return q_; }
    int p() const { return p_; }
    int add(int a, int b) const { return add_[a * q_ + b]; }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
    int inv(int a) const;
    // image of an integer under Z -> GF(q)
    int from_int(const BigInt& c) const;
    // an F_p-basis of GF(q) over its prime field
    std::vector<int> prime_basis() const;

private:
    int q_;
    int p_;
    std::vector<int> add_, mul_, neg_;
};

}  // namespace algchar
