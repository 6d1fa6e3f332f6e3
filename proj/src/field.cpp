#include "algchar/field.hpp"

#include <stdexcept>

namespace algchar {

FiniteField::FiniteField(int q) : q_(q) {
    if (q != 2 && q != 3 && q != 4 && q != 5) throw std::invalid_argument("unsupported field size");
    p_ = q == 4 ? 2 : q;
    add_.assign(q * q, 0);
    mul_.assign(q * q, 0);
    neg_.assign(q, 0);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
            if (q == 4) {
                int a0 = a & 1, a1 = a >> 1, b0 = b & 1, b1 = b >> 1;
                add_[a * q + b] = a ^ b;
                // (a0 + a1 w)(b0 + b1 w), w^2 = w + 1
                int c0 = (a0 & b0) ^ (a1 & b1);
                int c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
                mul_[a * q + b] = c0 | (c1 << 1);
            } else {
                add_[a * q + b] = (a + b) % q;
                mul_[a * q + b] = (a * b) % q;
            }
        }
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            if (add(a, b) == 0) neg_[a] = b;
}

int FiniteField::inv(int a) const {
    for (int b = 1; b < q_; ++b)
        if (mul(a, b) == 1) return b;
    throw std::domain_error("zero has no inverse");
}

int FiniteField::from_int(const BigInt& c) const {
    BigInt r = c % p_;
    if (r < 0) r += p_;
    return static_cast<int>(r);
}

std::vector<int> FiniteField::prime_basis() const {
    if (q_ == 4) return {1, 2};
    return {1};
}

}  // namespace algchar
