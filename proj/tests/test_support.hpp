#pragma once
#include <random>
#include <vector>

#include "rholattice/cyclic_ring.hpp"

namespace testsupport {

using namespace rholattice;

inline RingElement from_ints(const RingModulus& m, std::vector<long> c) {
    std::vector<Rational> q;
    for (long v : c) q.emplace_back(v);
    q.resize(m.length(), Rational(0));
    return RingElement(m, std::move(q));
}

inline RingElement random_element(const RingModulus& m, std::mt19937_64& rng, int bound = 5) {
    std::uniform_int_distribution<int> num(-bound, bound), den(1, 3);
    std::vector<Rational> c;
    for (int i = 0; i < m.length(); ++i) c.push_back(make_rational(num(rng), den(rng)));
    return RingElement(m, std::move(c));
}

// Plain cyclic convolution in Q[Z_N], written without the library's reduction.
inline std::vector<Rational> convolve(const std::vector<Rational>& a, const std::vector<Rational>& b, int n) {
    std::vector<Rational> out(n, Rational(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[(i + j) % n] += a[i] * b[j];
    return out;
}

// Group-ring coefficients of an element of Q[chi]/(1+...+chi^{N-1}), lifted with zero top coefficient.
inline std::vector<Rational> lift(const RingElement& a) {
    std::vector<Rational> v = a.coeffs();
    v.resize(a.n(), Rational(0));
    return v;
}

// Equality modulo the norm element: the difference is a constant vector.
inline bool equal_mod_norm(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    const Rational shift = a[0] - b[0];
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] - b[i] != shift) return false;
    return true;
}

}  // namespace testsupport
