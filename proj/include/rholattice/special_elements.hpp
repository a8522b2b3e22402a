#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "rholattice/cyclic_ring.hpp"

namespace rholattice {

// Least positive residue of k mod N; throws unless gcd(k, N) = 1.
int normalize_k(int n, int k);

// Smallest positive k' != k (mod N) coprime to N, or k itself when none exists.
int other_coprime(int n, int k = 1);

RingElement elem_f(int n);
RingElement elem_f_k(int n, int k);
RingElement elem_f_prime_k(int n, int k);

// 1 - chi + chi^2 - ... - chi^(2^l - 1)
RawPolynomial raw_A(int l);
// (1+chi)^{-1} = A_l / 2 in the factor 1 + chi^(2^l), l >= 1.
RingElement elem_h_l(int n, int l);
// (1+chi)^{-1} in the odd factor, K >= 1 and M > 1.
RingElement elem_h(int n);
RingElement elem_g(int n);

// 1 + chi^2 + ... + chi^(N-2), N even.
RingElement elem_even_sum(int n);

// a in 4R^- with f*a = u, for u in 4R^+ with u(-1) = 0.
RingElement divide_by_f(const RingElement& u);

struct SpecialElementCatalog {
    int n = 0;
    int k = 1;
    RingElement f;
    RingElement f_k;
    RingElement f_prime_k;
    RingElement g;
    std::map<int, RingElement> h_l;
    std::optional<RingElement> h;
    std::vector<RawPolynomial> A;

    static SpecialElementCatalog build(int n, int k);
};

// Memoizes catalogs per (N, k); lookups are safe from concurrent threads.
class CatalogCache {
public:
    std::shared_ptr<const SpecialElementCatalog> get(int n, int k);

private:
    std::shared_mutex mutex_;
    std::map<std::pair<int, int>, std::shared_ptr<const SpecialElementCatalog>> entries_;
};

std::shared_ptr<const SpecialElementCatalog> shared_catalog(int n, int k);

}  // namespace rholattice
