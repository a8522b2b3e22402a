#include "rholattice/special_elements.hpp"

#include <mutex>

namespace rholattice {

namespace {

RingModulus ring(int n) { return RingModulus::truncated(n); }

int two_adic_valuation(int n) {
    int k = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++k;
    }
    return k;
}

// sum_{j=lo}^{hi} (-1)^(j-lo) chi^j
RawPolynomial alternating(int lo, int hi) {
    RawPolynomial p;
    for (int j = lo; j <= hi; ++j) p += RawPolynomial::monomial(j, (j - lo) % 2 == 0 ? 1 : -1);
    return p;
}

RawPolynomial geometric(int terms, int step = 1) {
    RawPolynomial p;
    for (int j = 0; j < terms; ++j) p += RawPolynomial::monomial(static_cast<long>(j) * step);
    return p;
}

}  // namespace

int normalize_k(int n, int k) {
    if (n < 2) throw InvalidArgument("N must be at least 2");
    const int r = static_cast<int>(mod_floor(k, n));
    if (gcd_ll(r, n) != 1) throw InvalidArgument("k = " + std::to_string(k) + " is not coprime to N = " + std::to_string(n));
    return r == 0 ? n : r;
}

int other_coprime(int n, int k) {
    const int base = normalize_k(n, k);
    for (int j = 1; j < n; ++j)
        if (j != base && gcd_ll(j, n) == 1) return j;
    return base;
}

RingElement elem_f(int n) { return elem_f_k(n, 1); }

RingElement elem_f_k(int n, int k) {
    k = normalize_k(n, k);
    const RingModulus m = ring(n);
    const RingElement num = reduce(RawPolynomial::constant(1) + RawPolynomial::monomial(k), m);
    const RingElement den = reduce(RawPolynomial::constant(1) - RawPolynomial::monomial(k), m);
    return num * inverse(den);
}

RingElement elem_f_prime_k(int n, int k) {
    k = normalize_k(n, k);
    if (k % 2 == 0 && n % 2 == 0) throw InvalidArgument("even k requires odd N");
    const RingModulus m = ring(n);
    const RawPolynomial num = k % 2 == 1 ? alternating(0, k - 1) : alternating(k, n - 1);
    return reduce(num, m) * integral_inverse(reduce(geometric(k), m));
}

RawPolynomial raw_A(int l) { return alternating(0, (1 << l) - 1); }

RingElement elem_h_l(int n, int l) {
    if (l < 1) throw InvalidArgument("h_l is defined for l >= 1");
    return reduce(raw_A(l), RingModulus::binomial_plus(n, l)) * Rational(1, 2);
}

RingElement elem_h(int n) {
    const int kk = two_adic_valuation(n);
    if (kk < 1) throw InvalidArgument("h needs an even N");
    const RingModulus m = RingModulus::odd_truncated(n);
    const int mm = n >> kk;
    RawPolynomial weights;
    for (int j = 0; j < mm; ++j) weights += RawPolynomial::monomial(static_cast<long>(j) << kk, j + 1);
    return reduce(raw_A(kk) * weights, m) * Rational(-1, mm);
}

RingElement elem_g(int n) {
    const int kk = two_adic_valuation(n);
    const RingElement f = elem_f(n);
    if (kk == 0) return inverse(f);
    // On each factor other than 1 + chi, g inverts f = (1+chi)/(1-chi).
    const RawPolynomial one_minus_chi = RawPolynomial::constant(1) - RawPolynomial::monomial(1);
    std::vector<RingElement> parts;
    for (const RingModulus& factor : crt_factors(n)) {
        if (factor.kind() == RingKind::BinomialPlus && factor.level() == 0) {
            parts.emplace_back(factor);
            continue;
        }
        const RingElement inv_one_plus =
            factor.kind() == RingKind::BinomialPlus ? elem_h_l(n, factor.level()) : elem_h(n);
        parts.push_back(reduce(one_minus_chi, factor) * inv_one_plus);
    }
    return crt_combine(parts, n);
}

RingElement elem_even_sum(int n) {
    if (n % 2 != 0) throw InvalidArgument("1 + chi^2 + ... + chi^(N-2) needs an even N");
    return reduce(geometric(n / 2, 2), ring(n));
}

RingElement divide_by_f(const RingElement& u) {
    const int n = u.n();
    if (u.modulus().kind() != RingKind::Truncated) throw UnsupportedModulus("divide_by_f needs a truncated modulus");
    if (n % 2 != 0) throw PreconditionFailed("divide_by_f needs an even N");
    if (!in_lattice_4R(u, Sign::Plus)) throw PreconditionFailed("divide_by_f: u is not in 4R^+");
    if (eval_minus_one(u) != 0) throw PreconditionFailed("divide_by_f: u(-1) != 0");
    const RingModulus m = u.modulus();
    if (n == 2) return RingElement::zero(m);  // R = Z with chi = -1, so u = 0
    const int half = n / 2;
    const RawPolynomial one_minus_chi = RawPolynomial::constant(1) - RawPolynomial::monomial(1);
    // u = sum_k c_k (4(chi^k + chi^-k) + 8(-1)^(k+1)); each term is (1+chi) v_k.
    RawPolynomial a;
    for (int k = 1; k <= half; ++k) {
        const Rational c = k < half ? Rational(u.coeff(k) / 4) : Rational(u.coeff(k) / 8);
        if (c == 0) continue;
        RawPolynomial v;
        for (int j = 0; j < k; ++j) v += RawPolynomial::monomial(j, (k - 1 - j) % 2 == 0 ? 4 : -4);
        for (int j = 1; j <= k; ++j) v += RawPolynomial::monomial(-j, (k - j) % 2 == 0 ? 4 : -4);
        a += one_minus_chi * v * c;
    }
    RingElement result = reduce(a, m);
    if (!(elem_f(n) * result == u) || !in_lattice_4R(result, Sign::Minus))
        throw VerificationFailure("divide_by_f: constructed quotient failed validation for " + u.to_string());
    return result;
}

SpecialElementCatalog SpecialElementCatalog::build(int n, int k) {
    k = normalize_k(n, k);
    const int kk = two_adic_valuation(n);
    const RingElement f = elem_f(n);
    SpecialElementCatalog c{n, k, f, elem_f_k(n, k), elem_f_prime_k(n, k), elem_g(n), {}, std::nullopt, {}};
    for (int l = 1; l < kk; ++l) c.h_l.emplace(l, elem_h_l(n, l));
    if (kk >= 1 && (n >> kk) > 1) c.h = elem_h(n);
    for (int l = 0; l <= kk; ++l) c.A.push_back(raw_A(l));
    return c;
}

std::shared_ptr<const SpecialElementCatalog> CatalogCache::get(int n, int k) {
    const auto key = std::make_pair(n, normalize_k(n, k));
    {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    auto built = std::make_shared<const SpecialElementCatalog>(SpecialElementCatalog::build(key.first, key.second));
    std::unique_lock lock(mutex_);
    return entries_.try_emplace(key, std::move(built)).first->second;
}

std::shared_ptr<const SpecialElementCatalog> shared_catalog(int n, int k) {
    static CatalogCache cache;
    return cache.get(n, k);
}

}  // namespace rholattice
