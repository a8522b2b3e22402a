#include "rholattice/cyclic_ring.hpp"

#include <sstream>

#include "rational_matrix.hpp"

namespace rholattice {

namespace {

int two_adic_valuation(int n) {
    int k = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++k;
    }
    return k;
}

void require_same_modulus(const RingModulus& a, const RingModulus& b) {
    if (!(a == b)) throw ModulusMismatch("modulus mismatch: " + a.describe() + " vs " + b.describe());
}

bool has_involution(const RingModulus& m) {
    return m.kind() == RingKind::GroupRing || m.kind() == RingKind::Truncated;
}

void require_involution(const RingModulus& m, const char* op) {
    if (!has_involution(m)) throw UnsupportedModulus(std::string(op) + " needs a group ring or truncated modulus");
}

// Fold exponents by the period, then long-divide by the monic generator.
std::vector<Rational> reduce_dense(std::vector<Rational> v, const RingModulus& m) {
    const int period = m.period();
    if (static_cast<int>(v.size()) > period) {
        for (std::size_t i = period; i < v.size(); ++i) {
            if (v[i] != 0) v[i % period] += v[i];
        }
        v.resize(period);
    }
    const auto& g = m.generator();
    const int len = m.length();
    for (int deg = static_cast<int>(v.size()) - 1; deg >= len; --deg) {
        if (v[deg] == 0) continue;
        const Rational c = v[deg];
        for (int j = 0; j <= len; ++j) {
            if (g[j] != 0) v[deg - len + j] -= c * g[j];
        }
    }
    v.resize(len, Rational(0));
    return v;
}

}  // namespace

std::string kind_name(RingKind kind) {
    switch (kind) {
        case RingKind::GroupRing: return "group_ring";
        case RingKind::Truncated: return "truncated";
        case RingKind::BinomialPlus: return "binomial_plus";
        case RingKind::OddTruncated: return "odd_truncated";
    }
    return "unknown";
}

RingKind kind_from_name(const std::string& name) {
    if (name == "group_ring" || name == "group") return RingKind::GroupRing;
    if (name == "truncated") return RingKind::Truncated;
    if (name == "binomial_plus") return RingKind::BinomialPlus;
    if (name == "odd_truncated") return RingKind::OddTruncated;
    throw InvalidArgument("unknown ring kind '" + name + "'");
}

RingModulus::RingModulus(int n, RingKind kind, int level) : n_(n), kind_(kind), level_(level), period_(n) {
    switch (kind) {
        case RingKind::GroupRing:
            generator_.assign(n + 1, 0);
            generator_[0] = -1;
            generator_[n] = 1;
            break;
        case RingKind::Truncated:
            generator_.assign(n, 1);
            break;
        case RingKind::BinomialPlus: {
            const int half = 1 << level;
            period_ = 2 * half;
            generator_.assign(half + 1, 0);
            generator_[0] = 1;
            generator_[half] = 1;
            break;
        }
        case RingKind::OddTruncated: {
            const int k = two_adic_valuation(n);
            const int block = 1 << k;
            const int m = n / block;
            generator_.assign(block * (m - 1) + 1, 0);
            for (int j = 0; j < m; ++j) generator_[block * j] = 1;
            break;
        }
    }
}

RingModulus RingModulus::group_ring(int n) {
    if (n < 1) throw InvalidArgument("group ring needs N >= 1");
    return RingModulus(n, RingKind::GroupRing, 0);
}

RingModulus RingModulus::truncated(int n) {
    if (n < 1) throw InvalidArgument("truncated ring needs N >= 1");
    return RingModulus(n, RingKind::Truncated, 0);
}

RingModulus RingModulus::binomial_plus(int n, int l) {
    if (n < 2 || l < 0 || l > 29 || n % (2 << l) != 0)
        throw InvalidArgument("binomial factor 1+chi^(2^l) needs 2^(l+1) | N");
    return RingModulus(n, RingKind::BinomialPlus, l);
}

RingModulus RingModulus::odd_truncated(int n) {
    if (n < 2) throw InvalidArgument("odd truncated factor needs N >= 2");
    const int k = two_adic_valuation(n);
    if ((n >> k) <= 1) throw InvalidArgument("odd truncated factor needs an odd part M > 1");
    return RingModulus(n, RingKind::OddTruncated, 0);
}

std::string RingModulus::describe() const {
    std::string s = kind_name(kind_) + "(N=" + std::to_string(n_);
    if (kind_ == RingKind::BinomialPlus) s += ", l=" + std::to_string(level_);
    return s + ")";
}

RawPolynomial RawPolynomial::constant(const Rational& c) { return monomial(0, c); }

RawPolynomial RawPolynomial::monomial(long exponent, const Rational& c) {
    RawPolynomial p;
    p.add_term(exponent, c);
    return p;
}

void RawPolynomial::add_term(long exponent, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational RawPolynomial::coeff(long exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational RawPolynomial::eval(const Rational& x) const {
    Rational total = 0;
    for (const auto& [e, c] : terms_) {
        Rational power = 1;
        const Rational base = e >= 0 ? x : 1 / x;
        for (long i = 0; i < (e >= 0 ? e : -e); ++i) power *= base;
        total += c * power;
    }
    return total;
}

RawPolynomial& RawPolynomial::operator+=(const RawPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

RawPolynomial& RawPolynomial::operator-=(const RawPolynomial& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

RawPolynomial& RawPolynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

RawPolynomial operator*(const RawPolynomial& a, const RawPolynomial& b) {
    RawPolynomial out;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    return out;
}

RawPolynomial RawPolynomial::operator-() const {
    RawPolynomial out = *this;
    for (auto& [e, v] : out.terms_) v = -v;
    return out;
}

RingElement::RingElement(const RingModulus& m) : modulus_(m), coeffs_(m.length(), Rational(0)) {}

RingElement::RingElement(const RingModulus& m, std::vector<Rational> canonical_coeffs)
    : modulus_(m), coeffs_(std::move(canonical_coeffs)) {
    if (static_cast<int>(coeffs_.size()) != m.length())
        throw InvalidArgument("expected " + std::to_string(m.length()) + " coefficients for " + m.describe() +
                              ", got " + std::to_string(coeffs_.size()));
}

RingElement RingElement::one(const RingModulus& m) { return constant(m, 1); }

RingElement RingElement::constant(const RingModulus& m, const Rational& c) { return monomial(m, 0, c); }

RingElement RingElement::monomial(const RingModulus& m, long exponent, const Rational& c) {
    return reduce(RawPolynomial::monomial(exponent, c), m);
}

bool RingElement::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool RingElement::is_integral() const {
    for (const auto& c : coeffs_)
        if (!is_integer(c)) return false;
    return true;
}

RawPolynomial RingElement::to_raw() const {
    RawPolynomial p;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) p += RawPolynomial::monomial(static_cast<long>(i), coeffs_[i]);
    return p;
}

RingElement& RingElement::operator+=(const RingElement& other) {
    require_same_modulus(modulus_, other.modulus_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

RingElement& RingElement::operator-=(const RingElement& other) {
    require_same_modulus(modulus_, other.modulus_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

RingElement& RingElement::operator*=(const Rational& c) {
    for (auto& v : coeffs_) v *= c;
    return *this;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    require_same_modulus(a.modulus_, b.modulus_);
    const std::size_t len = a.coeffs_.size();
    if (len == 0) return a;
    std::vector<Rational> prod(2 * len - 1, Rational(0));
    for (std::size_t i = 0; i < len; ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < len; ++j) {
            if (b.coeffs_[j] != 0) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return RingElement(a.modulus_, reduce_dense(std::move(prod), a.modulus_));
}

RingElement RingElement::operator-() const {
    RingElement out = *this;
    for (auto& v : out.coeffs_) v = -v;
    return out;
}

RingElement RingElement::pow(unsigned exponent) const {
    RingElement result = one(modulus_);
    RingElement base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

std::string RingElement::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const Rational& c = coeffs_[i];
        if (c == 0) continue;
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (i == 0) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) os << mag.get_str() << '*';
        os << 'x';
        if (i > 1) os << '^' << i;
    }
    return first ? "0" : os.str();
}

RingElement reduce(const RawPolynomial& raw, const RingModulus& m) {
    std::vector<Rational> v(m.period(), Rational(0));
    for (const auto& [e, c] : raw.terms()) v[mod_floor(e, m.period())] += c;
    return RingElement(m, reduce_dense(std::move(v), m));
}

RingElement add(const RingElement& a, const RingElement& b) { return a + b; }
RingElement mul(const RingElement& a, const RingElement& b) { return a * b; }
RingElement neg(const RingElement& a) { return -a; }

std::vector<std::vector<Rational>> multiplication_matrix(const RingElement& a) {
    const int len = a.modulus().length();
    std::vector<std::vector<Rational>> mat(len, std::vector<Rational>(len, Rational(0)));
    for (int j = 0; j < len; ++j) {
        const RingElement col = a * RingElement::monomial(a.modulus(), j);
        for (int i = 0; i < len; ++i) mat[i][j] = col.coeff(i);
    }
    return mat;
}

namespace {

// (1 - chi^k)^{-1} = -(1/N) * sum_{j<N} (j+1) chi^{jk}
std::optional<RingElement> inverse_by_pattern(const RingElement& a) {
    const RingModulus& m = a.modulus();
    if (m.kind() != RingKind::Truncated) return std::nullopt;
    const int n = m.n();
    if (n < 2) return std::nullopt;
    for (int k = 1; k < n; ++k) {
        if (gcd_ll(k, n) != 1) continue;
        const RingElement one_minus = reduce(RawPolynomial::constant(1) - RawPolynomial::monomial(k), m);
        if (a == one_minus) {
            RawPolynomial inv;
            for (int j = 0; j < n; ++j) inv += RawPolynomial::monomial(static_cast<long>(j) * k, Rational(-(j + 1), n));
            return reduce(inv, m);
        }
    }
    // 1 + chi + ... + chi^{k-1}, inverse 1 + chi^k + ... + chi^{(r-1)k} with rk = 1 mod N.
    int run = 0;
    while (run < m.length() && a.coeff(run) == 1) ++run;
    for (int i = run; i < m.length(); ++i)
        if (a.coeff(i) != 0) return std::nullopt;
    if (run == 0 || gcd_ll(run, n) != 1) return std::nullopt;
    int r = 1;
    while ((static_cast<long long>(r) * run) % n != 1 % n) ++r;
    RawPolynomial inv;
    for (int j = 0; j < r; ++j) inv += RawPolynomial::monomial(static_cast<long>(j) * run);
    return reduce(inv, m);
}

}  // namespace

RingElement inverse(const RingElement& a) {
    const RingModulus& m = a.modulus();
    if (m.length() == 0) throw NotInvertible("the zero ring has no units", std::nullopt);
    const RingElement unit = RingElement::one(m);
    if (auto special = inverse_by_pattern(a)) {
        if (a * *special == unit) return *special;
    }
    const auto mat = multiplication_matrix(a);
    std::vector<Rational> rhs(m.length(), Rational(0));
    rhs[0] = 1;
    if (auto x = detail::solve(mat, rhs)) return RingElement(m, *x);
    auto kernel = detail::null_space(mat);
    std::optional<RingElement> witness;
    if (!kernel.empty()) witness = RingElement(m, kernel.front());
    throw NotInvertible(a.to_string() + " is a zero divisor in " + m.describe(), witness);
}

RingElement integral_inverse(const RingElement& a) {
    RingElement inv = inverse(a);
    if (!a.is_integral() || !inv.is_integral())
        throw NotInvertible(a.to_string() + " is not a unit of the integral ring", std::nullopt);
    return inv;
}

RingElement involution(const RingElement& a) {
    require_involution(a.modulus(), "involution");
    const int n = a.n();
    RawPolynomial raw;
    for (int i = 0; i < a.modulus().length(); ++i)
        if (a.coeff(i) != 0) raw += RawPolynomial::monomial((n - i) % n, a.coeff(i));
    return reduce(raw, a.modulus());
}

RingElement eigen_project(const RingElement& a, Sign sign) {
    RingElement conj = involution(a);
    if (sign == Sign::Minus) conj = -conj;
    return (a + conj) * Rational(1, 2);
}

bool eigen_test(const RingElement& a, Sign sign) {
    RingElement conj = involution(a);
    if (sign == Sign::Minus) conj = -conj;
    return conj == a;
}

Rational eval_minus_one(const RingElement& a) {
    require_involution(a.modulus(), "eval_minus_one");
    if (a.n() % 2 != 0) throw NOdd();
    Rational total = 0;
    for (int i = 0; i < a.modulus().length(); ++i) {
        if (i % 2 == 0)
            total += a.coeff(i);
        else
            total -= a.coeff(i);
    }
    return total;
}

RingElement restrict(const RingElement& a, int n_prime) {
    require_involution(a.modulus(), "restrict");
    if (n_prime < 1 || a.n() % n_prime != 0)
        throw InvalidArgument("restrict: " + std::to_string(n_prime) + " does not divide " + std::to_string(a.n()));
    const RingModulus target = a.modulus().kind() == RingKind::GroupRing ? RingModulus::group_ring(n_prime)
                                                                          : RingModulus::truncated(n_prime);
    return reduce(a.to_raw(), target);
}

std::vector<RingModulus> crt_factors(int n) {
    const int k = two_adic_valuation(n);
    if (k == 0) return {RingModulus::truncated(n)};
    std::vector<RingModulus> out;
    for (int l = 0; l < k; ++l) out.push_back(RingModulus::binomial_plus(n, l));
    if ((n >> k) > 1) out.push_back(RingModulus::odd_truncated(n));
    return out;
}

std::vector<RingElement> crt_split(const RingElement& a) {
    if (a.modulus().kind() != RingKind::Truncated) throw UnsupportedModulus("crt_split needs a truncated modulus");
    std::vector<RingElement> parts;
    const RawPolynomial raw = a.to_raw();
    for (const RingModulus& factor : crt_factors(a.n())) parts.push_back(reduce(raw, factor));
    return parts;
}

namespace {

// Exact quotient of integer polynomials (low degree first), b monic.
std::vector<long> exact_divide(std::vector<long> a, const std::vector<long>& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) throw Error("exact_divide: degree too small");
    std::vector<long> q(a.size() - db, 0);
    for (std::size_t deg = a.size() - 1; deg + 1 >= b.size(); --deg) {
        const long c = a[deg];
        q[deg - db] = c;
        for (std::size_t j = 0; j <= db; ++j) a[deg - db + j] -= c * b[j];
        if (deg == db) break;
    }
    for (std::size_t i = 0; i < db; ++i)
        if (a[i] != 0) throw Error("exact_divide: nonzero remainder");
    return q;
}

RawPolynomial raw_from_dense(const std::vector<long>& coeffs) {
    RawPolynomial p;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0) p += RawPolynomial::monomial(static_cast<long>(i), coeffs[i]);
    return p;
}

}  // namespace

RingElement crt_combine(const std::vector<RingElement>& parts, int n) {
    const auto factors = crt_factors(n);
    if (parts.size() != factors.size())
        throw InvalidArgument("crt_combine: expected " + std::to_string(factors.size()) + " parts");
    const RingModulus target = RingModulus::truncated(n);
    if (factors.size() == 1 && factors[0].kind() == RingKind::Truncated) {
        require_same_modulus(parts[0].modulus(), target);
        return parts[0];
    }
    const std::vector<long> phi(n, 1);
    RingElement total(target);
    for (std::size_t j = 0; j < factors.size(); ++j) {
        require_same_modulus(parts[j].modulus(), factors[j]);
        // e_j = Q_j * (Q_j mod P_j)^{-1}, Q_j = Phi_N / P_j.
        const RawPolynomial cofactor = raw_from_dense(exact_divide(phi, factors[j].generator()));
        const RingElement local_inverse = inverse(reduce(cofactor, factors[j]));
        const RingElement idempotent = reduce(cofactor * local_inverse.to_raw(), target);
        total += reduce(parts[j].to_raw(), target) * idempotent;
    }
    return total;
}

bool in_lattice_4R(const RingElement& a, Sign sign) {
    if (!eigen_test(a, sign)) return false;
    for (const auto& c : a.coeffs())
        if (!is_integer(c / 4)) return false;
    return true;
}

std::vector<RingElement> antisymmetric_basis(int n) {
    const RingModulus m = RingModulus::truncated(n);
    std::vector<RingElement> out;
    for (int r = 1; 2 * r < n; ++r)
        out.push_back(reduce(RawPolynomial::monomial(r) - RawPolynomial::monomial(n - r), m));
    return out;
}

std::vector<RingElement> symmetric_basis(int n) {
    const RingModulus m = RingModulus::truncated(n);
    std::vector<RingElement> out;
    for (int r = 1; 2 * r <= n; ++r) {
        RawPolynomial p = RawPolynomial::monomial(r);
        if (2 * r != n) p += RawPolynomial::monomial(n - r);
        out.push_back(reduce(p, m));
    }
    return out;
}

}  // namespace rholattice
