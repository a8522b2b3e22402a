#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rholattice/errors.hpp"
#include "rholattice/numeric.hpp"

namespace rholattice {

enum class RingKind { GroupRing, Truncated, BinomialPlus, OddTruncated };

enum class Sign { Plus = 1, Minus = -1 };

inline int sign_value(Sign s) { return static_cast<int>(s); }
inline Sign parity_sign(int d) { return d % 2 == 0 ? Sign::Plus : Sign::Minus; }

std::string kind_name(RingKind kind);
RingKind kind_from_name(const std::string& name);

// Quotient ring Q[chi]/I for one of the four ideals used in the library.
// Every ideal divides chi^period - 1, and has a monic integer generator of
// degree length().
class RingModulus {
public:
    static RingModulus group_ring(int n);
    static RingModulus truncated(int n);
    static RingModulus binomial_plus(int n, int l);
    static RingModulus odd_truncated(int n);

    int n() const { return n_; }
    RingKind kind() const { return kind_; }
    int level() const { return level_; }
    int length() const { return static_cast<int>(generator_.size()) - 1; }
    int period() const { return period_; }
    const std::vector<long>& generator() const { return generator_; }

    bool operator==(const RingModulus& other) const {
        return n_ == other.n_ && kind_ == other.kind_ && level_ == other.level_;
    }

    std::string describe() const;

private:
    RingModulus(int n, RingKind kind, int level);

    int n_;
    RingKind kind_;
    int level_;
    int period_;
    std::vector<long> generator_;
};

// Sparse Laurent polynomial in chi with rational coefficients, the "raw"
// level on which reduce() acts.
class RawPolynomial {
public:
    RawPolynomial() = default;
    static RawPolynomial constant(const Rational& c);
    static RawPolynomial monomial(long exponent, const Rational& c = 1);

    const std::map<long, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(long exponent) const;
    Rational eval(const Rational& x) const;

    RawPolynomial& operator+=(const RawPolynomial& other);
    RawPolynomial& operator-=(const RawPolynomial& other);
    RawPolynomial& operator*=(const Rational& c);
    friend RawPolynomial operator+(RawPolynomial a, const RawPolynomial& b) { return a += b; }
    friend RawPolynomial operator-(RawPolynomial a, const RawPolynomial& b) { return a -= b; }
    friend RawPolynomial operator*(const RawPolynomial& a, const RawPolynomial& b);
    friend RawPolynomial operator*(RawPolynomial a, const Rational& c) { return a *= c; }
    RawPolynomial operator-() const;
    bool operator==(const RawPolynomial& other) const { return terms_ == other.terms_; }

private:
    void add_term(long exponent, const Rational& c);
    std::map<long, Rational> terms_;
};

class RingElement {
public:
    explicit RingElement(const RingModulus& m);
    RingElement(const RingModulus& m, std::vector<Rational> canonical_coeffs);

    static RingElement zero(const RingModulus& m) { return RingElement(m); }
    static RingElement one(const RingModulus& m);
    static RingElement constant(const RingModulus& m, const Rational& c);
    static RingElement monomial(const RingModulus& m, long exponent, const Rational& c = 1);

    const RingModulus& modulus() const { return modulus_; }
    int n() const { return modulus_.n(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& coeff(int i) const { return coeffs_.at(i); }

    bool is_zero() const;
    bool is_integral() const;
    RawPolynomial to_raw() const;

    RingElement& operator+=(const RingElement& other);
    RingElement& operator-=(const RingElement& other);
    RingElement& operator*=(const Rational& c);
    friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
    friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
    friend RingElement operator*(const RingElement& a, const RingElement& b);
    friend RingElement operator*(RingElement a, const Rational& c) { return a *= c; }
    friend RingElement operator*(const Rational& c, RingElement a) { return a *= c; }
    RingElement operator-() const;
    RingElement pow(unsigned exponent) const;

    bool operator==(const RingElement& other) const {
        return modulus_ == other.modulus_ && coeffs_ == other.coeffs_;
    }

    std::string to_string() const;

private:
    RingModulus modulus_;
    std::vector<Rational> coeffs_;
};

RingElement reduce(const RawPolynomial& raw, const RingModulus& m);

RingElement add(const RingElement& a, const RingElement& b);
RingElement mul(const RingElement& a, const RingElement& b);
RingElement neg(const RingElement& a);

class NotInvertible : public Error {
public:
    NotInvertible(const std::string& what, std::optional<RingElement> witness)
        : Error(what), witness_(std::move(witness)) {}
    // Nonzero b with a*b = 0, when a is a zero divisor.
    const std::optional<RingElement>& witness() const { return witness_; }

private:
    std::optional<RingElement> witness_;
};

// Inverse in the rational ring.
RingElement inverse(const RingElement& a);
// Inverse that must itself be integral (unit of the integral ring).
RingElement integral_inverse(const RingElement& a);

// Matrix of x -> a*x in the canonical basis; column j is a*chi^j.
std::vector<std::vector<Rational>> multiplication_matrix(const RingElement& a);

RingElement involution(const RingElement& a);
RingElement eigen_project(const RingElement& a, Sign sign);
bool eigen_test(const RingElement& a, Sign sign);

Rational eval_minus_one(const RingElement& a);

// Push a GroupRing or Truncated element down to the same kind over n' | N.
RingElement restrict(const RingElement& a, int n_prime);

// Factors of Truncated(N) for N = 2^K M: BinomialPlus(0..K-1), then
// OddTruncated when M > 1.
std::vector<RingModulus> crt_factors(int n);
std::vector<RingElement> crt_split(const RingElement& a);
RingElement crt_combine(const std::vector<RingElement>& parts, int n);

bool in_lattice_4R(const RingElement& a, Sign sign);

// chi^r - chi^{N-r} for 1 <= r < N/2: a basis of the -1 eigenlattice.
std::vector<RingElement> antisymmetric_basis(int n);
// chi^r + chi^{N-r} (and chi^{N/2}, 1 for the constant): spans the +1 eigenlattice.
std::vector<RingElement> symmetric_basis(int n);

}  // namespace rholattice
