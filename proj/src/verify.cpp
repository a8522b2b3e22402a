#include "rholattice/verify.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "rholattice/errors.hpp"
#include "rholattice/special_elements.hpp"

namespace rholattice {

namespace {

using Witness = std::optional<std::string>;
using Rng = std::mt19937_64;

struct Task {
    std::string suite;
    std::string id;
    Json params;
    std::function<Witness(Rng&, Json&)> run;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

Rng task_rng(std::uint64_t seed, const Task& t) {
    const std::uint64_t h = fnv1a(t.id + t.params.dump());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational random_rational(Rng& rng) { return make_rational(Integer(uniform(rng, -4, 4)), Integer(uniform(rng, 1, 3))); }

RingElement random_element(const RingModulus& m, Rng& rng, bool integral = false) {
    std::vector<Rational> c(m.length());
    for (auto& q : c) q = integral ? Rational(uniform(rng, -5, 5)) : random_rational(rng);
    return RingElement(m, std::move(c));
}

RawPolynomial random_raw(Rng& rng, long lo, long hi, int terms) {
    RawPolynomial p;
    for (int i = 0; i < terms; ++i) p += RawPolynomial::monomial(uniform(rng, lo, hi), random_rational(rng));
    return p;
}

RawPolynomial random_integer_raw(Rng& rng, int degree, long scale) {
    RawPolynomial p;
    for (int i = 0; i < degree; ++i) p += RawPolynomial::monomial(i, Rational(scale * uniform(rng, -3, 3)));
    return p;
}

std::string str(const RingElement& a) { return a.to_string(); }

std::string str(const std::vector<long long>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

std::string str(const NormalCoords& t) { return "t4=" + str(t.t4) + " t4m2=" + str(t.t4m2); }

std::string str(const StructureElement& x) { return "rho=" + str(x.rho) + " " + str(x.coords); }

Json np(int n) { return {{"N", n}}; }
Json ndk(const LensParams& p) { return {{"N", p.N}, {"d", p.d}, {"k", p.k}}; }

int bit_length_of_two(int n) { return __builtin_ctz(static_cast<unsigned>(n)); }

// ---------------------------------------------------------------------------
// Model helpers

std::vector<RingElement> lattice_generators(const LensParams& p) {
    const RingModulus r = p.ring();
    std::vector<RingElement> out;
    const int n = p.N;
    if (p.d % 2 == 1) {
        for (const auto& b : antisymmetric_basis(n)) out.push_back(b * Rational(4));
        return out;
    }
    if (n % 2 == 1) {
        out.push_back(RingElement::constant(r, 4));
        for (const auto& b : symmetric_basis(n)) out.push_back(b * Rational(4));
        return out;
    }
    out.push_back(RingElement::constant(r, 8));
    for (int j = 1; 2 * j <= n; ++j) {
        const RingElement s = 2 * j == n ? RingElement::monomial(r, j)
                                         : RingElement::monomial(r, j) + RingElement::monomial(r, n - j);
        const long sign = (j % 2 == 0) ? -1 : 1;
        const long constant = 2 * j == n ? 4 * ((j % 2 == 0) ? -1 : 1) : 8 * sign;
        out.push_back(s * Rational(4) + RingElement::constant(r, Rational(constant)));
    }
    return out;
}

// Eval-zero generators of the d-even lattice, N even.
std::vector<RingElement> eval_zero_lattice(const LensParams& p) {
    auto g = lattice_generators(p);
    g.erase(g.begin());
    return g;
}

std::vector<StructureElement> coordinate_generators(const LensParams& p) {
    std::vector<StructureElement> out;
    for (int i = 0; i < p.c; ++i) {
        NormalCoords t = NormalCoords::zero(p);
        t.t4[i] = 1;
        out.push_back(StructureElement{p, rho_bar_formula(p, t), t});
    }
    return out;
}

std::vector<StructureElement> all_torsion(const LensParams& p) {
    const auto kernel = kernel_rho_bar(p);
    std::vector<StructureElement> out;
    const std::size_t blocks = p.c;
    const long long free_count = 1LL << (p.t4m2_modulus() == 2 ? blocks : 0);
    for (const auto& m : *kernel.t4_members) {
        for (long long mask = 0; mask < free_count; ++mask) {
            StructureElement x = StructureElement::zero(p);
            x.coords.t4 = m;
            for (std::size_t b = 0; b < blocks && p.t4m2_modulus() == 2; ++b) x.coords.t4m2[b] = (mask >> b) & 1;
            out.push_back(std::move(x));
        }
    }
    return out;
}

StructureElement random_valid_element(const LensParams& p, Rng& rng) {
    NormalCoords t = NormalCoords::zero(p);
    for (auto& v : t.t4) v = uniform(rng, 0, p.t4_modulus() - 1);
    for (auto& v : t.t4m2) v = uniform(rng, 0, p.t4m2_modulus() - 1);
    RingElement rho = rho_bar_formula(p, t);
    for (const auto& g : lattice_generators(p)) rho += g * Rational(uniform(rng, -2, 2));
    return StructureElement{p, rho, t};
}

// ---------------------------------------------------------------------------
// ring suite

std::vector<RingModulus> moduli_for(int n) {
    std::vector<RingModulus> out{RingModulus::group_ring(n), RingModulus::truncated(n)};
    const int K = bit_length_of_two(n);
    for (int l = 0; l < K; ++l) out.push_back(RingModulus::binomial_plus(n, l));
    if (n >> K > 1 && K >= 1) out.push_back(RingModulus::odd_truncated(n));
    return out;
}

Json modulus_params(const RingModulus& m) { return modulus_to_json(m); }

Witness check_ring_axioms(const RingModulus& m, Rng& rng) {
    for (int trial = 0; trial < 200; ++trial) {
        const RingElement a = random_element(m, rng), b = random_element(m, rng), c = random_element(m, rng);
        if (!((a * b) * c == a * (b * c))) return "associativity fails for a=" + str(a) + " b=" + str(b) + " c=" + str(c);
        if (!(a * (b + c) == a * b + a * c)) return "distributivity fails for a=" + str(a) + " b=" + str(b) + " c=" + str(c);
        if (!(a * b == b * a)) return "commutativity fails for a=" + str(a) + " b=" + str(b);
        if (!(a * RingElement::one(m) == a)) return "1 is not neutral for a=" + str(a);
    }
    return std::nullopt;
}

Witness check_inverse(const RingModulus& m, Rng& rng) {
    for (int trial = 0; trial < 20; ++trial) {
        const RingElement a = random_element(m, rng);
        try {
            const RingElement inv = inverse(a);
            if (!(a * inv == RingElement::one(m))) return "a * inverse(a) != 1 for a=" + str(a);
        } catch (const NotInvertible& e) {
            if (!e.witness()) return "zero divisor reported without witness for a=" + str(a);
            if (e.witness()->is_zero() || !(a * *e.witness()).is_zero())
                return "bad zero-divisor witness for a=" + str(a);
        }
    }
    return std::nullopt;
}

Witness check_involution(int n, Rng& rng) {
    for (const RingModulus& m : {RingModulus::group_ring(n), RingModulus::truncated(n)}) {
        for (int trial = 0; trial < 40; ++trial) {
            const RingElement a = random_element(m, rng), b = random_element(m, rng);
            if (!(involution(involution(a)) == a)) return "involution is not of order 2 on " + str(a);
            if (!(involution(a * b) == involution(a) * involution(b)))
                return "involution is not multiplicative on a=" + str(a) + " b=" + str(b);
            if (!(involution(a + b) == involution(a) + involution(b))) return "involution is not additive";
            const RingElement plus = eigen_project(a, Sign::Plus), minus = eigen_project(a, Sign::Minus);
            if (!(plus + minus == a)) return "eigen projections do not sum to " + str(a);
            if (!eigen_test(plus, Sign::Plus) || !eigen_test(minus, Sign::Minus))
                return "eigen projection of " + str(a) + " is not an eigenvector";
        }
    }
    return std::nullopt;
}

Witness check_crt(int n, Rng& rng) {
    const RingModulus m = RingModulus::truncated(n);
    for (int trial = 0; trial < 200; ++trial) {
        const RingElement a = random_element(m, rng), b = random_element(m, rng);
        const auto sa = crt_split(a), sb = crt_split(b), sab = crt_split(a * b), ssum = crt_split(a + b);
        if (!(crt_combine(sa, n) == a)) return "crt_combine(crt_split(a)) != a for a=" + str(a);
        for (std::size_t j = 0; j < sa.size(); ++j) {
            if (!(sab[j] == sa[j] * sb[j])) return "crt_split is not multiplicative in factor " + std::to_string(j);
            if (!(ssum[j] == sa[j] + sb[j])) return "crt_split is not additive in factor " + std::to_string(j);
        }
    }
    int dims = 0;
    for (const auto& f : crt_factors(n)) dims += f.length();
    if (dims != n - 1) return "factor dimensions sum to " + std::to_string(dims);
    return std::nullopt;
}

Witness check_eval(int n, Rng& rng) {
    for (const RingModulus& m : {RingModulus::group_ring(n), RingModulus::truncated(n)}) {
        for (int trial = 0; trial < 100; ++trial) {
            const RawPolynomial p = random_raw(rng, -3L * n, 3L * n, 6);
            if (eval_minus_one(reduce(p, m)) != p.eval(Rational(-1)))
                return "eval(reduce(p)) != p(-1) in " + m.describe();
        }
    }
    return std::nullopt;
}

std::vector<int> divisors(int n) {
    std::vector<int> out;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

Witness check_restrict(int n, Rng& rng) {
    const RingModulus m = RingModulus::truncated(n);
    for (int np : divisors(n)) {
        for (int npp : divisors(np)) {
            for (int trial = 0; trial < 5; ++trial) {
                const RingElement a = random_element(m, rng), b = random_element(m, rng);
                if (!(restrict(restrict(a, np), npp) == restrict(a, npp)))
                    return "restrict not transitive via " + std::to_string(np) + " -> " + std::to_string(npp);
                if (!(restrict(a * b, np) == restrict(a, np) * restrict(b, np)))
                    return "restrict to " + std::to_string(np) + " not multiplicative";
                if (!(restrict(a + b, np) == restrict(a, np) + restrict(b, np)))
                    return "restrict to " + std::to_string(np) + " not additive";
                if (!(restrict(involution(a), np) == involution(restrict(a, np))))
                    return "restrict to " + std::to_string(np) + " does not commute with the involution";
            }
        }
    }
    return std::nullopt;
}

Witness check_lattice(int n, Rng& rng) {
    const RingModulus m = RingModulus::truncated(n);
    for (Sign s : {Sign::Plus, Sign::Minus}) {
        for (int trial = 0; trial < 30; ++trial) {
            const RingElement y = random_element(m, rng, true);
            const RingElement x = s == Sign::Plus ? y + involution(y) : y - involution(y);
            if (!in_lattice_4R(x * Rational(4), s)) return "4x rejected for integral eigen x=" + str(x);
            const auto basis = s == Sign::Plus ? symmetric_basis(n) : antisymmetric_basis(n);
            if (basis.empty()) continue;
            const RingElement bad = x * Rational(4) + basis[uniform(rng, 0, basis.size() - 1)] * Rational(2);
            if (in_lattice_4R(bad, s)) return "non-integral a/4 accepted: " + str(bad);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// abelian checks

Witness check_snf(Rng& rng) {
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = uniform(rng, 1, 6), c = uniform(rng, 1, 6);
        IntMatrix a(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) a.at(i, j) = uniform(rng, -20, 20);
        const SmithForm s = smith_normal_form(a);
        if (!(s.u * a * s.v == s.d)) return "U*A*V != D on trial " + std::to_string(trial);
        if (abs(s.u.determinant()) != 1 || abs(s.v.determinant()) != 1) return "non-unimodular transform";
        const auto diag = s.diagonal();
        for (std::size_t i = 0; i < s.d.rows(); ++i)
            for (std::size_t j = 0; j < s.d.cols(); ++j)
                if (i != j && s.d.at(i, j) != 0) return "D is not diagonal";
        for (std::size_t i = 0; i + 1 < diag.size(); ++i)
            if (diag[i + 1] != 0 && (diag[i] == 0 || diag[i + 1] % diag[i] != 0)) return "divisibility chain broken";
        const SmithForm again = smith_normal_form(s.d);
        if (!(again.d == s.d)) return "SNF is not idempotent";
    }
    return std::nullopt;
}

std::size_t brute_closure(const CyclicOrders& ambient, const std::vector<std::vector<long long>>& gens) {
    std::set<std::vector<long long>> seen{std::vector<long long>(ambient.size(), 0)};
    std::vector<std::vector<long long>> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
        std::vector<std::vector<long long>> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                auto y = x;
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = (y[i] + g[i]) % ambient[i];
                if (seen.insert(y).second) next.push_back(std::move(y));
            }
        frontier = std::move(next);
    }
    return seen.size();
}

Witness check_subgroups(Rng& rng) {
    const long long choices[] = {2, 3, 4, 6, 8, 9, 12, 16};
    for (int trial = 0; trial < 200; ++trial) {
        CyclicOrders ambient;
        long long order = 1;
        const int dims = uniform(rng, 1, 4);
        for (int i = 0; i < dims; ++i) {
            const long long o = choices[uniform(rng, 0, 7)];
            if (order * o > (1 << 12)) break;
            ambient.push_back(o);
            order *= o;
        }
        std::vector<std::vector<long long>> gens(uniform(rng, 0, 3));
        for (auto& g : gens)
            for (long long o : ambient) g.push_back(uniform(rng, 0, o - 1));
        const FinAbPresentation h = subgroup_from_elements(ambient, gens);
        const std::size_t brute = brute_closure(ambient, gens);
        if (static_cast<long long>(brute) != h.order())
            return "subgroup order " + std::to_string(h.order()) + " != closure " + std::to_string(brute);
        if (order % h.order() != 0) return "Lagrange fails";
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// lemma suite

std::vector<int> coprimes(int n) {
    std::vector<int> out;
    for (int k = 1; k < std::max(n, 2); ++k)
        if (std::gcd(k, n) == 1) out.push_back(k);
    return out;
}

Witness check_f_k(int n) {
    const RingElement f = elem_f(n);
    for (int k : coprimes(n)) {
        const RingElement fk = elem_f_k(n, k), fp = elem_f_prime_k(n, k);
        if (!eigen_test(fk, Sign::Minus)) return "f_k not antisymmetric, k=" + std::to_string(k);
        if (!(fk == f * fp)) return "f_k != f * f'_k for k=" + std::to_string(k);
        if (!fp.is_integral()) return "f'_k not integral for k=" + std::to_string(k) + ": " + str(fp);
        if (n % 2 == 0 && !restrict(fk, 2).is_zero()) return "f_k does not restrict to 0 at N'=2, k=" + std::to_string(k);
    }
    return std::nullopt;
}

Witness check_f_inverse(int n) {
    const RingElement gf = elem_g(n) * elem_f(n);
    for (const auto& x : antisymmetric_basis(n))
        if (!(gf * x == x)) return "g*f*x != x for x=" + str(x);
    return std::nullopt;
}

Witness check_lem_2_3(int n, Json& note) {
    std::vector<std::string> converse_failures;
    for (int k : coprimes(n)) {
        const RingElement fk = elem_f_k(n, k);
        for (long t = 1; t <= 4L * n; ++t) {
            const bool member = in_lattice_4R(fk * Rational(8 * t), Sign::Minus);
            const bool divides = (4 * t) % n == 0;
            if (member && !divides) return "8*t*f_k in 4R but N does not divide 4t: k=" + std::to_string(k) + " t=" + std::to_string(t);
            if (divides && !member && converse_failures.size() < 4)
                converse_failures.push_back("k=" + std::to_string(k) + " t=" + std::to_string(t));
        }
    }
    note = {{"converse_holds", converse_failures.empty()}, {"converse_counterexamples", converse_failures}};
    return std::nullopt;
}

Witness check_divide_by_f(int n, Rng& rng) {
    const LensParams p = LensParams::make(n, 4);
    const auto gens = eval_zero_lattice(p);
    const RingElement f = elem_f(n);
    for (int trial = 0; trial < 100; ++trial) {
        RingElement u = RingElement::zero(p.ring());
        for (const auto& g : gens) u += g * Rational(uniform(rng, -3, 3));
        const RingElement a = divide_by_f(u);
        if (!(f * a == u)) return "f * divide_by_f(u) != u for u=" + str(u);
        if (!in_lattice_4R(a, Sign::Minus)) return "divide_by_f(u) not in 4R^- for u=" + str(u);
    }
    return std::nullopt;
}

RawPolynomial geometric_raw(int terms, int step) {
    RawPolynomial p;
    for (int j = 0; j < terms; ++j) p += RawPolynomial::monomial(static_cast<long>(step) * j);
    return p;
}

Witness check_decomposition(int n, Rng& rng) {
    const int K = bit_length_of_two(n), M = n >> K;
    const RingModulus two = RingModulus::truncated(1 << K), odd = RingModulus::odd_truncated(n), full = RingModulus::truncated(n);
    const RawPolynomial p1 = geometric_raw(1 << K, 1), p2 = geometric_raw(M, 1 << K);
    const RingElement p1_inv = inverse(reduce(p1, odd));
    for (int trial = 0; trial < 100; ++trial) {
        const RawPolynomial b = random_integer_raw(rng, n, 4), c = random_integer_raw(rng, n, 4);
        const RawPolynomial u = ((reduce(c - b, odd)) * p1_inv).to_raw();
        const RawPolynomial a = b + p1 * u + p1 * p2 * random_raw(rng, 0, n, 2);
        if (!reduce(a - b, two).is_zero() || !reduce(a - c, odd).is_zero()) return "constructed a violates the hypotheses";
        const RawPolynomial d = c * Rational(M) + (b - c) * p2;
        for (const auto& [e, q] : d.terms())
            if (!is_integer(q / 4)) return "d is not in 4Z[chi]";
        if (!reduce(a * Rational(M) - d, full).is_zero()) return "M*a != d modulo 1 + chi + ... + chi^(N-1)";
    }
    return std::nullopt;
}

Witness check_m_factor(int n, int k, Rng& rng) {
    const int K = bit_length_of_two(n), M = n >> K;
    const RingModulus odd = RingModulus::odd_truncated(n);
    const RingElement f = reduce(elem_f(n).to_raw(), odd), fp = reduce(elem_f_prime_k(n, k).to_raw(), odd);
    const RingElement f2 = f * f, one = RingElement::one(odd);
    for (int trial = 0; trial < 100; ++trial) {
        const int deg = uniform(rng, 0, 3);
        std::vector<long> q(deg + 1);
        for (auto& v : q) v = uniform(rng, -5, 5);
        if (q.back() == 0) q.back() = 1;
        RingElement qf = RingElement::zero(odd), power = one;
        for (long v : q) {
            qf += power * Rational(v);
            power = power * f2;
        }
        const Rational m_even = Rational(static_cast<long>(pow_ll(M, 2 + 2 * deg)));
        const Rational m_odd = Rational(static_cast<long>(pow_ll(M, 1 + 2 * deg)));
        const RingElement even = fp * (f2 - one) * qf * (m_even * 8);
        const RingElement oddcase = fp * f * qf * (m_odd * 8);
        if (!(even * Rational(1, 4)).is_integral()) return "d-even product not in 4Z for deg " + std::to_string(deg);
        if (!(oddcase * Rational(1, 4)).is_integral()) return "d-odd product not in 4Z for deg " + std::to_string(deg);
    }
    return std::nullopt;
}

Witness check_lem_2_1(const LensParams& p, Rng& rng, Json& note) {
    const auto torsion = all_torsion(p);
    std::vector<StructureElement> samples;
    for (int trial = 0; trial < 10; ++trial) samples.push_back(torsion[uniform(rng, 0, torsion.size() - 1)]);
    for (int trial = 0; trial < 10; ++trial) samples.push_back(random_valid_element(p, rng));
    std::size_t outside = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const StructureElement& x = samples[i];
        if (!element_validate(x)) return "sample generator produced an invalid tuple " + str(x);
        SuspensionResult r;
        try {
            r = suspend(x);
        } catch (const VerificationFailure&) {
            // Non-torsion tuples for M > 1 may suspend into the odd-primary sector, which is not modelled.
            if (p.M > 1 && !x.is_torsion()) {
                ++outside;
                continue;
            }
            throw;
        }
        for (const auto& y : r.candidates) {
            if (y.coords.t4m2.back() != 0) return "suspension has nonzero new t_{4e-2}: " + str(y);
            if (!(y.rho == elem_f(p.N) * x.rho)) return "suspension does not multiply rho by f";
        }
    }
    note = {{"samples", samples.size()}, {"outside_model", outside}};
    return std::nullopt;
}

Witness check_lem_2_2(const LensParams& p, Json& note) {
    const StructureElement tau = elem_tau(p);
    const SuspensionResult r = suspend(tau);
    std::vector<long long> values;
    for (const auto& y : r.candidates) {
        if (!y.rho.is_zero()) return "rho of the suspension of tau_N is " + str(y.rho);
        for (std::size_t i = 0; i + 1 < y.coords.t4.size(); ++i)
            if (y.coords.t4[i] != 0) return "old t4 coordinate nonzero";
        for (long long v : y.coords.t4m2)
            if (v != 0) return "t4m2 coordinate nonzero";
        values.push_back(y.coords.t4.back());
        if (p.M > 1 && !transfer(y, p.M).coords.is_zero()) return "transfer to M does not kill " + str(y);
    }
    note = {{"t4e_candidates", values}};
    if (values.empty()) return "empty candidate set";
    if (p.K == 1) {
        if (values != std::vector<long long>{1}) return "candidate set " + str(values) + " != {1}";
    } else {
        const long long a = 1LL << (p.K - 2);
        for (long long v : values)
            if (v != a && v != 3 * a) return "candidate " + std::to_string(v) + " outside {2^(K-2), 3*2^(K-2)}";
    }
    return std::nullopt;
}

Witness check_restriction_3_to_1(const LensParams& p) {
    if (coordinate_orders(p) != coordinate_orders(p.with_d(p.d + 1)))
        return "coordinate groups differ between d=" + std::to_string(p.d) + " and d+1";
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// kernel suite

Witness check_kernel(const LensParams& p, Json& note) {
    const auto brute = kernel_rho_bar(p);
    const auto closed = kernel_closed_form(p);
    note = {{"brute", brute.torsion.to_string()}, {"closed", closed.to_string()}};
    if (!iso_eq(brute.torsion, closed) || brute.torsion.factors() != closed.factors())
        return "brute " + brute.torsion.to_string() + " != closed " + closed.to_string();
    return std::nullopt;
}

Witness check_rank(const LensParams& p) {
    const auto s = structure_set(p, KernelMethod::Closed);
    if (s.free_rank != rank_clause(p.N, p.d))
        return "free rank " + std::to_string(s.free_rank) + " != " + std::to_string(rank_clause(p.N, p.d));
    return std::nullopt;
}

Witness check_rank_lattice(int n) {
    for (Sign s : {Sign::Plus, Sign::Minus}) {
        const int d = s == Sign::Plus ? 4 : 3;
        if (l_group_reduced_rank(n, s) != rank_clause(n, d)) return "lattice rank disagrees for d=" + std::to_string(d);
    }
    return std::nullopt;
}

NormalCoords random_coords(const LensParams& p, Rng& rng) {
    NormalCoords t = NormalCoords::zero(p);
    for (auto& v : t.t4) v = uniform(rng, 0, p.t4_modulus() - 1);
    for (auto& v : t.t4m2) v = uniform(rng, 0, p.t4m2_modulus() - 1);
    return t;
}

Witness check_formula(const LensParams& p, Rng& rng) {
    for (int trial = 0; trial < 20; ++trial) {
        const NormalCoords t = random_coords(p, rng), u = random_coords(p, rng);
        NormalCoords t2 = t;
        for (auto& v : t2.t4m2) v = uniform(rng, 0, p.t4m2_modulus() - 1);
        if (!(rho_bar_formula(p, t) == rho_bar_formula(p, t2))) return "formula depends on t4m2 at " + str(t);
        const RingElement diff = rho_bar_formula(p, coords_add(p, t, u)) - rho_bar_formula(p, t) - rho_bar_formula(p, u);
        if (!in_lattice_4R(diff, p.sign())) return "formula not additive mod 4R at t=" + str(t) + " t'=" + str(u);
        if (p.k != 1) {
            const LensParams p1 = LensParams::make(p.N, p.d, 1);
            if (!(rho_bar_formula(p, t) == elem_f_prime_k(p.N, p.k) * rho_bar_formula(p1, t)))
                return "k-twisted formula != f'_k * untwisted at t=" + str(t);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// suspension suite

// Source d = 2e+1, target d = 2e+2.
Witness check_thm1(const LensParams& src, Json& note) {
    const LensParams tgt = src.with_d(src.d + 1);
    const int n = src.N;
    std::vector<StructureElement> gens = all_torsion(src);
    const std::size_t torsion_count = gens.size();
    for (const auto& b : lattice_generators(src)) gens.push_back(StructureElement{src, b, NormalCoords::zero(src)});
    for (auto& g : coordinate_generators(src))
        if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);

    std::set<std::pair<std::vector<Rational>, NormalCoords>> images;
    for (const auto& x : gens) {
        const auto r = suspend(x);
        if (!r.determined) return "suspension from odd d is not determined for " + str(x);
        const StructureElement& y = *r.determined;
        if (!image_test_odd_target(y)) return "suspended element fails the image test: " + str(y);
        if (!images.insert({y.rho.coeffs(), y.coords}).second) return "suspension not injective, collision at " + str(y);
    }
    const StructureElement sigma = elem_sigma(tgt);
    if (image_test_odd_target(sigma) || eval_minus_one(sigma.rho) != 8) return "sigma passes the image test";

    // Preimages of the eval-zero part of the target.
    std::size_t preimages = 0;
    for (const auto& y : all_torsion(tgt)) {
        StructureElement x{src, RingElement::zero(src.ring()), y.coords};
        if (!element_validate(x) || !(suspend(x).determined == y)) return "no preimage for torsion " + str(y);
        ++preimages;
    }
    const RingElement g = elem_g(n);
    for (const auto& b : eval_zero_lattice(tgt)) {
        StructureElement x{src, divide_by_f(b), NormalCoords::zero(src)};
        if (!element_validate(x) || !(suspend(x).determined->rho == b)) return "no preimage for lattice element " + str(b);
        ++preimages;
    }
    for (auto y : coordinate_generators(tgt)) {
        y.rho -= RingElement::constant(tgt.ring(), eval_minus_one(y.rho));
        if (!element_validate(y)) return "adjusted coordinate generator invalid: " + str(y);
        StructureElement x{src, g * y.rho, y.coords};
        const std::string reason = element_check(x);
        if (!reason.empty()) return "preimage candidate invalid (" + reason + ") for " + str(y);
        if (!(*suspend(x).determined == y)) return "g*rho preimage does not suspend back to " + str(y);
        ++preimages;
    }
    note = {{"source_torsion", torsion_count}, {"generators", gens.size()}, {"preimages", preimages}};
    return std::nullopt;
}

// Source d = 2e, target d = 2e+1.
Witness check_thm2(const LensParams& src, Json& note) {
    const LensParams tgt = src.with_d(src.d + 1);
    const int e = src.e;
    const StructureElement omega = elem_omega(src);
    const auto so = suspend(omega);
    bool zero_candidate = false;
    for (const auto& y : so.candidates) {
        if (!y.rho.is_zero()) return "rho of suspended omega is nonzero";
        zero_candidate |= y.coords.is_zero();
    }
    if (!zero_candidate) return "0 is not a candidate for the suspension of omega";

    // Boundary sector: lattice elements q*P with a zero suspension are exactly multiples of omega.
    const StructureElement tau = elem_tau(src);
    const long long ratio = 1LL << std::min(src.K, 2);
    for (long long m = -2 * ratio; m <= 2 * ratio; ++m) {
        const StructureElement x = element_scale(tau, m);
        bool in_kernel = false;
        for (const auto& y : suspend(x).candidates) in_kernel |= y.rho.is_zero() && y.coords.is_zero();
        if (in_kernel != (m % ratio == 0)) return "kernel on the boundary sector disagrees at " + std::to_string(m) + "*tau_N";
    }

    // Image on torsion: suspensions of source torsion plus multiples of nu_e.
    const StructureElement nu = elem_nu(src);
    const long long nu_order = 1LL << std::min(src.K, 2 * e);
    std::set<NormalCoords> image;
    const auto source_torsion = all_torsion(src);
    for (long long j = 0; j < nu_order; ++j) {
        const StructureElement shift = element_scale(nu, j);
        for (const auto& x : source_torsion)
            for (const auto& y : suspend(element_add(x, shift)).candidates) {
                if (!y.rho.is_zero()) return "suspension of torsion plus nu_e multiple has nonzero rho";
                if (!image_test_even_target(y)) return "suspension output fails the image test";
                image.insert(y.coords);
            }
    }
    std::set<NormalCoords> expected;
    for (const auto& y : all_torsion(tgt))
        if (image_test_even_target(y)) expected.insert(y.coords);
    if (image != expected)
        return "image has " + std::to_string(image.size()) + " torsion tuples, expected " + std::to_string(expected.size());
    if (image_test_even_target(elem_mu4m2(tgt))) return "mu_{4e-2} passes the image test";
    note = {{"image_size", image.size()}};
    return std::nullopt;
}

Witness check_suspension_examples() {
    const auto r = suspend(elem_tau(LensParams::make(8, 4)));
    std::vector<long long> values;
    for (const auto& y : r.candidates) values.push_back(y.coords.t4.back());
    if (values != std::vector<long long>{2, 6}) return "tau_8 candidates " + str(values) + " != {2,6}";
    const LensParams odd = LensParams::make(8, 5);
    const auto z = suspend(StructureElement::zero(odd));
    if (!z.determined || !(*z.determined == StructureElement::zero(odd.with_d(6)))) return "suspension of 0 is not 0";
    const auto w = suspend(elem_omega(LensParams::make(6, 4)));
    if (std::none_of(w.candidates.begin(), w.candidates.end(), [](const auto& y) { return y.rho.is_zero() && y.coords.is_zero(); }))
        return "suspension of omega at N=6 has no zero candidate";
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// torsion suite

Witness check_minimal_exponent(const LensParams& p, Json& note) {
    const auto found = minimal_exponent_search(p);
    const int want = 4 - std::min(p.K, 2 * p.e);
    note = {{"l", found.l}, {"coords", coords_to_json(found.coords)}};
    if (found.l != want) return "minimal exponent " + std::to_string(found.l) + " != " + std::to_string(want);
    const StructureElement nu = elem_nu(p);
    if (!element_validate(nu)) return "nu_e is invalid";
    if (browder_livesay_composite(nu, p.e) != 1) return "composite invariant of nu_e is not 1";
    return std::nullopt;
}

Witness check_torsion_basis(const LensParams& p, Json& note) {
    const TorsionBasis b = torsion_basis(p);
    const auto want = b.expected_orders();
    const auto elems = b.elements();
    std::vector<long long> got;
    for (const auto& x : elems) got.push_back(torsion_order(x));
    note = {{"orders", got}, {"choices", b.choice_log.size()}};
    if (got != want) return "orders " + str(got) + " != " + str(want);
    const TorsionExpander ex(b);
    for (std::size_t j = 0; j < elems.size(); ++j) {
        auto unit = ex.coordinates(elems[j]);
        for (std::size_t i = 0; i < unit.size(); ++i)
            if (unit[i] != (i == j ? 1 : 0)) return "basis element " + std::to_string(j) + " does not expand to a unit vector";
    }
    for (int i = 2; i <= p.c; ++i)
        if (browder_livesay_cascade(b.mu4[i - 1], b, i) != 1) return "cascade invariant of mu_" + std::to_string(4 * i) + " != 1";
    return std::nullopt;
}

Witness check_round_trip(const LensParams& p, Json& note) {
    const TorsionBasis b = torsion_basis(p);
    const TorsionExpander ex(b);
    const auto everything = all_torsion(p);
    if (everything.size() != ex.group_order())
        return "basis spans " + std::to_string(ex.group_order()) + " elements, torsion has " + std::to_string(everything.size());
    for (const auto& x : everything) {
        const auto coeffs = ex.coordinates(x);
        if (!(ex.combine(coeffs) == x)) return "round trip fails at " + str(x);
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            if (coeffs[j] < 0 || coeffs[j] >= b.expected_orders()[j]) return "coefficient out of range at " + str(x);
    }
    note = {{"elements", everything.size()}};
    return std::nullopt;
}

// Torsion at d = 2e+1 is the suspended torsion, plus <Sigma nu_e>, plus <mu_{4e-2}>.
Witness check_splitting(const LensParams& src, Json& note) {
    const LensParams tgt = src.with_d(src.d + 1);
    const long long t_src = kernel_rho_bar(src).torsion.order(), t_tgt = kernel_rho_bar(tgt).torsion.order();
    const long long nu_order = 1LL << std::min(src.K, 2 * src.e);
    note = {{"source_order", t_src}, {"target_order", t_tgt}, {"nu_order", nu_order}};
    if (t_tgt != t_src * nu_order * 2) return "order count fails";
    const CyclicOrders ambient = coordinate_orders(tgt);

    // Some choice of suspensions must make the three summands independent.
    const TorsionBasis sb = torsion_basis(src);
    const auto src_orders = sb.expected_orders();
    const auto src_elems = sb.elements();
    std::vector<std::vector<StructureElement>> options;
    std::vector<long long> wants;
    for (std::size_t j = 0; j < src_elems.size(); ++j) {
        options.push_back(suspend(src_elems[j]).candidates);
        wants.push_back(src_orders[j]);
    }
    options.push_back(suspend(elem_nu(src)).candidates);
    wants.push_back(nu_order);
    options.push_back({elem_mu4m2(tgt)});
    wants.push_back(2);

    std::vector<std::vector<long long>> gens;
    long long explored = 0;
    std::function<bool(std::size_t, long long)> search = [&](std::size_t level, long long order) {
        if (level == options.size()) return order == t_tgt;
        for (const auto& y : options[level]) {
            if (++explored > 200000) return false;
            if (!y.is_torsion() || torsion_order(y) != wants[level]) continue;
            gens.push_back(y.coords.flatten());
            if (subgroup_from_elements(ambient, gens).order() == order * wants[level] && search(level + 1, order * wants[level]))
                return true;
            gens.pop_back();
        }
        return false;
    };
    if (!search(0, 1)) return "no choice of suspensions splits the torsion (" + std::to_string(explored) + " nodes)";
    note["nodes"] = explored;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// task assembly

struct Sweep {
    std::vector<int> n;
    std::vector<int> d;
    std::vector<int> n48;  // 2..48
    std::vector<int> n24;  // 2..24
};

Sweep make_sweep(const VerifyOptions& o) {
    Sweep s;
    auto keep_n = [&](int n) { return o.max_n <= 0 || n <= o.max_n; };
    for (int n : sweep_n())
        if (keep_n(n)) s.n.push_back(n);
    for (int d : sweep_d())
        if (o.max_d <= 0 || d <= o.max_d) s.d.push_back(d);
    for (int n = 2; n <= 48; ++n)
        if (keep_n(n)) s.n48.push_back(n);
    for (int n = 2; n <= 24; ++n)
        if (keep_n(n)) s.n24.push_back(n);
    return s;
}

bool has_d(const Sweep& s, int d) { return std::find(s.d.begin(), s.d.end(), d) != s.d.end(); }

void add(std::vector<Task>& tasks, const std::string& suite, const std::string& id, Json params,
         std::function<Witness(Rng&, Json&)> run) {
    tasks.push_back(Task{suite, id, std::move(params), std::move(run)});
}

void ring_tasks(const Sweep& s, std::vector<Task>& t) {
    for (int n : s.n48) {
        for (const auto& m : moduli_for(n))
            add(t, "ring", "ring-axioms", modulus_params(m), [m](Rng& r, Json&) { return check_ring_axioms(m, r); });
        for (const RingModulus& m : {RingModulus::group_ring(n), RingModulus::truncated(n)})
            add(t, "ring", "ring-inverse", modulus_params(m), [m](Rng& r, Json&) { return check_inverse(m, r); });
        add(t, "ring", "ring-involution", np(n), [n](Rng& r, Json&) { return check_involution(n, r); });
        add(t, "ring", "ring-restrict", np(n), [n](Rng& r, Json&) { return check_restrict(n, r); });
        add(t, "ring", "ring-lattice", np(n), [n](Rng& r, Json&) { return check_lattice(n, r); });
        if (n % 2 == 0) add(t, "ring", "ring-eval-minus-one", np(n), [n](Rng& r, Json&) { return check_eval(n, r); });
    }
    for (int n : {4, 6, 8, 12, 16, 24})
        if (std::count(s.n48.begin(), s.n48.end(), n))
            add(t, "ring", "ring-crt", np(n), [n](Rng& r, Json&) { return check_crt(n, r); });
}

void lemma_tasks(const Sweep& s, std::vector<Task>& t) {
    for (int n : s.n48) {
        add(t, "lemmas", "lemma-f_k", np(n), [n](Rng&, Json&) { return check_f_k(n); });
        add(t, "lemmas", "lemma-f-inverse", np(n), [n](Rng&, Json&) { return check_f_inverse(n); });
    }
    for (int n : s.n24) {
        add(t, "lemmas", "lemma-lem_2-3", np(n), [n](Rng&, Json& note) { return check_lem_2_3(n, note); });
        if (n % 2 == 0)
            add(t, "lemmas", "lemma-divide-by-f", np(n), [n](Rng& r, Json&) { return check_divide_by_f(n, r); });
    }
    for (int n : s.n) {
        const int K = bit_length_of_two(n);
        if (K >= 1 && (n >> K) > 1) {
            for (int k : {1, other_coprime(n)}) {
                add(t, "lemmas", "lemma-decomposition", Json{{"N", n}, {"k", k}},
                    [n](Rng& r, Json&) { return check_decomposition(n, r); });
                add(t, "lemmas", "lemma-M-factor", Json{{"N", n}, {"k", k}},
                    [n, k](Rng& r, Json&) { return check_m_factor(n, k, r); });
            }
        }
        if (n % 2 != 0) continue;
        for (int d : s.d) {
            const LensParams p = LensParams::make(n, d);
            if (d % 2 == 0 && d >= 4) {
                add(t, "lemmas", "lemma-lem_2-1", ndk(p), [p](Rng& r, Json& note) { return check_lem_2_1(p, r, note); });
                add(t, "lemmas", "lemma-lem_2-2", ndk(p), [p](Rng&, Json& note) { return check_lem_2_2(p, note); });
            }
            if (d % 2 == 1 && has_d(s, d + 1))
                add(t, "lemmas", "lemma-restriction-3-to-1", ndk(p), [p](Rng&, Json&) { return check_restriction_3_to_1(p); });
        }
    }
}

void kernel_tasks(const Sweep& s, std::vector<Task>& t) {
    for (int n : s.n)
        for (int d : s.d) {
            std::vector<int> ks{1};
            if (const int k2 = other_coprime(n); k2 != 1) ks.push_back(k2);
            for (int k : ks) {
                const LensParams p = LensParams::make(n, d, k);
                add(t, "kernel", "thm-main-kernel", ndk(p), [p](Rng&, Json& note) { return check_kernel(p, note); });
                add(t, "kernel", "thm-main-rank", ndk(p), [p](Rng&, Json&) { return check_rank(p); });
                if (p.K >= 1)
                    add(t, "kernel", "rho-formula-properties", ndk(p), [p](Rng& r, Json&) { return check_formula(p, r); });
            }
        }
    for (int n : s.n48) add(t, "kernel", "l-group-rank", np(n), [n](Rng&, Json&) { return check_rank_lattice(n); });
    add(t, "kernel", "abelian-snf", Json::object(), [](Rng& r, Json&) { return check_snf(r); });
    add(t, "kernel", "abelian-subgroup", Json::object(), [](Rng& r, Json&) { return check_subgroups(r); });
}

void suspension_tasks(const Sweep& s, std::vector<Task>& t) {
    for (int n : s.n) {
        if (n % 2 != 0) continue;
        for (int e = 1; 2 * e + 2 <= 8; ++e) {
            if (!has_d(s, 2 * e + 1) || !has_d(s, 2 * e + 2)) continue;
            const LensParams p = LensParams::make(n, 2 * e + 1);
            add(t, "suspension", "thm1", ndk(p), [p](Rng&, Json& note) { return check_thm1(p, note); });
        }
        for (int e = 2; 2 * e + 1 <= 8; ++e) {
            if (!has_d(s, 2 * e) || !has_d(s, 2 * e + 1)) continue;
            const LensParams p = LensParams::make(n, 2 * e);
            add(t, "suspension", "thm2", ndk(p), [p](Rng&, Json& note) { return check_thm2(p, note); });
        }
    }
    if ((s.n.empty() ? 0 : s.n.back()) >= 8 && has_d(s, 6))
        add(t, "suspension", "suspension-examples", Json::object(), [](Rng&, Json&) { return check_suspension_examples(); });
}

void torsion_tasks(const Sweep& s, std::vector<Task>& t) {
    for (int n : s.n) {
        if (n % 2 != 0) continue;
        for (int d : s.d) {
            const LensParams p = LensParams::make(n, d);
            if (d % 2 == 0)
                add(t, "torsion", "prop-minimal-exponent", ndk(p), [p](Rng&, Json& note) { return check_minimal_exponent(p, note); });
            add(t, "torsion", "cor-torsion-basis", ndk(p), [p](Rng&, Json& note) { return check_torsion_basis(p, note); });
            if (n <= 8 && d <= 7)
                add(t, "torsion", "torsion-round-trip", ndk(p), [p](Rng&, Json& note) { return check_round_trip(p, note); });
            if (d % 2 == 0 && d >= 4 && has_d(s, d + 1))
                add(t, "torsion", "prop-suspension-on-torsion", ndk(p), [p](Rng&, Json& note) { return check_splitting(p, note); });
        }
    }
}

std::string reproducer(const Task& task, const VerifyOptions& o) {
    std::ostringstream cmd;
    cmd << "rho-lattice verify --suite " << task.suite << " --only " << task.id << " --seed " << o.seed;
    if (task.params.contains("N")) cmd << " --max-N " << task.params["N"].get<int>();
    if (task.params.contains("d")) cmd << " --max-d " << task.params["d"].get<int>();
    return cmd.str();
}

}  // namespace

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> s{"all", "ring", "lemmas", "kernel", "suspension", "torsion"};
    return s;
}

const std::vector<int>& sweep_n() {
    static const std::vector<int> v{2, 3, 4, 5, 6, 8, 9, 12, 16, 24};
    return v;
}

const std::vector<int>& sweep_d() {
    static const std::vector<int> v{3, 4, 5, 6, 7, 8};
    return v;
}

std::size_t VerifyReport::passed() const {
    return std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::size_t VerifyReport::failed() const { return checks.size() - passed(); }

std::map<std::string, std::pair<std::size_t, std::size_t>> VerifyReport::per_statement() const {
    std::map<std::string, std::pair<std::size_t, std::size_t>> out;
    for (const auto& c : checks) (c.pass ? out[c.id].first : out[c.id].second)++;
    return out;
}

VerifyReport run_verify(const VerifyOptions& options) {
    const auto& suites = verify_suites();
    if (std::find(suites.begin(), suites.end(), options.suite) == suites.end())
        throw InvalidArgument("unknown suite '" + options.suite + "'");
    const Sweep sweep = make_sweep(options);
    std::vector<Task> tasks;
    const bool all = options.suite == "all";
    if (all || options.suite == "ring") ring_tasks(sweep, tasks);
    if (all || options.suite == "lemmas") lemma_tasks(sweep, tasks);
    if (all || options.suite == "kernel") kernel_tasks(sweep, tasks);
    if (all || options.suite == "suspension") suspension_tasks(sweep, tasks);
    if (all || options.suite == "torsion") torsion_tasks(sweep, tasks);
    if (!options.only.empty())
        std::erase_if(tasks, [&](const Task& t) { return t.id != options.only; });

    std::vector<CheckResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& task = tasks[i];
            CheckResult& r = results[i];
            r.id = task.id;
            r.params = task.params;
            Rng rng = task_rng(options.seed, task);
            try {
                Witness w = task.run(rng, r.note);
                if (w) {
                    r.pass = false;
                    r.witness = *w;
                }
            } catch (const std::exception& e) {
                r.pass = false;
                r.witness = std::string("exception: ") + e.what();
            }
            if (!r.pass) r.reproducer = reproducer(task, options);
        }
    };
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::sort(results.begin(), results.end(), [](const CheckResult& a, const CheckResult& b) {
        if (a.id != b.id) return a.id < b.id;
        return a.params.dump() < b.params.dump();
    });
    return VerifyReport{options.suite, options.seed, std::move(results)};
}

Json check_to_json(const CheckResult& c) {
    Json out = {{"id", c.id}, {"params", c.params}, {"status", c.pass ? "pass" : "fail"}};
    if (!c.pass) {
        out["witness"] = c.witness;
        out["reproducer"] = c.reproducer;
    }
    if (!c.note.is_null()) out["note"] = c.note;
    return out;
}

Json summary_to_json(const VerifyReport& r) {
    Json per = Json::object();
    for (const auto& [id, counts] : r.per_statement()) per[id] = {{"pass", counts.first}, {"fail", counts.second}};
    return {{"summary", {{"suite", r.suite}, {"seed", r.seed}, {"checks", r.checks.size()}, {"passed", r.passed()},
                         {"failed", r.failed()}, {"per_statement", per}}}};
}

void write_report(std::ostream& out, const VerifyReport& r) {
    for (const auto& c : r.checks) out << with_schema(check_to_json(c)).dump() << '\n';
    out << with_schema(summary_to_json(r)).dump() << '\n';
}

}  // namespace rholattice
