// Acceptance runner: prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "rholattice/special_elements.hpp"
#include "rholattice/suspension_torsion.hpp"
#include "rholattice/verify.hpp"

using namespace rholattice;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

const std::vector<int> sweep_n{2, 3, 4, 5, 6, 8, 9, 12, 16, 24};

int gcd_int(int a, int b) { return b == 0 ? a : gcd_int(b, a % b); }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Summands written out directly from K and c.
FinAbPresentation expected_kernel(int n, int d) {
    int K = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++K;
    }
    const int c = (d - 1) / 2;
    std::vector<long long> orders;
    for (int i = 1; i <= c; ++i) {
        orders.push_back(1LL << std::min(K, 1));
        orders.push_back(1LL << std::min(K, 2 * i));
    }
    return FinAbPresentation::from_cyclic_orders(orders);
}

int expected_rank(int n, int d) {
    if (n % 2 == 1) return (n - 1) / 2;
    return d % 2 == 1 ? n / 2 - 1 : n / 2;
}

Outcome criterion_kernel() {
    Outcome o;
    const auto start = Clock::now();
    int cases = 0;
    for (int n : sweep_n)
        for (int d = 3; d <= 8; ++d)
            for (int k : {1, other_coprime(n)}) {
                const auto p = LensParams::make(n, d, k);
                const auto brute = kernel_rho_bar(p);
                ++cases;
                if (!(brute.torsion.factors() == expected_kernel(n, d).factors()))
                    o.fail(p.to_string() + ": brute " + brute.torsion.to_string() + " vs " +
                           expected_kernel(n, d).to_string());
            }
    const double t = seconds_since(start);
    if (t >= 120) o.fail("took " + std::to_string(t) + " s");
    if (o.pass) o.detail = std::to_string(cases) + " cases, " + std::to_string(t) + " s";
    return o;
}

Outcome criterion_rank() {
    Outcome o;
    int cases = 0;
    for (int n : sweep_n)
        for (int d = 3; d <= 8; ++d)
            for (int k : {1, other_coprime(n)}) {
                const auto s = structure_set(LensParams::make(n, d, k));
                ++cases;
                if (s.free_rank != expected_rank(n, d))
                    o.fail("N=" + std::to_string(n) + " d=" + std::to_string(d) + ": rank " +
                           std::to_string(s.free_rank));
            }
    if (o.pass) o.detail = std::to_string(cases) + " cases";
    return o;
}

Outcome criterion_identities() {
    Outcome o;
    const auto start = Clock::now();
    for (int n = 2; n <= 48; ++n) {
        const auto m = RingModulus::truncated(n);
        const auto f = elem_f(n);
        for (int k = 1; k < std::max(n, 2); ++k) {
            if (gcd_int(n, k) != 1 || (k % 2 == 0 && n % 2 == 0)) continue;
            const auto fp = elem_f_prime_k(n, k);
            if (!fp.is_integral()) o.fail("f'_k not integral at N=" + std::to_string(n));
            if (!(f * fp == elem_f_k(n, k))) o.fail("f_k != f f'_k at N=" + std::to_string(n));
        }
        const auto gf = elem_g(n) * f;
        for (int r = 1; 2 * r < n; ++r) {
            const auto x = RingElement::monomial(m, r) - RingElement::monomial(m, -r);
            if (!(gf * x == x)) o.fail("g f x != x at N=" + std::to_string(n));
        }
    }
    const double t = seconds_since(start);
    if (t >= 30) o.fail("took " + std::to_string(t) + " s");
    if (o.pass) o.detail = std::to_string(t) + " s";
    return o;
}

Outcome criterion_lem_2_3() {
    Outcome o;
    int members = 0;
    for (int n = 2; n <= 24; ++n)
        for (int k = 1; k < std::max(n, 2); ++k) {
            if (gcd_int(n, k) != 1) continue;
            const auto fk = elem_f_k(n, k);
            for (int t = 1; t <= 4 * n; ++t) {
                if (!in_lattice_4R(fk * Rational(8 * t), Sign::Minus)) continue;
                ++members;
                if ((4 * t) % n != 0)
                    o.fail("N=" + std::to_string(n) + " k=" + std::to_string(k) + " t=" + std::to_string(t));
            }
        }
    if (o.pass) o.detail = std::to_string(members) + " memberships, all with N | 4t";
    return o;
}

Outcome from_verify(const std::string& suite, const std::string& only, int max_n, std::size_t min_checks) {
    Outcome o;
    VerifyOptions v;
    v.suite = suite;
    v.only = only;
    v.max_n = max_n;
    const auto r = run_verify(v);
    for (const auto& c : r.checks)
        if (!c.pass) o.fail(c.id + " " + c.params.dump() + ": " + c.witness);
    if (r.checks.size() < min_checks) o.fail(only + ": only " + std::to_string(r.checks.size()) + " checks");
    if (o.pass) o.detail = only + " " + std::to_string(r.checks.size()) + " checks";
    return o;
}

Outcome criterion_lemmas_odd_factor() {
    // N in {6, 12, 24} with two values of k each, 100 instances per check.
    Outcome a = from_verify("lemmas", "lemma-decomposition", 24, 6);
    Outcome b = from_verify("lemmas", "lemma-M-factor", 24, 6);
    if (!b.pass) a.fail(b.detail);
    if (a.pass) a.detail += "; " + b.detail;
    return a;
}

Outcome criterion_suspension() {
    Outcome o;
    const auto start = Clock::now();
    // omega and tau live on L^{4e-1}; e = 1 would be d = 2, below the model's range.
    for (int n : {2, 4, 6, 8})
        for (int e : {2, 3}) {
            const auto p = LensParams::make(n, 2 * e);
            const auto r = suspend(elem_omega(p));
            bool zero = false;
            for (const auto& c : r.candidates) zero = zero || (c.rho.is_zero() && c.coords.is_zero());
            if (!zero) o.fail("Sigma(omega) has no zero completion at " + p.to_string());

            std::vector<long long> got;
            for (const auto& c : suspend(elem_tau(p)).candidates) got.push_back(c.coords.t4.back());
            const long long q = p.K >= 2 ? 1LL << (p.K - 2) : 0;
            const std::vector<long long> want = p.K == 1 ? std::vector<long long>{1} : std::vector<long long>{q, 3 * q};
            if (got != want) o.fail("tau candidates at " + p.to_string());
        }
    for (const char* id : {"thm1", "thm2", "suspension-examples"}) {
        const Outcome part = from_verify("suspension", id, 8, 1);
        if (!part.pass) o.fail(part.detail);
    }
    const double t = seconds_since(start);
    if (t >= 60) o.fail("took " + std::to_string(t) + " s");
    if (o.pass) o.detail = std::to_string(t) + " s";
    return o;
}

Outcome criterion_torsion() {
    Outcome o;
    for (int n : {2, 4, 8, 16})
        for (int e : {2, 3}) {
            const auto p = LensParams::make(n, 2 * e);
            if (minimal_exponent(p) != 4 - std::min(p.K, 2 * e)) o.fail("minimal exponent at " + p.to_string());
        }
    std::size_t elements = 0;
    for (int n = 2; n <= 8; ++n)
        for (int d = 3; d <= 7; ++d) {
            const auto p = LensParams::make(n, d);
            if (p.K == 0) continue;
            const auto basis = torsion_basis(p);
            const TorsionExpander ex(basis);
            if (static_cast<long long>(ex.group_order()) != expected_kernel(n, d).order())
                o.fail("basis does not span the torsion at " + p.to_string());
            for (const auto& x : ex.all_elements()) {
                ++elements;
                if (!(ex.combine(torsion_coordinates(x, basis)) == x)) o.fail("round trip at " + p.to_string());
            }
        }
    if (o.pass) o.detail = std::to_string(elements) + " torsion elements";
    return o;
}

Outcome criterion_divide_by_f() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int n = 2; n <= 24; n += 2) {
        const auto m = RingModulus::truncated(n);
        const auto f = elem_f(n);
        for (int trial = 0; trial < 100; ++trial) {
            // u = 4(s - s(-1)) for a random symmetric integral s.
            RingElement sym = RingElement::constant(m, coef(rng));
            for (int j = 1; 2 * j <= n; ++j) {
                const auto b = 2 * j == n ? RingElement::monomial(m, j)
                                          : RingElement::monomial(m, j) + RingElement::monomial(m, -j);
                sym += b * Rational(coef(rng));
            }
            const RingElement u = (sym - RingElement::constant(m, eval_minus_one(sym))) * Rational(4);
            if (!in_lattice_4R(u, Sign::Plus) || eval_minus_one(u) != 0) {
                o.fail("generator produced an invalid input at N=" + std::to_string(n));
                continue;
            }
            const auto a = divide_by_f(u);
            if (!(f * a == u)) o.fail("f * a != u at N=" + std::to_string(n));
            if (!in_lattice_4R(a, Sign::Minus)) o.fail("a not in 4R^- at N=" + std::to_string(n));
        }
    }
    if (o.pass) o.detail = "1200 inputs";
    return o;
}

Outcome criterion_verify_all(const std::string& cli) {
    Outcome o;
    if (cli.empty()) {
        o.fail("no CLI path given (--cli)");
        return o;
    }
    const auto start = Clock::now();
    const std::string cmd = "\"" + cli + "\" verify --suite all 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        o.fail("cannot start " + cli);
        return o;
    }
    std::string last;
    std::array<char, 1 << 16> buf{};
    std::string line;
    std::size_t checks = 0;
    while (fgets(buf.data(), buf.size(), pipe)) {
        line += buf.data();
        if (!line.empty() && line.back() == '\n') {
            ++checks;
            last = line;
            line.clear();
        }
    }
    const int status = pclose(pipe);
    const double t = seconds_since(start);
    if (status != 0) o.fail("exit status " + std::to_string(status));
    if (t >= 600) o.fail("took " + std::to_string(t) + " s");
    if (last.find("\"failed\":0") == std::string::npos) o.fail("summary line reports failures");
    if (o.pass) o.detail = std::to_string(checks - 1) + " checks, 0 failed, " + std::to_string(t) + " s";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"kernel equals the closed form on the sweep", criterion_kernel},
        {"free rank clauses", criterion_rank},
        {"f_k / f'_k / g identities for N <= 48", criterion_identities},
        {"8 t f_k in 4R forces N | 4t", criterion_lem_2_3},
        {"odd-factor lemmas on random instances", criterion_lemmas_odd_factor},
        {"suspension image and kernel characterizations", criterion_suspension},
        {"minimal exponents and torsion round trip", criterion_torsion},
        {"divide_by_f round trip", criterion_divide_by_f},
        {"verify --suite all", [&] { return criterion_verify_all(cli); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failures;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " - " << criteria[i].first;
        if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
        std::cout << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
