#include "rholattice/rho_surgery.hpp"

#include <algorithm>
#include <thread>

#include "rational_matrix.hpp"
#include "rholattice/special_elements.hpp"

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

void require_formula(const LensParams& p) {
    if (p.K < 1) throw PreconditionFailed("the 2-local rho formula needs K >= 1");
}

}  // namespace

LensParams LensParams::make(int n, int d, int k) {
    if (n < 2) throw InvalidArgument("N must be at least 2");
    if (d < 3) throw InvalidArgument("d must be at least 3");
    LensParams p;
    p.N = n;
    p.K = two_adic_valuation(n);
    p.M = n >> p.K;
    p.d = d;
    p.e = d / 2;
    p.c = (d - 1) / 2;
    p.k = normalize_k(n, k);
    return p;
}

std::string LensParams::to_string() const {
    return "N=" + std::to_string(N) + " d=" + std::to_string(d) + " k=" + std::to_string(k);
}

NormalCoords NormalCoords::zero(const LensParams& p) {
    return NormalCoords{std::vector<long long>(p.c, 0), std::vector<long long>(p.c, 0)};
}

std::vector<long long> NormalCoords::flatten() const {
    std::vector<long long> out = t4;
    out.insert(out.end(), t4m2.begin(), t4m2.end());
    return out;
}

NormalCoords NormalCoords::unflatten(const LensParams& p, const std::vector<long long>& flat) {
    if (flat.size() != static_cast<std::size_t>(2 * p.c)) throw InvalidArgument("flat coordinate vector has the wrong length");
    return NormalCoords{std::vector<long long>(flat.begin(), flat.begin() + p.c),
                        std::vector<long long>(flat.begin() + p.c, flat.end())};
}

bool NormalCoords::is_zero() const {
    return std::all_of(t4.begin(), t4.end(), [](long long v) { return v == 0; }) &&
           std::all_of(t4m2.begin(), t4m2.end(), [](long long v) { return v == 0; });
}

void validate_coords(const LensParams& p, const NormalCoords& t) {
    if (t.t4.size() != static_cast<std::size_t>(p.c) || t.t4m2.size() != static_cast<std::size_t>(p.c))
        throw InvalidArgument("expected " + std::to_string(p.c) + " coordinates of each kind for " + p.to_string());
    for (long long v : t.t4)
        if (v < 0 || v >= p.t4_modulus()) throw InvalidArgument("t_4i coordinate out of range");
    for (long long v : t.t4m2)
        if (v < 0 || v >= p.t4m2_modulus()) throw InvalidArgument("t_4i-2 coordinate out of range");
}

CyclicOrders coordinate_orders(const LensParams& p) {
    CyclicOrders out(p.c, p.t4_modulus());
    out.insert(out.end(), p.c, p.t4m2_modulus());
    return out;
}

NormalCoords coords_scale(const LensParams& p, const NormalCoords& a, long long m) {
    NormalCoords out = a;
    for (auto& v : out.t4) v = mod_floor(v * m, p.t4_modulus());
    for (auto& v : out.t4m2) v = mod_floor(v * m, p.t4m2_modulus());
    return out;
}

NormalCoords coords_add(const LensParams& p, const NormalCoords& a, const NormalCoords& b) {
    NormalCoords out = a;
    for (std::size_t i = 0; i < out.t4.size(); ++i) out.t4[i] = mod_floor(out.t4[i] + b.t4.at(i), p.t4_modulus());
    for (std::size_t i = 0; i < out.t4m2.size(); ++i)
        out.t4m2[i] = mod_floor(out.t4m2[i] + b.t4m2.at(i), p.t4m2_modulus());
    return out;
}

StructureElement StructureElement::zero(const LensParams& p) {
    return StructureElement{p, RingElement::zero(p.ring()), NormalCoords::zero(p)};
}

std::string method_name(KernelMethod m) {
    switch (m) {
        case KernelMethod::Brute: return "brute";
        case KernelMethod::Closed: return "closed";
        case KernelMethod::Auto: return "auto";
    }
    return "unknown";
}

KernelMethod method_from_name(const std::string& name) {
    if (name == "brute") return KernelMethod::Brute;
    if (name == "closed") return KernelMethod::Closed;
    if (name == "auto") return KernelMethod::Auto;
    throw InvalidArgument("unknown kernel method '" + name + "'");
}

int l_group_reduced_rank(int n, Sign parity) {
    if (n < 2) throw InvalidArgument("N must be at least 2");
    const RingModulus m = RingModulus::truncated(n);
    detail::RationalMatrix rows;
    for (int i = 0; i < m.length(); ++i) rows.push_back(eigen_project(RingElement::monomial(m, i), parity).coeffs());
    const int r = detail::rank(rows);
    const int expected = n % 2 == 1 ? (n - 1) / 2 : (parity == Sign::Plus ? n / 2 : n / 2 - 1);
    if (r != expected)
        throw VerificationFailure("eigenlattice rank " + std::to_string(r) + " disagrees with " + std::to_string(expected));
    return r;
}

int rank_clause(int n, int d) {
    if (n % 2 == 1) return (n - 1) / 2;
    return d % 2 == 1 ? n / 2 - 1 : n / 2;
}

ReducedNormalGroup reduced_normal_group(const LensParams& p) {
    return ReducedNormalGroup{FinAbPresentation::from_cyclic_orders(coordinate_orders(p)), p.odd_order()};
}

std::vector<Integer> lift_tbar(const std::vector<long long>& t4, const LensParams& p) {
    const Integer two_k = Integer(1) << p.K;
    Integer odd = 1;
    for (int i = 0; i < p.c; ++i) odd *= p.M;
    Integer odd_inverse;
    mpz_invert(odd_inverse.get_mpz_t(), Integer(odd % two_k).get_mpz_t(), two_k.get_mpz_t());
    if (p.K == 0) odd_inverse = 0;
    std::vector<Integer> out;
    for (long long t : t4) {
        Integer r = (Integer(static_cast<long>(t)) * odd_inverse) % two_k;
        if (r < 0) r += two_k;
        out.push_back(odd * r);
    }
    return out;
}

std::vector<RingElement> rho_bar_basis(const LensParams& p) {
    require_formula(p);
    const auto cat = shared_catalog(p.N, p.k);
    const RingElement& f = cat->f;
    const RingElement one = RingElement::one(p.ring());
    const RingElement f_sq_minus_one = f * f - one;
    std::vector<RingElement> out;
    for (int i = 1; i <= p.c; ++i) {
        if (p.d % 2 == 1 && i == p.e)
            out.push_back(cat->f_prime_k * f * Rational(8));
        else
            out.push_back(cat->f_prime_k * f.pow(p.d - 2 * i - 2) * f_sq_minus_one * Rational(8));
    }
    return out;
}

RingElement rho_bar_formula_lifted(const LensParams& p, const std::vector<Integer>& tbar) {
    const auto basis = rho_bar_basis(p);
    if (tbar.size() != basis.size()) throw InvalidArgument("expected one lift per t_4i coordinate");
    RingElement out = RingElement::zero(p.ring());
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (tbar[i] != 0) out += basis[i] * Rational(tbar[i]);
    return out;
}

RingElement rho_bar_formula(const LensParams& p, const NormalCoords& t) {
    validate_coords(p, t);
    return rho_bar_formula_lifted(p, lift_tbar(t.t4, p));
}

bool rho_class_is_zero(const LensParams& p, const RingElement& x) {
    if (!eigen_test(x, p.sign())) throw InvalidArgument("rho_class_is_zero: element is outside the (-1)^d eigenspace");
    return in_lattice_4R(x, p.sign());
}

bool in_boundary_lattice(const LensParams& p, const RingElement& x) {
    if (!in_lattice_4R(x, p.sign())) return false;
    if (p.d % 2 == 0 && p.N % 2 == 0) {
        const Rational v = eval_minus_one(x) / 8;
        if (!is_integer(v)) return false;
    }
    return true;
}

namespace {

// Index of the t4 block in mixed radix, t4[0] most significant.
std::vector<long long> digits_of(unsigned long long index, int count, long long base) {
    std::vector<long long> out(count, 0);
    for (int i = count - 1; i >= 0; --i) {
        out[i] = static_cast<long long>(index % base);
        index /= base;
    }
    return out;
}

// Greedy generating subset of the subgroup spanned by `members` in prod Z_base.
std::vector<std::vector<long long>> greedy_generators(const std::vector<std::vector<long long>>& members, int count,
                                                      long long base) {
    unsigned long long size = 1;
    for (int i = 0; i < count; ++i) size *= static_cast<unsigned long long>(base);
    std::vector<bool> seen(size, false);
    std::vector<std::vector<long long>> closure{std::vector<long long>(count, 0)};
    seen[0] = true;
    auto encode = [&](const std::vector<long long>& v) {
        unsigned long long idx = 0;
        for (long long x : v) idx = idx * base + static_cast<unsigned long long>(x);
        return idx;
    };
    std::vector<std::vector<long long>> gens;
    for (const auto& m : members) {
        if (seen[encode(m)]) continue;
        gens.push_back(m);
        for (std::size_t i = 0; i < closure.size(); ++i) {
            std::vector<long long> y = closure[i];
            for (int j = 0; j < count; ++j) y[j] = (y[j] + m[j]) % base;
            const auto idx = encode(y);
            if (!seen[idx]) {
                seen[idx] = true;
                closure.push_back(std::move(y));
            }
        }
    }
    return gens;
}

}  // namespace

StructureSetDescriptor kernel_rho_bar(const LensParams& p, const KernelOptions& options) {
    StructureSetDescriptor out;
    out.params = p;
    out.free_rank = l_group_reduced_rank(p.N, p.sign());
    out.method = KernelMethod::Brute;
    if (p.K == 0) {
        // Coordinates are all trivial; the odd sector contributes nothing.
        out.t4_members = std::vector<std::vector<long long>>{std::vector<long long>(p.c, 0)};
        return out;
    }
    const long long base = p.t4_modulus();
    unsigned long long total = 1;
    for (int i = 0; i < p.c; ++i) {
        total *= static_cast<unsigned long long>(base);
        if (total > options.cap) throw WorkCapExceeded(total, options.cap);
    }

    std::vector<std::vector<Rational>> quarter;
    for (const RingElement& b : rho_bar_basis(p)) quarter.push_back((b * Rational(1, 4)).coeffs());
    std::vector<Rational> lift_of_digit;
    for (long long v = 0; v < base; ++v) lift_of_digit.emplace_back(lift_tbar({v}, p).front());
    const std::size_t len = p.ring().length();

    auto is_member = [&](const std::vector<long long>& t) {
        for (std::size_t j = 0; j < len; ++j) {
            Rational acc = 0;
            for (int i = 0; i < p.c; ++i)
                if (t[i] != 0) acc += lift_of_digit[t[i]] * quarter[i][j];
            if (!is_integer(acc)) return false;
        }
        return true;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(total)));
    std::vector<std::vector<unsigned long long>> found(workers);
    auto scan = [&](unsigned w) {
        const unsigned long long lo = total * w / workers;
        const unsigned long long hi = total * (w + 1) / workers;
        for (unsigned long long idx = lo; idx < hi; ++idx)
            if (is_member(digits_of(idx, p.c, base))) found[w].push_back(idx);
    };
    if (workers == 1) {
        scan(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
        for (auto& t : pool) t.join();
    }

    std::vector<std::vector<long long>> members;
    for (const auto& chunk : found)
        for (unsigned long long idx : chunk) members.push_back(digits_of(idx, p.c, base));

    const auto gens = greedy_generators(members, p.c, base);
    const FinAbPresentation t4_part = subgroup_from_elements(CyclicOrders(p.c, base), gens);
    std::vector<long long> orders = t4_part.factors();
    orders.insert(orders.end(), p.c, p.t4m2_modulus());
    out.torsion = FinAbPresentation::from_cyclic_orders(orders);
    out.t4_members = std::move(members);
    return out;
}

FinAbPresentation kernel_closed_form(const LensParams& p) {
    std::vector<long long> orders;
    for (int i = 1; i <= p.c; ++i) {
        orders.push_back(1LL << std::min(p.K, 1));
        orders.push_back(1LL << std::min(p.K, 2 * i));
    }
    return FinAbPresentation::from_cyclic_orders(orders);
}

StructureSetDescriptor structure_set(const LensParams& p, KernelMethod method, const KernelOptions& options) {
    const int expected_rank = rank_clause(p.N, p.d);
    auto closed = [&](bool fallback) {
        StructureSetDescriptor out;
        out.params = p;
        out.free_rank = l_group_reduced_rank(p.N, p.sign());
        out.torsion = kernel_closed_form(p);
        out.method = KernelMethod::Closed;
        out.fallback = fallback;
        return out;
    };
    StructureSetDescriptor out;
    if (method == KernelMethod::Closed) {
        out = closed(false);
    } else {
        try {
            out = kernel_rho_bar(p, options);
        } catch (const WorkCapExceeded&) {
            if (method != KernelMethod::Auto) throw;
            out = closed(true);
        }
    }
    if (out.free_rank != expected_rank)
        throw VerificationFailure("free rank " + std::to_string(out.free_rank) + " disagrees with the rank clause " +
                                  std::to_string(expected_rank));
    return out;
}

RingElement rho_cp_formula(const std::vector<Integer>& s4, int d, int n) {
    if (static_cast<int>(s4.size()) != d / 2 - 1) throw InvalidArgument("expected floor(d/2) - 1 coefficients");
    const RingModulus m = RingModulus::truncated(n);
    const RingElement f = elem_f(n);
    RingElement out = RingElement::zero(m);
    for (int i = 1; i <= static_cast<int>(s4.size()); ++i) {
        if (s4[i - 1] == 0) continue;
        out += (f.pow(d - 2 * i) - f.pow(d - 2 * i - 2)) * Rational(8 * s4[i - 1]);
    }
    return out;
}

std::string element_check(const StructureElement& x) {
    const LensParams& p = x.params;
    if (!(x.rho.modulus() == p.ring())) return "rho is not an element of the truncated ring for N";
    try {
        validate_coords(p, x.coords);
    } catch (const Error& err) {
        return err.what();
    }
    if (!eigen_test(x.rho, p.sign())) return "rho is outside the (-1)^d eigenspace";
    const RingElement formula = p.K >= 1 ? rho_bar_formula(p, x.coords) : RingElement::zero(p.ring());
    if (!in_boundary_lattice(p, x.rho - formula)) return "rho - formula(coords) is not in the boundary lattice";
    return {};
}

bool element_validate(const StructureElement& x) { return element_check(x).empty(); }

StructureElement element_add(const StructureElement& x, const StructureElement& y) {
    if (!(x.params == y.params)) throw InvalidArgument("element_add: parameter mismatch");
    return StructureElement{x.params, x.rho + y.rho, coords_add(x.params, x.coords, y.coords)};
}

StructureElement element_scale(const StructureElement& x, long long m) {
    return StructureElement{x.params, x.rho * Rational(static_cast<long>(m)), coords_scale(x.params, x.coords, m)};
}

NormalCoords transfer(const NormalCoords& t, const LensParams& from, int n_prime) {
    validate_coords(from, t);
    if (n_prime < 2 || from.N % n_prime != 0)
        throw InvalidArgument("transfer: " + std::to_string(n_prime) + " is not a divisor >= 2 of " + std::to_string(from.N));
    const LensParams to = LensParams::make(n_prime, from.d, from.k);
    NormalCoords out = t;
    for (auto& v : out.t4) v = mod_floor(v, to.t4_modulus());
    for (auto& v : out.t4m2) v = mod_floor(v, to.t4m2_modulus());
    return out;
}

StructureElement transfer(const StructureElement& x, int n_prime) {
    NormalCoords coords = transfer(x.coords, x.params, n_prime);
    const LensParams to = LensParams::make(n_prime, x.params.d, x.params.k);
    return StructureElement{to, restrict(x.rho, n_prime), std::move(coords)};
}

}  // namespace rholattice
