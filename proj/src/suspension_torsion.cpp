#include "rholattice/suspension_torsion.hpp"

#include <algorithm>
#include <set>

#include "rholattice/special_elements.hpp"

namespace rholattice {

namespace {

void require_even_d(const LensParams& p, const char* what) {
    if (p.d % 2 != 0 || p.d < 4) throw InvalidArgument(std::string(what) + " lives over d = 2e with e >= 2");
}

void require_k_positive(const LensParams& p, const char* what) {
    if (p.K < 1) throw InvalidArgument(std::string(what) + " needs an even N");
}

StructureElement checked(StructureElement x, const char* what) {
    const std::string reason = element_check(x);
    if (!reason.empty()) throw VerificationFailure(std::string(what) + " is not a valid tuple: " + reason);
    return x;
}

// Completions of the new t_{4e} coordinate satisfying the consistency congruence.
std::vector<long long> congruence_candidates(const LensParams& target, const RingElement& rho, const NormalCoords& base) {
    std::vector<long long> out;
    NormalCoords t = base;
    for (long long v = 0; v < target.t4_modulus(); ++v) {
        t.t4.back() = v;
        if (element_validate(StructureElement{target, rho, t})) out.push_back(v);
    }
    return out;
}

// m with x = m * tau_N (coords zero), if any.
std::optional<long long> tau_multiple(const StructureElement& x) {
    const LensParams& p = x.params;
    if (p.K < 1 || p.d % 2 != 0 || !x.coords.is_zero()) return std::nullopt;
    const RingElement tau = elem_tau(p).rho;
    const Rational m = x.rho.coeff(0) / tau.coeff(0);
    if (!is_integer(m) || !(tau * m == x.rho)) return std::nullopt;
    return m.get_num().get_si();
}

}  // namespace

RingElement even_sum_rho(const LensParams& p) { return elem_even_sum(p.N); }

StructureElement elem_sigma(const LensParams& p) {
    require_even_d(p, "sigma");
    require_k_positive(p, "sigma");
    return checked(StructureElement{p, RingElement::constant(p.ring(), 8), NormalCoords::zero(p)}, "sigma");
}

StructureElement elem_omega(const LensParams& p) {
    require_even_d(p, "omega");
    require_k_positive(p, "omega");
    return checked(StructureElement{p, even_sum_rho(p) * Rational(16), NormalCoords::zero(p)}, "omega");
}

StructureElement elem_tau(const LensParams& p) {
    require_even_d(p, "tau_N");
    require_k_positive(p, "tau_N");
    const long scale = 1L << std::max(4 - p.K, 2);
    return checked(StructureElement{p, even_sum_rho(p) * Rational(scale), NormalCoords::zero(p)}, "tau_N");
}

StructureElement elem_mu4m2_block(const LensParams& p, int i) {
    require_k_positive(p, "mu_{4i-2}");
    if (i < 1 || i > p.c) throw InvalidArgument("mu_{4i-2} block index out of range");
    StructureElement x = StructureElement::zero(p);
    x.coords.t4m2[i - 1] = 1;
    return checked(std::move(x), "mu_{4i-2}");
}

StructureElement elem_mu4m2(const LensParams& p) {
    if (p.d % 2 != 1) throw InvalidArgument("mu_{4e-2} lives over d = 2e+1");
    return elem_mu4m2_block(p, p.e);
}

std::vector<long long> tau_candidate_set(const LensParams& p) {
    const StructureElement tau = elem_tau(p);
    const LensParams q = p.with_d(p.d + 1);
    NormalCoords base = tau.coords;
    base.t4.push_back(0);
    base.t4m2.push_back(0);
    const RingElement rho = elem_f(p.N) * tau.rho;
    // ker(Sigma) = Z(omega) and omega = 2^{min(K,2)} tau pin the order of the new coordinate.
    const long long want = 1LL << std::min(p.K, 2);
    std::vector<long long> out;
    for (long long v : congruence_candidates(q, rho, base))
        if (element_order(CyclicOrders{q.t4_modulus()}, {v}) == want) out.push_back(v);
    return out;
}

SuspensionResult suspend(const StructureElement& x) {
    const std::string reason = element_check(x);
    if (!reason.empty()) throw PreconditionFailed("suspend: " + reason);
    const LensParams& p = x.params;
    const LensParams q = p.with_d(p.d + 1);
    const RingElement rho = elem_f(p.N) * x.rho;
    SuspensionResult out;
    if (p.d % 2 == 1) {
        StructureElement y = checked(StructureElement{q, rho, x.coords}, "suspension");
        out.candidates.push_back(y);
        out.determined = std::move(y);
        return out;
    }
    NormalCoords base = x.coords;
    base.t4.push_back(0);
    base.t4m2.push_back(0);
    std::vector<long long> values = congruence_candidates(q, rho, base);
    if (auto m = tau_multiple(x)) {
        std::set<long long> allowed;
        for (long long s : tau_candidate_set(p)) allowed.insert(mod_floor(*m * s, q.t4_modulus()));
        std::erase_if(values, [&](long long v) { return !allowed.count(v); });
    }
    if (values.empty()) {
        std::string msg = "suspend: no consistent completion of t_4e for " + p.to_string();
        if (p.M > 1) msg += " (the suspension needs the odd-primary normal invariants, which the model omits)";
        throw VerificationFailure(msg);
    }
    for (long long v : values) {
        NormalCoords t = base;
        t.t4.back() = v;
        out.candidates.push_back(StructureElement{q, rho, t});
    }
    if (out.candidates.size() == 1) out.determined = out.candidates.front();
    return out;
}

StructureElement suspend_canonical(const StructureElement& x, std::vector<ChoiceRecord>* log, const std::string& context) {
    SuspensionResult r = suspend(x);
    if (r.determined) return *r.determined;
    if (log) {
        ChoiceRecord rec;
        rec.context = context;
        rec.from_d = x.params.d;
        for (const auto& c : r.candidates) rec.candidates.push_back(c.coords.t4.back());
        rec.chosen = rec.candidates.front();
        log->push_back(std::move(rec));
    }
    return r.candidates.front();
}

bool image_test_odd_target(const StructureElement& y) {
    if (y.params.N % 2 != 0) throw NOdd();
    if (y.params.d % 2 != 0) throw InvalidArgument("image_test_odd_target expects d = 2e+2");
    return eval_minus_one(y.rho) == 0;
}

bool image_test_even_target(const StructureElement& y) {
    if (y.params.d % 2 != 1 || y.params.e < 2) throw InvalidArgument("image_test_even_target expects d = 2e+1 with e >= 2");
    return y.coords.t4m2.at(y.params.e - 1) == 0;
}

namespace {

std::optional<NormalCoords> smallest_consistent_coords(const LensParams& p, const RingElement& rho) {
    const long long base = p.t4_modulus();
    unsigned long long total = 1;
    for (int i = 0; i < p.c; ++i) total *= static_cast<unsigned long long>(base);
    NormalCoords t = NormalCoords::zero(p);
    for (unsigned long long idx = 0; idx < total; ++idx) {
        unsigned long long rest = idx;
        for (int i = p.c - 1; i >= 0; --i) {
            t.t4[i] = static_cast<long long>(rest % base);
            rest /= base;
        }
        if (element_validate(StructureElement{p, rho, t})) return t;
    }
    return std::nullopt;
}

}  // namespace

MinimalExponent minimal_exponent_search(const LensParams& p) {
    require_even_d(p, "minimal_exponent");
    require_k_positive(p, "minimal_exponent");
    const RingElement sum = even_sum_rho(p);
    std::optional<MinimalExponent> best;
    // Realizable exponents are closed upwards; the value at chi = -1 bounds l below by 4 - K.
    for (int l = 4; l >= 3 - p.K; --l) {
        const Rational scale = l >= 0 ? Rational(1L << l) : Rational(1, 1L << -l);
        auto t = smallest_consistent_coords(p, sum * scale);
        if (!t) break;
        best = MinimalExponent{l, *t};
    }
    if (!best) throw VerificationFailure("minimal_exponent: 16(1 + chi^2 + ...) admits no consistent coordinates");
    return *best;
}

int minimal_exponent(const LensParams& p) { return minimal_exponent_search(p).l; }

StructureElement elem_nu(const LensParams& p) {
    require_even_d(p, "nu_e");
    require_k_positive(p, "nu_e");
    const int l = 4 - std::min(p.K, 2 * p.e);
    const Rational scale = l >= 0 ? Rational(1L << l) : Rational(1, 1L << -l);
    const RingElement rho = even_sum_rho(p) * scale;
    auto t = smallest_consistent_coords(p, rho);
    if (!t) throw VerificationFailure("nu_e: no consistent coordinates for " + p.to_string());
    return StructureElement{p, rho, *t};
}

long long torsion_order(const StructureElement& x) {
    if (!x.is_torsion()) throw InvalidArgument("torsion_order: rho is nonzero");
    return element_order(coordinate_orders(x.params), x.coords.flatten());
}

std::vector<long long> TorsionBasis::expected_orders() const {
    std::vector<long long> out;
    for (int i = 1; i <= params.c; ++i) out.push_back(1LL << std::min(params.K, 2 * i));
    out.insert(out.end(), params.c, 2);
    return out;
}

std::vector<StructureElement> TorsionBasis::elements() const {
    std::vector<StructureElement> out = mu4;
    out.insert(out.end(), mu4m2.begin(), mu4m2.end());
    return out;
}

namespace {

struct Chain {
    StructureElement element;
    std::vector<ChoiceRecord> records;
};

// Every way of suspending x up to degree d, with ambiguous steps in increasing candidate order.
void suspension_chains(const StructureElement& x, int d, const std::string& label, std::vector<ChoiceRecord>& trail,
                       std::vector<Chain>& out) {
    if (x.params.d == d) {
        out.push_back(Chain{x, trail});
        return;
    }
    const SuspensionResult r = suspend(x);
    if (r.determined) {
        suspension_chains(*r.determined, d, label, trail, out);
        return;
    }
    ChoiceRecord rec;
    rec.context = label + " at d=" + std::to_string(x.params.d + 1);
    rec.from_d = x.params.d;
    for (const auto& c : r.candidates) rec.candidates.push_back(c.coords.t4.back());
    for (const auto& c : r.candidates) {
        rec.chosen = c.coords.t4.back();
        trail.push_back(rec);
        suspension_chains(c, d, label, trail, out);
        trail.pop_back();
    }
}

}  // namespace

TorsionBasis torsion_basis(const LensParams& p) {
    require_k_positive(p, "torsion_basis");
    TorsionBasis basis{p, std::vector<StructureElement>(p.c, StructureElement::zero(p)), {}, {}};
    for (int i = 1; i <= p.c; ++i) basis.mu4m2.push_back(elem_mu4m2_block(p, i));
    const auto expected = basis.expected_orders();
    const CyclicOrders orders = coordinate_orders(p);

    std::vector<std::vector<long long>> gens;
    long long span_order = 1;
    for (const auto& m : basis.mu4m2) gens.push_back(m.coords.flatten());
    for (int i = 1; i <= p.c; ++i) span_order *= expected[p.c + i - 1];

    // Seeds: nu_i over d = 2i, and for the first block a maximal-order kernel member over d = 3.
    auto seed = [&](int i) {
        if (i >= 2) return elem_nu(p.with_d(2 * i));
        const LensParams low = p.with_d(3);
        const auto kernel = kernel_rho_bar(low);
        long long best = 0, best_order = 0;
        for (const auto& m : *kernel.t4_members) {
            const long long o = element_order(CyclicOrders{low.t4_modulus()}, m);
            if (o > best_order) {
                best_order = o;
                best = m.front();
            }
        }
        StructureElement x = StructureElement::zero(low);
        x.coords.t4[0] = best;
        return checked(std::move(x), "mu_4");
    };

    // Higher blocks first; each suspension choice is the first that keeps the family independent.
    for (int i = p.c; i >= 1; --i) {
        const std::string label = "mu_" + std::to_string(4 * i);
        std::vector<Chain> chains;
        std::vector<ChoiceRecord> trail;
        suspension_chains(seed(i), p.d, label, trail, chains);
        const long long want = expected[i - 1];
        bool found = false;
        for (auto& ch : chains) {
            if (!ch.element.is_torsion() || torsion_order(ch.element) != want) continue;
            auto trial = gens;
            trial.push_back(ch.element.coords.flatten());
            if (subgroup_from_elements(orders, trial).order() != span_order * want) continue;
            gens = std::move(trial);
            span_order *= want;
            basis.mu4[i - 1] = ch.element;
            basis.choice_log.insert(basis.choice_log.end(), ch.records.begin(), ch.records.end());
            found = true;
            break;
        }
        if (!found)
            throw VerificationFailure("torsion_basis: no suspension of the " + label + " seed has order " +
                                      std::to_string(want) + " independent of the higher blocks");
    }

    const FinAbPresentation span = subgroup_from_elements(orders, gens);
    const FinAbPresentation target = kernel_closed_form(p);
    if (!iso_eq(span, target) || span.order() != target.order())
        throw VerificationFailure("torsion_basis: span " + span.to_string() + " is not the torsion subgroup " +
                                  target.to_string());
    for (const auto& x : basis.elements())
        if (!element_validate(x)) throw VerificationFailure("torsion_basis: produced an invalid tuple");
    return basis;
}

namespace {

std::string encode(const std::vector<long long>& v) {
    std::string s;
    for (long long x : v) {
        s += std::to_string(x);
        s += ',';
    }
    return s;
}

}  // namespace

TorsionExpander::TorsionExpander(const TorsionBasis& basis) : basis_(basis), orders_(basis.expected_orders()) {
    const auto elems = basis_.elements();
    const LensParams& p = basis_.params;
    std::vector<long long> coeffs(orders_.size(), 0);
    for (;;) {
        NormalCoords t = NormalCoords::zero(p);
        for (std::size_t j = 0; j < elems.size(); ++j)
            if (coeffs[j] != 0) t = coords_add(p, t, coords_scale(p, elems[j].coords, coeffs[j]));
        if (!table_.emplace(encode(t.flatten()), coeffs).second)
            throw VerificationFailure("torsion basis is not independent");
        std::size_t pos = coeffs.size();
        while (pos > 0) {
            --pos;
            if (++coeffs[pos] < orders_[pos]) break;
            coeffs[pos] = 0;
            if (pos == 0) return;
        }
        if (coeffs.empty()) return;
    }
}

std::vector<long long> TorsionExpander::coordinates(const StructureElement& x) const {
    if (!(x.params == basis_.params)) throw InvalidArgument("torsion_coordinates: parameter mismatch");
    if (!x.is_torsion()) throw InvalidArgument("torsion_coordinates: rho is nonzero");
    if (!element_validate(x)) throw InvalidArgument("torsion_coordinates: invalid element");
    auto it = table_.find(encode(x.coords.flatten()));
    if (it == table_.end()) throw VerificationFailure("torsion_coordinates: element outside the span of the basis");
    return it->second;
}

StructureElement TorsionExpander::combine(const std::vector<long long>& coeffs) const {
    const auto elems = basis_.elements();
    if (coeffs.size() != elems.size()) throw InvalidArgument("expected one coefficient per basis element");
    StructureElement out = StructureElement::zero(basis_.params);
    for (std::size_t j = 0; j < elems.size(); ++j) out = element_add(out, element_scale(elems[j], coeffs[j]));
    return out;
}

std::vector<StructureElement> TorsionExpander::all_elements() const {
    std::vector<std::vector<long long>> coeffs;
    for (const auto& [key, c] : table_) coeffs.push_back(c);
    std::sort(coeffs.begin(), coeffs.end());
    std::vector<StructureElement> out;
    for (const auto& c : coeffs) out.push_back(combine(c));
    return out;
}

std::vector<long long> torsion_coordinates(const StructureElement& x, const TorsionBasis& basis) {
    return TorsionExpander(basis).coordinates(x);
}

Rational browder_livesay_composite(const StructureElement& y, int i) {
    const LensParams& p = y.params;
    if (p.N % 2 != 0) throw NOdd();
    if (i < 1) throw InvalidArgument("block index must be positive");
    const int shift = 3 + std::max(0, p.K - 2 * i);
    return eval_minus_one(y.rho) / (Rational(p.M) * Rational(1L << shift));
}

Rational browder_livesay_cascade(const StructureElement& x, const TorsionBasis& basis, int i) {
    const LensParams& p = x.params;
    if (i < 2 || i > p.c) throw InvalidArgument("the cascade reads blocks 2..c");
    const auto coeffs = torsion_coordinates(x, basis);
    for (int j = i + 1; j <= p.c; ++j)
        if (coeffs[j - 1] != 0 || coeffs[p.c + j - 1] != 0)
            throw PreconditionFailed("browder_livesay_cascade: a block above " + std::to_string(i) + " is nonzero");
    // x restricts to r * nu_i on L^{4i-1}, up to torsion, which the composite ignores.
    const StructureElement y = element_scale(elem_nu(p.with_d(2 * i)), coeffs[i - 1]);
    const Rational value = browder_livesay_composite(y, i);
    const long long modulus = 1LL << std::min(p.K, 2 * i);
    if (!is_integer(value)) throw VerificationFailure("browder_livesay_cascade: non-integral composite");
    return Rational(static_cast<long>(mod_floor(value.get_num().get_si(), modulus)));
}

}  // namespace rholattice
