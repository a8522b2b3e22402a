#include <doctest.h>

#include <set>

#include "rholattice/special_elements.hpp"
#include "rholattice/suspension_torsion.hpp"

using namespace rholattice;

namespace {

std::vector<long long> new_t4(const SuspensionResult& r) {
    std::vector<long long> out;
    for (const auto& c : r.candidates) out.push_back(c.coords.t4.back());
    return out;
}

RingElement even_sum(int n) {
    const auto m = RingModulus::truncated(n);
    RingElement s = RingElement::zero(m);
    for (int j = 0; j < n; j += 2) s += RingElement::monomial(m, j);
    return s;
}

}  // namespace

TEST_SUITE("suspension_torsion") {

TEST_CASE("suspending zero from odd d is determined and zero") {
    const auto p = LensParams::make(8, 5);
    const auto r = suspend(StructureElement::zero(p));
    REQUIRE(r.determined.has_value());
    CHECK(*r.determined == StructureElement::zero(p.with_d(6)));
}

TEST_CASE("suspension multiplies rho by f") {
    const auto p = LensParams::make(4, 5);
    StructureElement x{p, elem_f(4) * Rational(8), NormalCoords::zero(p)};
    REQUIRE(element_validate(x));
    const auto r = suspend(x);
    REQUIRE(r.determined.has_value());
    CHECK(r.determined->rho == elem_f(4) * elem_f(4) * Rational(8));
    CHECK(image_test_odd_target(*r.determined));
}

TEST_CASE("suspending omega gives zero rho with a zero completion") {
    for (int n : {2, 4, 6, 8}) {
        const auto p = LensParams::make(n, 4);
        const auto w = elem_omega(p);
        CHECK(w.rho == even_sum(n) * Rational(16));
        const auto r = suspend(w);
        bool has_zero = false;
        for (const auto& c : r.candidates) {
            CHECK(c.rho.is_zero());
            has_zero = has_zero || c.coords.is_zero();
        }
        CHECK(has_zero);
    }
}

TEST_CASE("tau at N=8 suspends to t4 in {2, 6}") {
    const auto p = LensParams::make(8, 4);
    const auto r = suspend(elem_tau(p));
    CHECK(new_t4(r) == std::vector<long long>{2, 6});
    CHECK(tau_candidate_set(p) == std::vector<long long>{2, 6});
    for (const auto& c : r.candidates) {
        CHECK(c.rho.is_zero());
        CHECK(c.coords.t4m2.back() == 0);
    }
}

TEST_CASE("tau candidate sets follow K") {
    CHECK(tau_candidate_set(LensParams::make(2, 4)) == std::vector<long long>{1});
    CHECK(tau_candidate_set(LensParams::make(4, 4)) == std::vector<long long>{1, 3});
    CHECK(tau_candidate_set(LensParams::make(16, 4)) == std::vector<long long>{4, 12});
}

TEST_CASE("sigma") {
    const auto s = elem_sigma(LensParams::make(4, 4));
    CHECK(element_validate(s));
    CHECK(eval_minus_one(s.rho) == 8);
    CHECK_FALSE(image_test_odd_target(s));
    CHECK(image_test_odd_target(StructureElement::zero(LensParams::make(4, 4))));
    CHECK(browder_livesay_composite(s, 2) == 1);
}

TEST_CASE("mu_{4e-2} is not in the image") {
    const auto p = LensParams::make(8, 5);
    const auto mu = elem_mu4m2(p);
    CHECK(mu.rho.is_zero());
    CHECK(mu.coords.t4m2.back() == 1);
    CHECK_FALSE(image_test_even_target(mu));
    CHECK(image_test_even_target(StructureElement::zero(p)));
}

TEST_CASE("nu at N=8, d=4") {
    const auto nu = elem_nu(LensParams::make(8, 4));
    CHECK(nu.rho == even_sum(8) * Rational(2));
    CHECK(element_validate(nu));
    CHECK(eval_minus_one(nu.rho) == 8);
    CHECK(browder_livesay_composite(nu, 2) == 1);
    CHECK(browder_livesay_composite(StructureElement::zero(LensParams::make(8, 4)), 2) == 0);
}

TEST_CASE("minimal exponent is 4 - min(K, 2e)") {
    for (int n : {2, 4, 8, 16})
        for (int e : {2, 3}) {
            const auto p = LensParams::make(n, 2 * e);
            CHECK(minimal_exponent(p) == 4 - std::min(p.K, 2 * e));
        }
}

TEST_CASE("torsion basis order profiles") {
    CHECK(torsion_basis(LensParams::make(2, 6)).expected_orders() == std::vector<long long>{2, 2, 2, 2});
    CHECK(torsion_basis(LensParams::make(8, 5)).expected_orders() == std::vector<long long>{4, 8, 2, 2});
    CHECK(torsion_basis(LensParams::make(4, 5)).expected_orders() == std::vector<long long>{4, 4, 2, 2});
    for (int n : {2, 4, 6, 8, 12, 16})
        for (int d = 3; d <= 7; ++d) {
            const auto b = torsion_basis(LensParams::make(n, d));
            const auto elems = b.elements();
            const auto orders = b.expected_orders();
            for (std::size_t i = 0; i < elems.size(); ++i) {
                CHECK(elems[i].rho.is_zero());
                CHECK(element_validate(elems[i]));
                CHECK(torsion_order(elems[i]) == orders[i]);
            }
        }
}

TEST_CASE("torsion coordinates round trip on every torsion element") {
    for (int n : {2, 4, 6, 8})
        for (int d = 3; d <= 7; ++d) {
            const auto p = LensParams::make(n, d);
            const TorsionExpander ex(torsion_basis(p));
            long long expected = 1;
            for (long long o : torsion_basis(p).expected_orders()) expected *= o;
            CHECK(static_cast<long long>(ex.group_order()) == expected);
            CHECK(expected == kernel_closed_form(p).order());
            std::set<std::vector<long long>> seen;
            for (const auto& x : ex.all_elements()) {
                const auto c = ex.coordinates(x);
                CHECK(ex.combine(c) == x);
                CHECK(seen.insert(x.coords.flatten()).second);
            }
        }
}

TEST_CASE("expansion of 2 mu_8 + mu_2 at N=8, d=5") {
    const auto p = LensParams::make(8, 5);
    const auto b = torsion_basis(p);
    const auto e = b.elements();
    CHECK(torsion_coordinates(e[1], b) == std::vector<long long>{0, 1, 0, 0});
    CHECK(torsion_coordinates(StructureElement::zero(p), b) == std::vector<long long>{0, 0, 0, 0});
    const auto x = element_add(element_scale(e[1], 2), e[2]);
    CHECK(torsion_coordinates(x, b) == std::vector<long long>{0, 2, 1, 0});
}

TEST_CASE("suspension preserves validity on random torsion") {
    for (int n : {4, 8}) {
        const auto p = LensParams::make(n, 4);
        const TorsionExpander ex(torsion_basis(p));
        for (const auto& x : ex.all_elements()) {
            const auto r = suspend(x);
            REQUIRE_FALSE(r.candidates.empty());
            for (const auto& c : r.candidates) {
                CHECK(element_validate(c));
                CHECK(image_test_even_target(c));
            }
        }
    }
}

TEST_CASE("suspension outside the modeled range is refused") {
    CHECK_THROWS((void)elem_sigma(LensParams::make(3, 4)));
    CHECK_THROWS((void)elem_nu(LensParams::make(8, 5)));
}

}
