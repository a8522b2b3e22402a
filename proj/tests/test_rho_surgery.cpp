#include <doctest.h>

#include "rholattice/rho_surgery.hpp"
#include "rholattice/special_elements.hpp"
#include "test_support.hpp"

using namespace rholattice;
using testsupport::from_ints;

namespace {

using Orders = std::vector<long long>;

Orders factors(const FinAbPresentation& p) { return p.factors(); }

Orders prime_powers(const FinAbPresentation& p) { return primary_decomposition(p).prime_powers; }

StructureElement make_element(const LensParams& p, const RingElement& rho, std::vector<long long> t4,
                              std::vector<long long> t4m2) {
    return StructureElement{p, rho, NormalCoords{std::move(t4), std::move(t4m2)}};
}

}  // namespace

TEST_SUITE("rho_surgery") {

TEST_CASE("params decomposition") {
    const auto p = LensParams::make(24, 7, 5);
    CHECK(p.K == 3);
    CHECK(p.M == 3);
    CHECK(p.e == 3);
    CHECK(p.c == 3);
    CHECK(LensParams::make(8, 6).c == 2);
    CHECK_THROWS_AS((void)LensParams::make(6, 3, 3), InvalidArgument);
    CHECK_THROWS_AS((void)LensParams::make(6, 2), InvalidArgument);
    CHECK_THROWS_AS((void)LensParams::make(1, 3), InvalidArgument);
}

TEST_CASE("reduced L-group rank") {
    CHECK(l_group_reduced_rank(6, Sign::Minus) == 2);
    CHECK(l_group_reduced_rank(5, Sign::Minus) == 2);
    CHECK(l_group_reduced_rank(2, Sign::Minus) == 0);
    for (int n = 2; n <= 30; ++n) {
        CHECK(l_group_reduced_rank(n, Sign::Minus) == (n % 2 ? (n - 1) / 2 : n / 2 - 1));
        CHECK(l_group_reduced_rank(n, Sign::Plus) == (n % 2 ? (n - 1) / 2 : n / 2));
    }
}

TEST_CASE("reduced normal group") {
    auto g = reduced_normal_group(LensParams::make(4, 5));
    CHECK(factors(g.two_local) == Orders{2, 2, 4, 4});
    CHECK(g.odd_order == 1);
    g = reduced_normal_group(LensParams::make(2, 3));
    CHECK(factors(g.two_local) == Orders{2, 2});
    g = reduced_normal_group(LensParams::make(6, 4));
    CHECK(factors(g.two_local) == Orders{2, 2});
    CHECK(g.odd_order == 3);
}

TEST_CASE("lift of t4 by CRT") {
    CHECK(lift_tbar({1}, LensParams::make(4, 4)) == std::vector<Integer>{1});
    CHECK(lift_tbar({1}, LensParams::make(6, 4)) == std::vector<Integer>{3});
    CHECK(lift_tbar({0}, LensParams::make(6, 4)) == std::vector<Integer>{0});
    const auto p = LensParams::make(24, 7);
    for (long long t = 0; t < 8; ++t) {
        const auto lifted = lift_tbar({t, 0, 0}, p)[0];
        CHECK(mod_floor(lifted.get_si(), 8) == t);
        CHECK(lifted.get_si() % 27 == 0);
    }
}

TEST_CASE("rho formula examples") {
    const auto p4 = LensParams::make(4, 4);
    CHECK(rho_bar_formula(p4, NormalCoords::zero(p4)).is_zero());
    const auto r = rho_bar_formula(p4, NormalCoords{{1}, {0}});
    const auto m = RingModulus::truncated(4);
    CHECK(r == from_ints(m, {-12, 0, 4}));
    // (1-chi)^2 (r/8 + 1) = (1+chi)^2
    const auto one = RingElement::one(m), chi = RingElement::monomial(m, 1);
    CHECK((one - chi) * (one - chi) * (r * Rational(1, 8) + one) == (one + chi) * (one + chi));

    const auto p2 = LensParams::make(2, 4);
    CHECK(rho_bar_formula(p2, NormalCoords{{1}, {0}}) == RingElement::constant(RingModulus::truncated(2), -8));
    CHECK_THROWS((void)rho_bar_formula(LensParams::make(3, 4), NormalCoords::zero(LensParams::make(3, 4))));
}

TEST_CASE("rho formula is additive mod 4R and ignores t4m2") {
    for (int n : {4, 8, 12}) {
        for (int d : {4, 5, 6}) {
            const auto p = LensParams::make(n, d);
            const long long mod = p.t4_modulus();
            for (long long a = 0; a < mod; ++a)
                for (long long b = 0; b < mod; ++b) {
                    NormalCoords x = NormalCoords::zero(p), y = NormalCoords::zero(p);
                    x.t4[0] = a;
                    y.t4.back() = b;
                    y.t4m2[0] = 1;
                    const auto sum = coords_add(p, x, y);
                    const auto diff = rho_bar_formula(p, sum) - rho_bar_formula(p, x) - rho_bar_formula(p, y);
                    CHECK(rho_class_is_zero(p, diff));
                    CHECK(eigen_test(rho_bar_formula(p, y), p.sign()));
                }
        }
    }
}

TEST_CASE("rho class membership") {
    const auto p = LensParams::make(4, 4);
    const auto m = RingModulus::truncated(4);
    CHECK(rho_class_is_zero(p, from_ints(m, {-12, 0, 4})));
    CHECK_FALSE(rho_class_is_zero(LensParams::make(4, 5), elem_f(4) * Rational(2)));
    CHECK(rho_class_is_zero(p, RingElement::zero(m)));
    CHECK_THROWS((void)rho_class_is_zero(p, elem_f(4)));
}

TEST_CASE("brute-force kernel examples") {
    CHECK(factors(kernel_rho_bar(LensParams::make(2, 4)).torsion) == Orders{2, 2});
    CHECK(factors(kernel_rho_bar(LensParams::make(8, 4)).torsion) == Orders{2, 4});
    const auto k8 = kernel_rho_bar(LensParams::make(8, 4));
    REQUIRE(k8.t4_members.has_value());
    CHECK(*k8.t4_members == std::vector<std::vector<long long>>{{0}, {2}, {4}, {6}});
    CHECK(factors(kernel_rho_bar(LensParams::make(4, 5)).torsion) == Orders{2, 2, 4, 4});
}

TEST_CASE("closed-form kernel") {
    CHECK(factors(kernel_closed_form(LensParams::make(4, 5))) == Orders{2, 2, 4, 4});
    CHECK(kernel_closed_form(LensParams::make(3, 5)).is_trivial());
    CHECK(prime_powers(kernel_closed_form(LensParams::make(16, 7))) == Orders{2, 2, 2, 4, 16, 16});
}

TEST_CASE("brute force matches the closed form on the main sweep") {
    for (int n : {2, 3, 4, 5, 6, 8, 9, 12, 16, 24}) {
        for (int d = 3; d <= 8; ++d) {
            for (int k : {1, other_coprime(n)}) {
                const auto p = LensParams::make(n, d, k);
                CAPTURE(p.to_string());
                CHECK(iso_eq(kernel_rho_bar(p).torsion, kernel_closed_form(p)));
            }
        }
    }
}

TEST_CASE("work cap") {
    KernelOptions opts;
    opts.cap = 4;
    CHECK_THROWS_AS((void)kernel_rho_bar(LensParams::make(8, 5), opts), WorkCapExceeded);
    const auto s = structure_set(LensParams::make(8, 5), KernelMethod::Auto, opts);
    CHECK(s.fallback);
    CHECK(iso_eq(s.torsion, kernel_closed_form(LensParams::make(8, 5))));
}

TEST_CASE("structure set examples") {
    auto s = structure_set(LensParams::make(3, 3));
    CHECK(s.free_rank == 1);
    CHECK(s.torsion.is_trivial());
    s = structure_set(LensParams::make(6, 3));
    CHECK(s.free_rank == 2);
    CHECK(factors(s.torsion) == Orders{2, 2});
    s = structure_set(LensParams::make(2, 3));
    CHECK(s.free_rank == 0);
    CHECK(factors(s.torsion) == Orders{2, 2});
}

TEST_CASE("complex projective formula") {
    CHECK(rho_cp_formula({0}, 4, 4).is_zero());
    const auto f = elem_f(4);
    const auto one = RingElement::one(f.modulus());
    CHECK(rho_cp_formula({1}, 4, 4) == (f * f - one) * Rational(8));
    CHECK(rho_cp_formula({1}, 4, 4) == rho_bar_formula(LensParams::make(4, 4), NormalCoords{{1}, {0}}));
    CHECK(rho_cp_formula({1, 0}, 6, 4) == (f.pow(4) - f.pow(2)) * Rational(8));
}

TEST_CASE("element validation") {
    const auto p6 = LensParams::make(6, 4);
    CHECK(element_validate(make_element(p6, RingElement::constant(p6.ring(), 8), {0}, {0})));
    const auto p4 = LensParams::make(4, 4);
    CHECK_FALSE(element_validate(make_element(p4, elem_f(4) * Rational(2), {0}, {0})));
    const auto p45 = LensParams::make(4, 5);
    CHECK_FALSE(element_validate(make_element(p45, elem_f(4) * Rational(2), {0, 0}, {0, 0})));
    CHECK_FALSE(element_validate(make_element(p4, RingElement::zero(p4.ring()), {7}, {0})));
}

TEST_CASE("element group law") {
    const auto p = LensParams::make(8, 4);
    const auto x = make_element(p, rho_bar_formula(p, NormalCoords{{3}, {1}}), {3}, {1});
    REQUIRE(element_validate(x));
    const auto y = element_add(x, element_scale(x, -1));
    CHECK(y == StructureElement::zero(p));
    CHECK(element_validate(element_add(x, x)));
    CHECK_THROWS((void)element_add(x, StructureElement::zero(LensParams::make(8, 5))));
}

TEST_CASE("transfer") {
    const auto p8 = LensParams::make(8, 4);
    CHECK(transfer(NormalCoords{{3}, {1}}, p8, 4) == NormalCoords{{3 % 4}, {1}});
    const auto p4 = LensParams::make(4, 5);
    const auto x = make_element(p4, elem_f(4) * Rational(8), {0, 0}, {0, 0});
    CHECK(transfer(x, 2).rho.is_zero());
    CHECK_THROWS_AS((void)transfer(x, 3), InvalidArgument);

    // restrict(formula at N=8) agrees with the formula at N=4 on the transferred coordinates
    const auto t = NormalCoords{{1}, {0}};
    const auto lhs = restrict(rho_bar_formula(p8, t), 4);
    const auto rhs = rho_bar_formula(LensParams::make(4, 4), transfer(t, p8, 4));
    CHECK(rho_class_is_zero(LensParams::make(4, 4), lhs - rhs));
}

}
