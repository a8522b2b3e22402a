#include <doctest.h>

#include "rholattice/expression.hpp"
#include "rholattice/json_io.hpp"
#include "rholattice/special_elements.hpp"
#include "rholattice/suspension_torsion.hpp"

using namespace rholattice;

TEST_SUITE("expression_json") {

TEST_CASE("parser basics") {
    const auto m = RingModulus::truncated(4);
    CHECK(parse_expression("f", m) == elem_f(4));
    CHECK(parse_expression("(1-x)^-1", m).coeffs() ==
          std::vector<Rational>{Rational(3, 4), Rational(1, 2), Rational(1, 4)});
    CHECK(parse_expression("1+x+x^2+x^3", m).is_zero());
    CHECK(parse_expression("x^-1", m) == RingElement::monomial(m, -1));
    CHECK(parse_expression("2(1+x)x", m) == parse_expression("2*x + 2*x^2", m));
    CHECK(parse_expression("f_k(3)", m) == elem_f_k(4, 3));
    CHECK(parse_expression("g*f*(x - x^3)", m) == parse_expression("x-x^3", m));
}

TEST_CASE("parse errors report positions") {
    const auto m = RingModulus::truncated(4);
    try {
        (void)parse_expression("(1+x", m);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS((void)parse_expression("1 + y", m), ParseError);
    CHECK_THROWS_AS((void)parse_expression("1/(1+x)", RingModulus::group_ring(4)), NotInvertible);
}

TEST_CASE("ring elements round trip through JSON") {
    const auto a = elem_g(12);
    CHECK(ring_element_from_json(ring_element_to_json(a)) == a);
    const auto b = elem_h_l(8, 2);
    CHECK(ring_element_from_json(ring_element_to_json(b)) == b);
    CHECK(rational_from_json(rational_to_json(Rational(-7, 3))) == Rational(-7, 3));
}

TEST_CASE("structure elements round trip through JSON") {
    const auto p = LensParams::make(8, 5, 3);
    for (const auto& x : torsion_basis(p).elements()) CHECK(element_from_json(element_to_json(x)) == x);
    const auto nu = elem_nu(LensParams::make(8, 4));
    CHECK(element_from_json(element_to_json(nu)) == nu);
    CHECK(params_from_json(params_to_json(p)) == p);
}

TEST_CASE("invalid element JSON is rejected") {
    auto j = element_to_json(StructureElement::zero(LensParams::make(8, 4)));
    j["coords"]["t4"] = Json::array({1});
    CHECK_THROWS_AS((void)element_from_json(j), InvalidArgument);
    CHECK_THROWS_AS((void)element_from_json(Json::object()), InvalidArgument);
}

TEST_CASE("descriptor JSON shape") {
    const auto j = with_schema(descriptor_to_json(structure_set(LensParams::make(4, 5))));
    CHECK(j["schema"] == "rho-lattice/1");
    CHECK(j["free_rank"] == 1);
    CHECK(j["torsion"]["factors"] == Json::array({2, 2, 4, 4}));
    CHECK(j["method"] == "brute");
}

}
