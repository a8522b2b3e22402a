#include <doctest.h>

#include <sstream>

#include "rholattice/verify.hpp"

using namespace rholattice;

TEST_SUITE("verify") {

TEST_CASE("kernel suite up to N=8 passes with enough checks") {
    VerifyOptions o;
    o.suite = "kernel";
    o.max_n = 8;
    const auto r = run_verify(o);
    CHECK(r.failed() == 0);
    CHECK(r.checks.size() >= 20);
}

TEST_CASE("reports are deterministic for a fixed seed") {
    VerifyOptions o;
    o.suite = "lemmas";
    o.seed = 7;
    o.max_n = 12;
    std::ostringstream a, b;
    write_report(a, run_verify(o));
    o.workers = 2;
    write_report(b, run_verify(o));
    CHECK(a.str() == b.str());
}

TEST_CASE("single-statement runs") {
    VerifyOptions o;
    o.suite = "torsion";
    o.only = "prop-minimal-exponent";
    const auto r = run_verify(o);
    REQUIRE_FALSE(r.checks.empty());
    for (const auto& c : r.checks) CHECK(c.id == "prop-minimal-exponent");
    CHECK(r.failed() == 0);
}

TEST_CASE("unknown suite is rejected") {
    VerifyOptions o;
    o.suite = "nope";
    CHECK_THROWS_AS((void)run_verify(o), InvalidArgument);
}

}
