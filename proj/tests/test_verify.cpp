#include <doctest.h>

#include <set>

#include "qwdirac/verify.hpp"

using namespace qwd;

TEST_CASE("suite names round-trip") {
    for (const Suite s : {Suite::calculus, Suite::trig, Suite::solver, Suite::spectral, Suite::all}) {
        CHECK(parse_suite(to_string(s)) == s);
    }
    CHECK_FALSE(parse_suite("bogus").has_value());
}

TEST_CASE("every property passes on the default seed") {
    const VerifyReport r = run_verify(Suite::all);
    CHECK(r.seed == kDefaultSeed);
    REQUIRE_FALSE(r.properties.empty());
    std::set<std::string> suites;
    for (const PropertyResult& p : r.properties) {
        CAPTURE(p.property);
        CAPTURE(p.worst_defect);
        CHECK(p.passed);
        CHECK(p.cases > 0);
        CHECK(p.worst_defect <= p.threshold);
        suites.insert(p.suite);
    }
    CHECK(suites.size() == 4);
    CHECK(r.all_passed());
}

TEST_CASE("properties hold for another seed") {
    const VerifyReport r = run_verify(Suite::all, 7);
    for (const PropertyResult& p : r.properties) {
        CAPTURE(p.property);
        CAPTURE(p.worst_defect);
        CHECK(p.passed);
    }
}

TEST_CASE("a single suite runs only its own properties") {
    const VerifyReport r = run_verify(Suite::trig);
    REQUIRE_FALSE(r.properties.empty());
    for (const PropertyResult& p : r.properties) CHECK(p.suite == "trig");
}

TEST_CASE("reports are reproducible for a fixed seed") {
    const VerifyReport a = run_verify(Suite::solver, 99);
    const VerifyReport b = run_verify(Suite::solver, 99);
    REQUIRE(a.properties.size() == b.properties.size());
    for (std::size_t i = 0; i < a.properties.size(); ++i) {
        CHECK(a.properties[i].worst_defect == b.properties[i].worst_defect);
        CHECK(a.properties[i].cases == b.properties[i].cases);
    }
}
