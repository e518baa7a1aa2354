#include <doctest.h>

#include "dftsafe/errors.hpp"
#include "dftsafe/measures.hpp"
#include "dftsafe/rewriter.hpp"
#include "dftsafe/state_space.hpp"
#include "dftsafe/text_format.hpp"
#include "../support/fixtures.hpp"
#include "../support/random_dft.hpp"

using namespace dftsafe;
using namespace dftsafe::tests;

namespace {

double mttfOf(Dft const& dft) {
    Ctmc ctmc = buildCtmc(dft);
    return MeasureEngine(ctmc).mttf(ctmc.initial).value;
}

double unreliabilityOf(Dft const& dft, double t) {
    Ctmc ctmc = buildCtmc(dft);
    MeasureParams params;
    params.time = t;
    return MeasureEngine(ctmc).compute("unreliability", params, ctmc.initial).value;
}

}  // namespace

TEST_CASE("nested static gates flatten") {
    Dft dft = parseDft(
        "toplevel T; T or G1 G2; G1 or A B; G2 or B C;"
        "A lambda=1; B lambda=1; C lambda=1;");
    Dft simplified = rewrite(dft);
    // One OR over {A, B, C}: the nested ORs and the duplicate B disappear.
    CHECK(simplified.size() == 4);
    Gate const& top = simplified.gate(simplified.top());
    CHECK(top.kind == GateKind::Or);
    CHECK(top.children.size() == 3);
}

TEST_CASE("single-child gates collapse") {
    Dft dft = parseDft("toplevel T; T and G; G or A; A lambda=1;");
    Dft simplified = rewrite(dft);
    // Both wrappers disappear; the basic event becomes the top element.
    CHECK(simplified.size() == 1);
    CHECK(simplified.isBasicEvent(simplified.top()));
    CHECK(simplified.name(simplified.top()) == "A");
}

TEST_CASE("degenerate vote thresholds normalize") {
    Dft oneOf = rewrite(parseDft("toplevel T; T 1of3 A B C; A lambda=1; B lambda=1; C lambda=1;"));
    CHECK(oneOf.gate(oneOf.top()).kind == GateKind::Or);

    Dft allOf = rewrite(parseDft("toplevel T; T 3of3 A B C; A lambda=1; B lambda=1; C lambda=1;"));
    CHECK(allOf.gate(allOf.top()).kind == GateKind::And);
}

TEST_CASE("redundant dependencies are removed") {
    // A's failure reaches the top through a pure OR path, so triggering B is moot.
    Dft dft = parseDft(
        "toplevel T; T or A B; A lambda=1; B lambda=1;"
        "D fdep A B;");
    Dft simplified = rewrite(dft);
    for (ElementIndex i = 0; i < simplified.size(); ++i) {
        CHECK_FALSE(simplified.isDependency(i));
    }
}

TEST_CASE("unreachable elements are dropped, labeled ones kept") {
    Dft dft = parseDft(
        "toplevel T; T or A; A lambda=1; B lambda=1; C lambda=1;"
        "label degraded when failed(B);");
    Dft simplified = rewrite(dft);
    CHECK_NOTHROW(simplified.require("B"));                       // label keeps B alive
    CHECK_THROWS_AS(simplified.require("C"), UnknownElementError);  // C is dead
    REQUIRE(simplified.labels().size() == 1);
}

TEST_CASE("dynamic gates are left untouched") {
    Dft dft = fixturePand();
    Dft simplified = rewrite(dft);
    CHECK(serializeDft(simplified) == serializeDft(dft));
}

TEST_CASE("rewrite is idempotent") {
    for (unsigned seed = 0; seed < 50; ++seed) {
        Dft dft = randomDft(seed, {.addDegradedLabel = seed % 3 == 0});
        Dft once = rewrite(dft);
        Dft twice = rewrite(once);
        CHECK(serializeDft(twice) == serializeDft(once));
        CHECK(once.validate().empty());
    }
}

TEST_CASE("rewriting preserves the measures") {
    for (unsigned seed = 60; seed < 90; ++seed) {
        Dft dft = randomDft(seed);
        Dft simplified = rewrite(dft);
        double t = 500.0;
        CHECK(unreliabilityOf(simplified, t) == doctest::Approx(unreliabilityOf(dft, t)).epsilon(1e-9));
        Ctmc ctmc = buildCtmc(dft);
        MeasureEngine engine(ctmc);
        try {
            double before = engine.mttf(ctmc.initial).value;
            CHECK(mttfOf(simplified) == doctest::Approx(before).epsilon(1e-9));
        } catch (UndefinedMeasureError const&) {
            CHECK_THROWS_AS(mttfOf(simplified), UndefinedMeasureError);
        }
    }
}
