#include <doctest.h>

#include <algorithm>
#include <vector>

#include "dftsafe/errors.hpp"
#include "dftsafe/marking.hpp"
#include "dftsafe/text_format.hpp"
#include "../support/fixtures.hpp"

using namespace dftsafe;
using namespace dftsafe::tests;

namespace {

std::vector<ElementIndex> ids(Dft const& dft, std::vector<std::string> const& names) {
    std::vector<ElementIndex> result;
    for (auto const& name : names) {
        result.push_back(dft.require(name));
    }
    return result;
}

}  // namespace

TEST_CASE("well-formed fixtures validate cleanly") {
    for (Dft const& dft : {fixtureOr(), fixtureAnd(), fixturePand(), fixtureColdSpare(), fixtureWarmSpare(),
                           fixtureVot(), fixtureTransient(), fixtureDegradedAnd(), fixtureDegradedWarmSpare()}) {
        CHECK(dft.validate().empty());
    }
}

TEST_CASE("validate flags an oversized VOT threshold") {
    Dft dft;
    ElementIndex a = dft.addBasicEvent("A", {RateExpr::constant(1.0)});
    ElementIndex b = dft.addBasicEvent("B", {RateExpr::constant(1.0)});
    dft.setTop(dft.addGate("T", GateKind::Vot, {a, b}, 3));
    auto diagnostics = dft.validate();
    REQUIRE_FALSE(diagnostics.empty());
    CHECK(diagnostics.front().element == "T");
}

TEST_CASE("validate flags gate-child cycles") {
    Dft dft;
    ElementIndex a = dft.addBasicEvent("A", {RateExpr::constant(1.0)});
    ElementIndex g1 = dft.addGate("G1", GateKind::And, {});
    ElementIndex g2 = dft.addGate("G2", GateKind::And, {g1, a});
    dft.setGateChildren(g1, {g2});
    dft.setTop(g1);
    auto diagnostics = dft.validate();
    bool cycleFound = std::any_of(diagnostics.begin(), diagnostics.end(),
                                  [](Diagnostic const& d) { return d.message.find("cycle") != std::string::npos; });
    CHECK(cycleFound);
}

TEST_CASE("validate enforces dummy, dormancy, and dependency rules") {
    Dft dft;
    BasicEvent bad;
    bad.rate = RateExpr::constant(1.0);
    bad.dummy = true;  // dummy must have rate zero
    dft.addBasicEvent("A", bad);
    BasicEvent outOfRange;
    outOfRange.rate = RateExpr::constant(1.0);
    outOfRange.dormancy = 1.5;
    dft.addBasicEvent("B", outOfRange);
    dft.setTop(dft.addGate("T", GateKind::Or, ids(dft, {"A", "B"})));
    CHECK(dft.validate().size() >= 2);
}

TEST_CASE("pand fails only in left-to-right order") {
    Dft dft = fixturePand();
    MarkingEvaluator evaluator(dft);

    Marking inOrder = evaluateMarking(evaluator, std::vector<ElementIndex>{dft.require("A"), dft.require("B")});
    CHECK(evaluator.topFailed(inOrder));

    Marking outOfOrder = evaluateMarking(evaluator, std::vector<ElementIndex>{dft.require("B"), dft.require("A")});
    CHECK_FALSE(evaluator.topFailed(outOfOrder));
    CHECK(outOfOrder.isFailSafe(dft.top()));
}

TEST_CASE("pand tolerates simultaneous cascade steps") {
    // Both children fail in the same cascade step through a shared trigger.
    Dft dft = parseDft(
        "toplevel T; T pand A B; A lambda=0 dummy; B lambda=0 dummy;"
        "X lambda=1; D fdep X A B;");
    MarkingEvaluator evaluator(dft);
    Marking marking = evaluateMarking(evaluator, std::vector<ElementIndex>{dft.require("X")});
    CHECK(evaluator.topFailed(marking));
}

TEST_CASE("cold spare activates its successor") {
    Dft dft = fixtureColdSpare();
    MarkingEvaluator evaluator(dft);
    Marking initial = evaluator.initialMarking();
    CHECK(evaluator.spareUsing(initial, dft.top()) == dft.require("P"));
    CHECK_FALSE(initial.isActive(dft.require("S")));

    Marking afterP = evaluateMarking(evaluator, std::vector<ElementIndex>{dft.require("P")});
    CHECK_FALSE(evaluator.topFailed(afterP));
    CHECK(evaluator.spareUsing(afterP, dft.top()) == dft.require("S"));
    CHECK(afterP.isActive(dft.require("S")));
}

TEST_CASE("enabled failures scale by dormancy") {
    Dft warm = fixtureWarmSpare();
    MarkingEvaluator warmEval(warm);
    auto warmRates = warmEval.enabledFailures(warmEval.initialMarking(), warm.valuation());
    REQUIRE(warmRates.size() == 2);
    CHECK(warmRates[0] == std::pair<ElementIndex, double>{warm.require("P"), 1.0});
    CHECK(warmRates[1] == std::pair<ElementIndex, double>{warm.require("S"), 0.5});

    Dft cold = fixtureColdSpare();
    MarkingEvaluator coldEval(cold);
    auto coldRates = coldEval.enabledFailures(coldEval.initialMarking(), cold.valuation());
    REQUIRE(coldRates.size() == 1);
    CHECK(coldRates[0].first == cold.require("P"));
}

TEST_CASE("seq blocks right children until left ones failed") {
    Dft dft = parseDft(
        "toplevel T; T and sm cov; sm lambda=1; cov lambda=2;"
        "S seq sm cov;");
    MarkingEvaluator evaluator(dft);
    Marking initial = evaluator.initialMarking();
    auto rates = evaluator.enabledFailures(initial, dft.valuation());
    REQUIRE(rates.size() == 1);
    CHECK(rates[0].first == dft.require("sm"));

    CHECK_THROWS_AS(evaluator.failBasicEvent(initial, dft.require("cov")), SeqViolationError);
    evaluator.failBasicEvent(initial, dft.require("sm"));
    CHECK_NOTHROW(evaluator.failBasicEvent(initial, dft.require("cov")));
    CHECK(evaluator.topFailed(initial));
}

TEST_CASE("static gates are coherent under permutation") {
    Dft dft = fixtureVot();
    MarkingEvaluator evaluator(dft);
    std::vector<ElementIndex> order = ids(dft, {"A", "B", "C"});
    std::sort(order.begin(), order.end());
    std::vector<std::vector<std::uint64_t>> keys;
    do {
        Marking marking = evaluateMarking(evaluator, order);
        keys.push_back(marking.signatureKey());
    } while (std::next_permutation(order.begin(), order.end()));
    for (auto const& key : keys) {
        CHECK(key == keys.front());
    }
}

TEST_CASE("failure is monotone along prefixes") {
    Dft dft = fixtureVot();
    MarkingEvaluator evaluator(dft);
    Marking marking = evaluator.initialMarking();
    bool wasFailed = false;
    for (auto const& name : {"A", "B", "C"}) {
        evaluator.failBasicEvent(marking, dft.require(name));
        bool nowFailed = evaluator.topFailed(marking);
        CHECK((!wasFailed || nowFailed));
        wasFailed = nowFailed;
    }
    CHECK(wasFailed);
}

TEST_CASE("fdep cascades close transitively") {
    Dft dft = parseDft(
        "toplevel T; T and A B; A lambda=1; B lambda=0 dummy; C lambda=0 dummy;"
        "D1 fdep A C; D2 fdep C B;");
    MarkingEvaluator evaluator(dft);
    Marking marking = evaluateMarking(evaluator, std::vector<ElementIndex>{dft.require("A")});
    CHECK(marking.isFailed(dft.require("C")));
    CHECK(marking.isFailed(dft.require("B")));
    CHECK(evaluator.topFailed(marking));
}

TEST_CASE("adep activation propagates through modules") {
    Dft dft = parseDft(
        "toplevel T; T wsp M1 M2; M1 or A; M2 or B; A lambda=1; B lambda=1 dorm=0;"
        "H or HB; HB lambda=1 dorm=0; ACT adep M2 H;");
    MarkingEvaluator evaluator(dft);
    Marking initial = evaluator.initialMarking();
    CHECK_FALSE(initial.isActive(dft.require("HB")));
    Marking afterA = evaluateMarking(evaluator, std::vector<ElementIndex>{dft.require("A")});
    // M2 is claimed, its activation reaches H (and HB) through the ADEP.
    CHECK(afterA.isActive(dft.require("B")));
    CHECK(afterA.isActive(dft.require("HB")));
}

TEST_CASE("moduleOf returns the gate-closure") {
    Dft dft = fixtureWarmSpare();
    auto module = dft.moduleOf(dft.top());
    CHECK(module.size() == 3);  // T, P, S
}

TEST_CASE("unknown elements are reported") {
    Dft dft = fixtureAnd();
    CHECK_THROWS_AS(dft.require("nope"), UnknownElementError);
    MarkingEvaluator evaluator(dft);
    Marking marking = evaluator.initialMarking();
    CHECK_THROWS_AS(evaluator.failBasicEvent(marking, dft.top()), UnknownElementError);
}
