#include <doctest.h>

#include <set>

#include "dftsafe/errors.hpp"
#include "dftsafe/state_space.hpp"
#include "../support/fixtures.hpp"
#include "../support/random_dft.hpp"

using namespace dftsafe;
using namespace dftsafe::tests;

TEST_CASE("hand-sized chains have the expected state counts") {
    CHECK(buildCtmc(fixtureAnd()).numStates() == 4);   // {}, {A}, {B}, failed
    CHECK(buildCtmc(fixtureColdSpare()).numStates() == 3);
    CHECK(buildCtmc(fixtureVot()).numStates() == 5);   // 1 + 3 + merged failures
    CHECK(buildCtmc(fixturePand()).numStates() == 5);  // includes the fail-safe absorbing state
    CHECK(buildCtmc(fixtureOr()).numStates() == 2);
}

TEST_CASE("the failed sink is unique and absorbing") {
    Ctmc ctmc = buildCtmc(fixtureVot());
    REQUIRE(ctmc.failedSink != kNoState);
    CHECK(ctmc.transitions[ctmc.failedSink].empty());
    int failedStates = 0;
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        if (ctmc.hasAtom(s, 0)) {
            ++failedStates;
        }
    }
    CHECK(failedStates == 1);
}

TEST_CASE("exit rates equal the sum of outgoing rates") {
    for (unsigned seed = 0; seed < 25; ++seed) {
        Ctmc ctmc = buildCtmc(randomDft(seed));
        for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
            double sum = 0.0;
            for (auto const& [target, rate] : ctmc.transitions[s]) {
                CHECK(rate > 0.0);
                sum += rate;
            }
            CHECK(ctmc.exitRate[s] == doctest::Approx(sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("transient faults only transition when fatal") {
    Ctmc ctmc = buildCtmc(fixtureTransient());
    // initial -> {P} at rate 1; {P} -> failed at rate 1. The transient fault at
    // the initial state vanishes and contributes nothing.
    REQUIRE(ctmc.numStates() == 3);
    REQUIRE(ctmc.transitions[ctmc.initial].size() == 1);
    CHECK(ctmc.exitRate[ctmc.initial] == doctest::Approx(1.0));
    StateIndex mid = ctmc.transitions[ctmc.initial][0].first;
    REQUIRE(ctmc.transitions[mid].size() == 1);
    CHECK(ctmc.transitions[mid][0].first == ctmc.failedSink);

    Ctmc withoutFlag = buildCtmc(fixtureTransient(false));
    CHECK(withoutFlag.numStates() == 4);
    CHECK(withoutFlag.exitRate[withoutFlag.initial] == doctest::Approx(2.0));
}

TEST_CASE("labels mark matching operational states") {
    Ctmc ctmc = buildCtmc(fixtureDegradedAnd());
    auto degraded = ctmc.atomIndex("degraded");
    REQUIRE(degraded.has_value());
    int count = 0;
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        if (ctmc.hasAtom(s, *degraded)) {
            CHECK_FALSE(ctmc.hasAtom(s, 0));  // the sink never carries user labels
            ++count;
        }
    }
    CHECK(count == 2);
}

TEST_CASE("evidence produces entry states for every legal permutation") {
    Dft dft = fixtureVot();
    StateSpaceOptions options;
    options.evidence = {dft.require("A")};
    Ctmc ctmc = buildCtmc(dft, options);
    REQUIRE(ctmc.entryStates.size() == 1);
    CHECK(ctmc.entryStates[0] == ctmc.initial);
    CHECK_FALSE(ctmc.hasAtom(ctmc.initial, 0));

    options.evidence = {dft.require("A"), dft.require("B")};
    Ctmc failedEntry = buildCtmc(dft, options);
    REQUIRE(failedEntry.entryStates.size() == 1);
    CHECK(failedEntry.hasAtom(failedEntry.entryStates[0], 0));
}

TEST_CASE("evidence violating a SEQ is rejected") {
    Dft dft = parseDft("toplevel T; T and A B; A lambda=1; B lambda=1; S seq A B;");
    StateSpaceOptions options;
    options.evidence = {dft.require("B")};
    CHECK_THROWS_AS(buildCtmc(dft, options), SeqViolationError);
}

TEST_CASE("the state cap aborts exploration") {
    StateSpaceOptions options;
    options.stateCap = 2;
    CHECK_THROWS_AS(buildCtmc(fixtureVot(), options), StateSpaceLimitError);
}

TEST_CASE("construction is deterministic") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        Dft dft = randomDft(seed);
        Ctmc a = buildCtmc(dft);
        Ctmc b = buildCtmc(dft);
        CHECK(a.numStates() == b.numStates());
        CHECK(a.transitions == b.transitions);
        CHECK(a.stateInfo == b.stateInfo);
    }
}

TEST_CASE("equal signatures merge different failure orders") {
    // VOT is static: [A,B] and [B,A] reach the same state.
    Ctmc ctmc = buildCtmc(fixtureVot());
    std::set<std::string> infos(ctmc.stateInfo.begin(), ctmc.stateInfo.end());
    CHECK(infos.size() == ctmc.numStates());  // no duplicated markings
}
