#include <doctest.h>

#include <cmath>

#include "dftsafe/approximation.hpp"
#include "dftsafe/errors.hpp"
#include "dftsafe/measures.hpp"
#include "dftsafe/state_space.hpp"
#include "../support/fixtures.hpp"
#include "../support/random_dft.hpp"

using namespace dftsafe;
using namespace dftsafe::tests;

TEST_CASE("a one-level frontier gives the textbook bounds") {
    Dft dft = fixtureAnd();
    PartialSpace space(dft);
    // Only the initial state is expanded; {A} and {B} remain on the frontier.
    CHECK(space.numExplored() == 1);
    CHECK(space.numStates() == 3);

    double t = 1.0;
    Ctmc pessimistic = space.pessimisticCtmc();
    auto up = boundedReachBackward(pessimistic, std::vector<char>(pessimistic.numStates(), 0),
                                   pessimistic.statesWithAtom(0), t);
    CHECK(up[0] == doctest::Approx(1.0 - std::exp(-3.0 * t)).epsilon(1e-9));

    Ctmc optimistic = space.optimisticCtmc();
    auto low = boundedReachBackward(optimistic, std::vector<char>(optimistic.numStates(), 0),
                                    optimistic.statesWithAtom(0), t);
    CHECK(low[0] == doctest::Approx(0.0));

    // The completion chain restarts the race, which is exact for two events.
    Ctmc upperChain = space.mttfUpperCtmc();
    auto et = expectedTime(upperChain, upperChain.statesWithAtom(0));
    REQUIRE(et.definedAt(0));
    CHECK(et.value[0] == doctest::Approx(7.0 / 6.0).epsilon(1e-9));
    auto lowerEt = expectedTime(pessimistic, pessimistic.statesWithAtom(0));
    CHECK(lowerEt.value[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("full exploration reproduces the exact values") {
    ApproxOptions options;
    options.relativeError = 1e-10;
    BoundInterval unrel = approximateUnreliability(fixtureAnd(), 1.0, options);
    double exact = (1.0 - std::exp(-1.0)) * (1.0 - std::exp(-2.0));
    CHECK(unrel.converged);
    CHECK(unrel.lower == doctest::Approx(exact).epsilon(1e-9));
    CHECK(unrel.upper == doctest::Approx(exact).epsilon(1e-9));

    BoundInterval mttf = approximateMttf(fixtureAnd(), options);
    CHECK(mttf.converged);
    CHECK(mttf.lower == doctest::Approx(7.0 / 6.0).epsilon(1e-9));
    CHECK(mttf.upper == doctest::Approx(7.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("refine is monotone and tolerates a zero budget") {
    Dft dft = fixtureVot();
    PartialSpace space(dft);
    std::size_t before = space.numExplored();
    space.refine(0);
    CHECK(space.numExplored() == before);
    space.refine(before + 1);
    CHECK(space.numExplored() == before + 1);
    space.refine(1000);
    CHECK(space.exhausted());
    space.refine(1000);  // no-op once exhausted
    CHECK(space.numExplored() == space.numStates() - 1);  // the sink is never expanded
}

TEST_CASE("fail-safe frontiers make the mttf upper bound undefined") {
    Dft dft = fixturePand();
    PartialSpace space(dft);
    CHECK_THROWS_AS(space.mttfUpperCtmc(), UndefinedMeasureError);
    CHECK_THROWS_AS(approximateMttf(dft), UndefinedMeasureError);
}

TEST_CASE("bounds are sound and tighten with exploration") {
    for (unsigned seed = 400; seed < 420; ++seed) {
        Dft dft = randomDft(seed, {.allowTransient = false, .allowDependencies = false});
        double t = 600.0;
        Ctmc ctmc = buildCtmc(dft);
        MeasureParams params;
        params.time = t;
        double exact = MeasureEngine(ctmc).compute("unreliability", params, ctmc.initial).value;

        ApproxOptions options;
        options.initialBudget = 1;
        options.relativeError = 1e-8;
        BoundInterval interval = approximateUnreliability(dft, t, options);
        CHECK(interval.lower <= exact + 1e-9);
        CHECK(interval.upper >= exact - 1e-9);
        double previousWidth = std::numeric_limits<double>::infinity();
        for (ApproxIteration const& step : interval.trace) {
            double width = step.upper - step.lower;
            CHECK(width <= previousWidth + 1e-12);
            CHECK(step.lower <= exact + 1e-9);
            CHECK(step.upper >= exact - 1e-9);
            previousWidth = width;
        }
    }
}

TEST_CASE("mttf bounds bracket the exact value") {
    for (Dft const& dft : {fixtureAnd(), fixtureColdSpare(), fixtureWarmSpare(), fixtureVot()}) {
        Ctmc ctmc = buildCtmc(dft);
        double exact = MeasureEngine(ctmc).mttf(ctmc.initial).value;
        ApproxOptions options;
        options.initialBudget = 1;
        options.relativeError = 0.5;
        BoundInterval interval = approximateMttf(dft, options);
        CHECK(interval.lower <= exact + 1e-9);
        CHECK(interval.upper >= exact - 1e-9);
    }
}

TEST_CASE("a tight state cap reports non-convergence") {
    ApproxOptions options;
    options.relativeError = 1e-12;
    options.stateCap = 3;
    options.initialBudget = 1;
    BoundInterval interval = approximateUnreliability(fixtureVot(), 1.0, options);
    CHECK_FALSE(interval.converged);
    CHECK(interval.lower <= interval.upper);
}
