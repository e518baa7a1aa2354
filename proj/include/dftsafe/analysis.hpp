#pragma once

#include <vector>

#include "dftsafe/ctmc.hpp"

namespace dftsafe {

struct AnalysisOptions {
    /// Total-variation truncation error of uniformization (Poisson tail mass).
    double uniformizationEpsilon = 1e-10;
    /// Relative-change stopping threshold of iterative linear solves.
    double linearEpsilon = 1e-12;
};

/// Distribution at time t from `initial`, via uniformization (Poisson mixture of
/// DTMC powers, tail mass <= epsilon split evenly between both truncation ends).
std::vector<double> transientDistribution(Ctmc const& ctmc, double t, std::vector<double> initial,
                                          AnalysisOptions const& options = {});

/// Entry s = P^s(bad U<=t target). States in both sets count as target.
std::vector<double> boundedReachBackward(Ctmc const& ctmc, std::vector<char> const& bad,
                                         std::vector<char> const& target, double t,
                                         AnalysisOptions const& options = {});

/// Entry s = probability that the first state of `absorbing` reached from `from`
/// within time t is s. One forward pass serves all targets simultaneously.
std::vector<double> boundedFirstPassageForward(Ctmc const& ctmc, std::vector<char> const& absorbing, double t,
                                               StateIndex from, AnalysisOptions const& options = {});

/// Entry s = P^s(bad U target), by solving the embedded-DTMC linear system.
/// Unreachable targets yield 0.
std::vector<double> unboundedReachAvoid(Ctmc const& ctmc, std::vector<char> const& bad,
                                        std::vector<char> const& target, AnalysisOptions const& options = {});

struct ExpectedTimeResult {
    /// Expected time to reach the target set; +infinity where undefined.
    std::vector<double> value;
    /// P^s(eventually target); the expectation is defined only where this is 1.
    std::vector<double> reachProbability;

    bool definedAt(StateIndex s) const { return reachProbability[s] >= 1.0 - 1e-9; }
};

/// Expected time to absorption in `target`, defined per state only when the
/// target is reached almost surely from that state.
ExpectedTimeResult expectedTime(Ctmc const& ctmc, std::vector<char> const& target,
                                AnalysisOptions const& options = {});

/// Entry s (s in `absorbing`) = probability that the first `absorbing` state
/// reached from `from` is s, with no time bound.
std::vector<double> forwardAbsorption(Ctmc const& ctmc, std::vector<char> const& absorbing, StateIndex from,
                                      AnalysisOptions const& options = {});

}  // namespace dftsafe
