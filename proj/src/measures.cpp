#include "dftsafe/measures.hpp"

#include <algorithm>
#include <cmath>

#include "dftsafe/errors.hpp"

namespace dftsafe {

namespace {

double clampProbability(double value) {
    return std::min(1.0, std::max(0.0, value));
}

std::string formatNumber(double value) {
    return std::to_string(value);
}

}  // namespace

MeasureEngine::MeasureEngine(Ctmc const& ctmc, AnalysisOptions const& options) : ctmc_(ctmc), options_(options) {
    failedSet_ = ctmc.statesWithAtom(0);
    degradedSet_.assign(ctmc.numStates(), 0);
    if (auto atom = ctmc.atomIndex("degraded")) {
        for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
            if (ctmc.hasAtom(s, *atom) && !failedSet_[s]) {
                degradedSet_[s] = 1;
                degraded_.push_back(s);
            }
        }
    }
}

double MeasureEngine::boundedFailure(double t, StateIndex from) const {
    std::vector<char> none(ctmc_.numStates(), 0);
    return clampProbability(boundedReachBackward(ctmc_, none, failedSet_, t, options_)[from]);
}

MeasureResult MeasureEngine::reliability(double t, StateIndex from) const {
    double unreliability = boundedFailure(t, from);
    return {"reliability", 1.0 - unreliability, unreliability, std::nullopt, "", t};
}

MeasureResult MeasureEngine::afh(double lifetime, StateIndex from) const {
    if (lifetime <= 0.0) {
        throw DftError("AFH requires a positive lifetime");
    }
    return {"afh", boundedFailure(lifetime, from) / lifetime, std::nullopt, std::nullopt, "per hour", lifetime};
}

MeasureResult MeasureEngine::mttf(StateIndex from) const {
    ExpectedTimeResult result = expectedTime(ctmc_, failedSet_, options_);
    if (!result.definedAt(from)) {
        // Point at some operational-absorbing (fail-safe) region reachable from here.
        std::string witness = ctmc_.stateInfo[from];
        for (StateIndex s = 0; s < ctmc_.numStates(); ++s) {
            if (ctmc_.transitions[s].empty() && !failedSet_[s]) {
                witness = ctmc_.stateInfo[s];
                break;
            }
        }
        throw UndefinedMeasureError("MTTF undefined: failure is not reached almost surely (witness state: " +
                                    witness + ")");
    }
    return {"mttf", result.value[from], std::nullopt, std::nullopt, "hours", std::nullopt};
}

MeasureResult MeasureEngine::ffa(double t, StateIndex from) const {
    std::vector<char> none(ctmc_.numStates(), 0);
    std::vector<char> failedOrDegraded = failedSet_;
    for (StateIndex s : degraded_) {
        failedOrDegraded[s] = 1;
    }
    double reach = clampProbability(boundedReachBackward(ctmc_, none, failedOrDegraded, t, options_)[from]);
    return {"ffa", 1.0 - reach, reach, std::nullopt, "", t};
}

MeasureResult MeasureEngine::fwd(double t, StateIndex from) const {
    // Failure without prior degradation: avoid degraded states, hit failed ones.
    double value =
        clampProbability(boundedReachBackward(ctmc_, degradedSet_, failedSet_, t, options_)[from]);
    return {"fwd", value, 1.0 - value, std::nullopt, "", t};
}

MeasureResult MeasureEngine::mtdf(StateIndex from) const {
    if (degraded_.empty()) {
        return {"mtdf", 0.0, std::nullopt, std::nullopt, "no degraded states", std::nullopt};
    }
    std::vector<char> absorbing = failedSet_;
    for (StateIndex s : degraded_) {
        absorbing[s] = 1;
    }
    // One forward pass yields the probability of entering degradation at each
    // degraded state; expected failure times are then mixed accordingly.
    std::vector<double> entry = forwardAbsorption(ctmc_, absorbing, from, options_);
    ExpectedTimeResult times = expectedTime(ctmc_, failedSet_, options_);
    double value = 0.0;
    for (StateIndex s : degraded_) {
        if (entry[s] <= 0.0) {
            continue;
        }
        if (!times.definedAt(s)) {
            throw UndefinedMeasureError("MTDF undefined: degraded state cannot reach failure (witness state: " +
                                        ctmc_.stateInfo[s] + ")");
        }
        value += entry[s] * times.value[s];
    }
    return {"mtdf", value, std::nullopt, std::nullopt, "hours", std::nullopt};
}

MeasureResult MeasureEngine::mdr(double t) const {
    if (degraded_.empty()) {
        throw UndefinedMeasureError("MDR undefined: no degraded states");
    }
    std::vector<char> none(ctmc_.numStates(), 0);
    std::vector<double> reach = boundedReachBackward(ctmc_, none, failedSet_, t, options_);
    double best = 2.0;
    StateIndex witness = kNoState;
    for (StateIndex s : degraded_) {
        double reliability = 1.0 - clampProbability(reach[s]);
        if (reliability < best) {
            best = reliability;
            witness = s;
        }
    }
    return {"mdr", best, 1.0 - best, ctmc_.stateInfo[witness], "", t};
}

MeasureResult MeasureEngine::flod(double t, double drivecycle, StateIndex from) const {
    if (degraded_.empty()) {
        return {"flod", 0.0, 1.0, std::nullopt, "no degraded states", t};
    }
    std::vector<char> absorbing = failedSet_;
    for (StateIndex s : degraded_) {
        absorbing[s] = 1;
    }
    std::vector<double> entry = boundedFirstPassageForward(ctmc_, absorbing, t, from, options_);
    std::vector<char> none(ctmc_.numStates(), 0);
    std::vector<double> fatal = boundedReachBackward(ctmc_, none, failedSet_, drivecycle, options_);
    double value = 0.0;
    for (StateIndex s : degraded_) {
        value += clampProbability(entry[s]) * clampProbability(fatal[s]);
    }
    value = clampProbability(value);
    return {"flod", value, 1.0 - value, std::nullopt, "", t};
}

MeasureResult MeasureEngine::silfo(double t, double drivecycle, StateIndex from) const {
    double fwdValue = fwd(t, from).value;
    double flodValue = flod(t, drivecycle, from).value;
    double value = clampProbability(1.0 - (fwdValue + flodValue));
    return {"silfo", value, 1.0 - value, std::nullopt,
            "fwd=" + formatNumber(fwdValue) + " flod=" + formatNumber(flodValue), t};
}

MeasureResult MeasureEngine::compute(std::string_view measure, MeasureParams const& params, StateIndex from) const {
    if (measure == "reliability") {
        return reliability(params.time, from);
    }
    if (measure == "unreliability") {
        MeasureResult result = reliability(params.time, from);
        return {"unreliability", *result.complement, result.value, std::nullopt, "", params.time};
    }
    if (measure == "afh") {
        return afh(params.lifetime, from);
    }
    if (measure == "mttf") {
        return mttf(from);
    }
    if (measure == "ffa") {
        return ffa(params.time, from);
    }
    if (measure == "fwd") {
        return fwd(params.time, from);
    }
    if (measure == "mtdf") {
        return mtdf(from);
    }
    if (measure == "mdr") {
        return mdr(params.time);
    }
    if (measure == "flod") {
        return flod(params.time, params.drivecycle, from);
    }
    if (measure == "silfo") {
        return silfo(params.time, params.drivecycle, from);
    }
    throw UnknownElementError("unknown measure '" + std::string(measure) + "'");
}

std::vector<std::pair<StateIndex, MeasureResult>> withEvidence(Dft const& dft,
                                                               std::vector<ElementIndex> const& evidence,
                                                               std::string_view measure, MeasureParams const& params,
                                                               StateSpaceOptions options) {
    options.evidence = evidence;
    Ctmc ctmc = buildCtmc(dft, options);
    MeasureEngine engine(ctmc, params.analysis);
    std::vector<std::pair<StateIndex, MeasureResult>> results;
    for (StateIndex entry : ctmc.entryStates) {
        results.push_back({entry, engine.compute(measure, params, entry)});
    }
    return results;
}

std::vector<std::pair<std::map<std::string, double>, MeasureResult>> sensitivitySweep(
    Dft const& dft, std::vector<std::map<std::string, double>> const& valuations, std::string_view measure,
    MeasureParams const& params, StateSpaceOptions options) {
    std::vector<std::pair<std::map<std::string, double>, MeasureResult>> rows;
    for (auto const& valuation : valuations) {
        options.valuation = valuation;
        Ctmc ctmc = buildCtmc(dft, options);
        MeasureEngine engine(ctmc, params.analysis);
        rows.push_back({valuation, engine.compute(measure, params, ctmc.initial)});
    }
    return rows;
}

}  // namespace dftsafe
