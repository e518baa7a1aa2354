#include "dftsafe/state_space.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "dftsafe/errors.hpp"

namespace dftsafe {

namespace {

struct KeyHash {
    std::size_t operator()(std::vector<std::uint64_t> const& key) const {
        std::size_t hash = 1469598103934665603ull;
        for (std::uint64_t word : key) {
            hash ^= static_cast<std::size_t>(word);
            hash *= 1099511628211ull;
        }
        return hash;
    }
};

std::string describeMarking(Dft const& dft, Marking const& marking) {
    if (marking.failedBasicEvents().empty()) {
        return "<initial>";
    }
    std::string info;
    for (ElementIndex be : marking.failedBasicEvents()) {
        if (!info.empty()) {
            info += "+";
        }
        info += dft.name(be);
    }
    return info;
}

}  // namespace

std::vector<std::pair<ElementIndex, double>> transientTransitions(MarkingEvaluator const& evaluator,
                                                                  Marking const& marking,
                                                                  std::map<std::string, double> const& valuation) {
    std::vector<std::pair<ElementIndex, double>> result;
    for (auto const& [be, rate] : evaluator.enabledFailures(marking, valuation)) {
        if (!evaluator.dft().basicEvent(be).transient) {
            continue;
        }
        Marking next = marking;
        evaluator.failBasicEvent(next, be);
        if (evaluator.topFailed(next)) {
            result.push_back({be, rate});
        }
    }
    return result;
}

Ctmc buildCtmc(Dft const& dft, StateSpaceOptions const& options) {
    dft.requireValid();
    auto valuation = dft.valuation(options.valuation);
    MarkingEvaluator evaluator(dft);

    Ctmc ctmc;
    ctmc.atoms.push_back("failed");
    for (auto const& label : dft.labels()) {
        ctmc.atoms.push_back(label.name);
    }
    if (ctmc.atoms.size() > 64) {
        throw ValidationError("more than 63 user labels are not supported");
    }

    std::unordered_map<std::vector<std::uint64_t>, StateIndex, KeyHash> bySignature;
    struct Pending {
        StateIndex index;
        std::vector<ElementIndex> order;
    };
    std::deque<Pending> queue;

    auto addState = [&](Marking const& marking) -> StateIndex {
        if (evaluator.topFailed(marking)) {
            if (ctmc.failedSink == kNoState) {
                ctmc.failedSink = static_cast<StateIndex>(ctmc.transitions.size());
                ctmc.transitions.emplace_back();
                ctmc.exitRate.push_back(0.0);
                ctmc.labelMask.push_back(1);  // atom 0: failed
                ctmc.stateInfo.push_back("FAILED");
            }
            return ctmc.failedSink;
        }
        auto key = marking.signatureKey();
        auto [it, inserted] = bySignature.try_emplace(std::move(key), static_cast<StateIndex>(ctmc.transitions.size()));
        if (!inserted) {
            return it->second;
        }
        if (ctmc.transitions.size() >= options.stateCap) {
            throw StateSpaceLimitError("state cap of " + std::to_string(options.stateCap) +
                                       " exceeded; consider the approximation mode");
        }
        StateIndex index = it->second;
        std::uint64_t mask = 0;
        auto isFailed = [&](ElementIndex element) { return marking.isFailed(element); };
        for (std::size_t i = 0; i < dft.labels().size(); ++i) {
            if (dft.labels()[i].condition.evaluate(isFailed)) {
                mask |= std::uint64_t{1} << (i + 1);
            }
        }
        ctmc.transitions.emplace_back();
        ctmc.exitRate.push_back(0.0);
        ctmc.labelMask.push_back(mask);
        ctmc.stateInfo.push_back(describeMarking(dft, marking));
        queue.push_back({index, marking.failedBasicEvents()});
        return index;
    };

    // Entry states: initial marking, or the markings of all evidence permutations.
    if (options.evidence.empty()) {
        StateIndex entry = addState(evaluator.initialMarking());
        ctmc.entryStates.push_back(entry);
    } else {
        std::vector<ElementIndex> permutation = options.evidence;
        std::sort(permutation.begin(), permutation.end());
        do {
            Marking marking = evaluator.initialMarking();
            for (ElementIndex be : permutation) {
                evaluator.failBasicEvent(marking, be);
            }
            StateIndex entry = addState(marking);
            if (std::find(ctmc.entryStates.begin(), ctmc.entryStates.end(), entry) == ctmc.entryStates.end()) {
                ctmc.entryStates.push_back(entry);
            }
        } while (std::next_permutation(permutation.begin(), permutation.end()));
    }
    ctmc.initial = ctmc.entryStates.front();

    while (!queue.empty()) {
        Pending pending = std::move(queue.front());
        queue.pop_front();
        Marking marking = evaluator.replayFailureOrder(pending.order);
        std::vector<std::pair<StateIndex, double>> row;
        for (auto const& [be, rate] : evaluator.enabledFailures(marking, valuation)) {
            Marking next = marking;
            evaluator.failBasicEvent(next, be);
            if (dft.basicEvent(be).transient) {
                // Transient faults matter only if they immediately fail the top
                // level; otherwise the fault vanishes and the state is unchanged.
                if (evaluator.topFailed(next)) {
                    row.push_back({addState(next), rate});
                }
            } else {
                row.push_back({addState(next), rate});
            }
        }
        std::sort(row.begin(), row.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
        std::vector<std::pair<StateIndex, double>> merged;
        double exit = 0.0;
        for (auto const& [target, rate] : row) {
            if (!merged.empty() && merged.back().first == target) {
                merged.back().second += rate;
            } else {
                merged.push_back({target, rate});
            }
            exit += rate;
        }
        ctmc.transitions[pending.index] = std::move(merged);
        ctmc.exitRate[pending.index] = exit;
    }

    return ctmc;
}

}  // namespace dftsafe
