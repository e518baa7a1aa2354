#include "dftsafe/approximation.hpp"

#include <algorithm>
#include <chrono>

#include "dftsafe/errors.hpp"
#include "dftsafe/state_space.hpp"

namespace dftsafe {

namespace {

std::string packKey(std::vector<std::uint64_t> const& key) {
    return std::string(reinterpret_cast<char const*>(key.data()), key.size() * sizeof(std::uint64_t));
}

}  // namespace

PartialSpace::PartialSpace(Dft const& dft, std::map<std::string, double> const& valuationOverrides,
                           std::size_t stateCap)
    : dft_(dft), evaluator_(dft), valuation_(dft.valuation(valuationOverrides)), stateCap_(stateCap) {
    dft.requireValid();
    Marking initial = evaluator_.initialMarking();
    StateIndex index = discover(initial, 1.0);
    queue_.push({1.0, index});
    refine(1);  // the initial state is always explored
}

StateIndex PartialSpace::discover(Marking const& marking, double priority) {
    if (evaluator_.topFailed(marking)) {
        if (sink_ == kNoState) {
            sink_ = static_cast<StateIndex>(nodes_.size());
            Node node;
            node.expanded = true;  // absorbing, nothing to explore
            nodes_.push_back(std::move(node));
        }
        return sink_;
    }
    auto [it, inserted] = bySignature_.try_emplace(packKey(marking.signatureKey()),
                                                   static_cast<StateIndex>(nodes_.size()));
    if (inserted) {
        Node node;
        node.order = marking.failedBasicEvents();
        node.priority = priority;
        nodes_.push_back(std::move(node));
    } else if (!nodes_[it->second].expanded && priority > nodes_[it->second].priority) {
        nodes_[it->second].priority = priority;
        queue_.push({priority, it->second});  // stale entries are skipped on pop
    }
    return it->second;
}

void PartialSpace::expand(StateIndex index) {
    // discover() may reallocate nodes_, so copy what the expansion needs.
    double priority = nodes_[index].priority;
    Marking marking = evaluator_.replayFailureOrder(nodes_[index].order);
    std::vector<std::pair<StateIndex, double>> row;
    double exit = 0.0;
    auto enabled = evaluator_.enabledFailures(marking, valuation_);
    // The exit rate first: branch probabilities need it, and non-fatal transient
    // faults contribute neither a transition nor exit rate.
    std::vector<std::pair<ElementIndex, double>> emitted;
    for (auto const& [be, rate] : enabled) {
        if (dft_.basicEvent(be).transient) {
            Marking next = marking;
            evaluator_.failBasicEvent(next, be);
            if (!evaluator_.topFailed(next)) {
                continue;
            }
        }
        emitted.push_back({be, rate});
        exit += rate;
    }
    for (auto const& [be, rate] : emitted) {
        Marking next = marking;
        evaluator_.failBasicEvent(next, be);
        StateIndex target = discover(next, priority * (rate / exit));
        row.push_back({target, rate});
        if (target != sink_ && !nodes_[target].expanded) {
            queue_.push({nodes_[target].priority, target});
        }
    }
    std::sort(row.begin(), row.end(), [](auto const& a, auto const& b) { return a.first < b.first; });
    std::vector<std::pair<StateIndex, double>> merged;
    for (auto const& [target, rate] : row) {
        if (!merged.empty() && merged.back().first == target) {
            merged.back().second += rate;
        } else {
            merged.push_back({target, rate});
        }
    }
    Node& nodeAfter = nodes_[index];  // nodes_ may have reallocated
    nodeAfter.row = std::move(merged);
    nodeAfter.exit = exit;
    nodeAfter.expanded = true;
    ++explored_;
}

void PartialSpace::refine(std::size_t exploredBudget) {
    while (explored_ < exploredBudget && !queue_.empty() && nodes_.size() < stateCap_) {
        QueueEntry entry = queue_.top();
        queue_.pop();
        if (nodes_[entry.index].expanded || entry.priority != nodes_[entry.index].priority) {
            continue;
        }
        expand(entry.index);
    }
}

Ctmc PartialSpace::skeleton() const {
    Ctmc ctmc;
    ctmc.atoms.push_back("failed");
    ctmc.initial = 0;
    ctmc.entryStates.push_back(0);
    ctmc.failedSink = sink_;
    ctmc.transitions.resize(nodes_.size());
    ctmc.exitRate.assign(nodes_.size(), 0.0);
    ctmc.labelMask.assign(nodes_.size(), 0);
    ctmc.stateInfo.assign(nodes_.size(), "");
    for (StateIndex i = 0; i < nodes_.size(); ++i) {
        if (i == sink_) {
            ctmc.labelMask[i] = 1;
            ctmc.stateInfo[i] = "FAILED";
            continue;
        }
        if (nodes_[i].expanded) {
            ctmc.transitions[i] = nodes_[i].row;
            ctmc.exitRate[i] = nodes_[i].exit;
            ctmc.stateInfo[i] = i == 0 ? "<initial>" : "explored";
        } else {
            ctmc.stateInfo[i] = "<frontier>";
        }
    }
    return ctmc;
}

Ctmc PartialSpace::pessimisticCtmc() const {
    Ctmc ctmc = skeleton();
    for (StateIndex i = 0; i < nodes_.size(); ++i) {
        if (i != sink_ && !nodes_[i].expanded) {
            ctmc.labelMask[i] = 1;
        }
    }
    return ctmc;
}

Ctmc PartialSpace::optimisticCtmc() const { return skeleton(); }

Ctmc PartialSpace::mttfUpperCtmc() const {
    Ctmc ctmc = skeleton();
    if (ctmc.failedSink == kNoState) {
        ctmc.failedSink = static_cast<StateIndex>(ctmc.transitions.size());
        ctmc.transitions.emplace_back();
        ctmc.exitRate.push_back(0.0);
        ctmc.labelMask.push_back(1);
        ctmc.stateInfo.push_back("FAILED");
    }
    auto appendState = [&]() -> StateIndex {
        StateIndex index = static_cast<StateIndex>(ctmc.transitions.size());
        ctmc.transitions.emplace_back();
        ctmc.exitRate.push_back(0.0);
        ctmc.labelMask.push_back(0);
        ctmc.stateInfo.push_back("completion");
        return index;
    };
    for (StateIndex i = 0; i < nodes_.size(); ++i) {
        if (i == sink_ || nodes_[i].expanded) {
            continue;
        }
        Marking marking = evaluator_.replayFailureOrder(nodes_[i].order);
        StateIndex current = i;
        while (true) {
            // Fail the fastest enabled permanent fault next; any completion order
            // yields a sound bound, faster ones yield tighter chains.
            ElementIndex pick = kNoElement;
            double pickRate = 0.0;
            for (auto const& [be, rate] : evaluator_.enabledFailures(marking, valuation_)) {
                if (dft_.basicEvent(be).transient) {
                    continue;
                }
                if (rate > pickRate) {
                    pick = be;
                    pickRate = rate;
                }
            }
            if (pick == kNoElement) {
                throw UndefinedMeasureError(
                    "MTTF upper bound undefined: a partially explored state admits a fail-safe future");
            }
            evaluator_.failBasicEvent(marking, pick);
            StateIndex next = evaluator_.topFailed(marking) ? ctmc.failedSink : appendState();
            ctmc.transitions[current].push_back({next, pickRate});
            ctmc.exitRate[current] = pickRate;
            if (next == ctmc.failedSink) {
                break;
            }
            current = next;
        }
    }
    return ctmc;
}

namespace {

double elapsedSeconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <typename Bounds>
BoundInterval iterateToPrecision(PartialSpace& space, ApproxOptions const& options, Bounds const& bounds) {
    BoundInterval result;
    auto start = std::chrono::steady_clock::now();
    std::size_t budget = options.initialBudget;
    while (true) {
        std::size_t before = space.numExplored();
        space.refine(budget);
        auto [lower, upper] = bounds(space);
        result.iterations += 1;
        result.statesExplored = space.numExplored();
        result.lower = lower;
        result.upper = upper;
        result.trace.push_back({result.iterations, elapsedSeconds(start), space.numExplored(), lower, upper});
        if (space.exhausted() || upper - lower <= options.relativeError * lower) {
            result.converged = true;
            return result;
        }
        if (space.numExplored() == before && !space.exhausted()) {
            // State cap reached without the requested precision.
            result.converged = false;
            return result;
        }
        budget *= 2;
    }
}

}  // namespace

BoundInterval approximateUnreliability(Dft const& dft, double t, ApproxOptions const& options) {
    PartialSpace space(dft, options.valuation, options.stateCap);
    return iterateToPrecision(space, options, [&](PartialSpace const& s) {
        Ctmc pessimistic = s.pessimisticCtmc();
        Ctmc optimistic = s.optimisticCtmc();
        std::vector<char> none(pessimistic.numStates(), 0);
        double upper =
            boundedReachBackward(pessimistic, none, pessimistic.statesWithAtom(0), t, options.analysis)[0];
        std::vector<char> noneLower(optimistic.numStates(), 0);
        double lower =
            boundedReachBackward(optimistic, noneLower, optimistic.statesWithAtom(0), t, options.analysis)[0];
        return std::pair<double, double>{std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0)};
    });
}

BoundInterval approximateMttf(Dft const& dft, ApproxOptions const& options) {
    PartialSpace space(dft, options.valuation, options.stateCap);
    return iterateToPrecision(space, options, [&](PartialSpace const& s) {
        Ctmc pessimistic = s.pessimisticCtmc();
        ExpectedTimeResult fast = expectedTime(pessimistic, pessimistic.statesWithAtom(0), options.analysis);
        if (!fast.definedAt(0)) {
            throw UndefinedMeasureError("MTTF undefined: an explored state admits no path to failure");
        }
        Ctmc slow = s.mttfUpperCtmc();
        ExpectedTimeResult slowResult = expectedTime(slow, slow.statesWithAtom(0), options.analysis);
        if (!slowResult.definedAt(0)) {
            throw UndefinedMeasureError("MTTF undefined: an explored state admits no path to failure");
        }
        return std::pair<double, double>{fast.value[0], slowResult.value[0]};
    });
}

}  // namespace dftsafe
