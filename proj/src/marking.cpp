#include "dftsafe/marking.hpp"

#include <algorithm>

#include "dftsafe/errors.hpp"

namespace dftsafe {

std::vector<std::uint64_t> Marking::signatureKey() const {
    std::size_t n = failStep_.size();
    std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> key(3 * words, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (failStep_[i] != 0) {
            key[i / 64] |= std::uint64_t{1} << (i % 64);
        }
        if (failSafe_[i]) {
            key[words + i / 64] |= std::uint64_t{1} << (i % 64);
        }
        if (active_[i]) {
            key[2 * words + i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }
    return key;
}

MarkingEvaluator::MarkingEvaluator(Dft const& dft) : dft_(dft) {
    std::size_t n = dft.size();
    seqOf_.resize(n);
    adepsBySource_.resize(n);

    // Topological order over gate->child edges, children first.
    std::vector<int> state(n, 0);
    auto visit = [&](auto&& self, ElementIndex node) -> void {
        state[node] = 1;
        if (dft.isGate(node)) {
            for (ElementIndex child : dft.gate(node).children) {
                if (state[child] == 0) {
                    self(self, child);
                }
            }
        }
        state[node] = 2;
        if (dft.isGate(node)) {
            gateTopo_.push_back(node);
        }
    };
    for (ElementIndex i = 0; i < n; ++i) {
        if (state[i] == 0) {
            visit(visit, i);
        }
    }

    for (ElementIndex i = 0; i < n; ++i) {
        if (dft.isGate(i) && dft.gate(i).kind == GateKind::Seq) {
            auto const& children = dft.gate(i).children;
            for (std::size_t pos = 0; pos < children.size(); ++pos) {
                seqOf_[children[pos]].push_back({i, pos});
            }
        } else if (dft.isDependency(i)) {
            auto const& dep = dft.dependency(i);
            if (dep.kind == DependencyKind::Fdep) {
                fdeps_.push_back(i);
            } else {
                adepsBySource_[dep.trigger].push_back(i);
            }
        }
    }
}

Marking MarkingEvaluator::initialMarking() const {
    Marking marking;
    marking.failStep_.assign(dft_.size(), 0);
    marking.failSafe_.assign(dft_.size(), 0);
    marking.active_.assign(dft_.size(), 0);
    recomputeActivation(marking);
    return marking;
}

bool MarkingEvaluator::isSeqBlocked(Marking const& marking, ElementIndex be) const {
    for (auto const& [seq, position] : seqOf_[be]) {
        auto const& children = dft_.gate(seq).children;
        for (std::size_t i = 0; i < position; ++i) {
            if (!marking.isFailed(children[i])) {
                return true;
            }
        }
    }
    return false;
}

ElementIndex MarkingEvaluator::spareUsing(Marking const& marking, ElementIndex spare) const {
    for (ElementIndex child : dft_.gate(spare).children) {
        if (!marking.isFailed(child)) {
            return child;
        }
    }
    return kNoElement;
}

void MarkingEvaluator::updateGates(Marking& marking) const {
    for (ElementIndex g : gateTopo_) {
        Gate const& gate = dft_.gate(g);
        if (gate.kind == GateKind::Seq || marking.isFailed(g) || marking.isFailSafe(g)) {
            continue;
        }
        bool fails = false;
        switch (gate.kind) {
            case GateKind::And:
            case GateKind::Spare: {
                fails = std::all_of(gate.children.begin(), gate.children.end(),
                                    [&](ElementIndex c) { return marking.isFailed(c); });
                break;
            }
            case GateKind::Or: {
                fails = std::any_of(gate.children.begin(), gate.children.end(),
                                    [&](ElementIndex c) { return marking.isFailed(c); });
                break;
            }
            case GateKind::Vot: {
                std::size_t count = static_cast<std::size_t>(
                    std::count_if(gate.children.begin(), gate.children.end(),
                                  [&](ElementIndex c) { return marking.isFailed(c); }));
                fails = count >= gate.threshold;
                break;
            }
            case GateKind::Pand: {
                // Fail-safe as soon as some child fails while a left sibling is still
                // operational or failed strictly later.
                bool violated = false;
                for (std::size_t j = 0; j < gate.children.size() && !violated; ++j) {
                    std::uint32_t stepJ = marking.failureStep(gate.children[j]);
                    if (stepJ == 0) {
                        continue;
                    }
                    for (std::size_t i = 0; i < j; ++i) {
                        std::uint32_t stepI = marking.failureStep(gate.children[i]);
                        if (stepI == 0 || stepI > stepJ) {
                            violated = true;
                            break;
                        }
                    }
                }
                if (violated) {
                    marking.failSafe_[g] = 1;
                } else {
                    fails = std::all_of(gate.children.begin(), gate.children.end(),
                                        [&](ElementIndex c) { return marking.isFailed(c); });
                }
                break;
            }
            case GateKind::Seq:
                break;
        }
        if (fails) {
            marking.failStep_[g] = marking.stepCounter_;
        }
    }
}

void MarkingEvaluator::recomputeActivation(Marking& marking) const {
    std::fill(marking.active_.begin(), marking.active_.end(), 0);
    std::vector<ElementIndex> worklist;
    auto activate = [&](ElementIndex element) {
        if (!marking.active_[element]) {
            marking.active_[element] = 1;
            worklist.push_back(element);
        }
    };
    activate(dft_.top());
    while (!worklist.empty()) {
        ElementIndex current = worklist.back();
        worklist.pop_back();
        if (dft_.isGate(current)) {
            Gate const& gate = dft_.gate(current);
            if (gate.kind == GateKind::Spare) {
                // Children are activated left to right; the first operational child
                // is the one currently in use, children to its right stay dormant.
                for (ElementIndex child : gate.children) {
                    activate(child);
                    if (!marking.isFailed(child)) {
                        break;
                    }
                }
            } else {
                for (ElementIndex child : gate.children) {
                    activate(child);
                }
            }
        }
        for (ElementIndex dep : adepsBySource_[current]) {
            for (ElementIndex target : dft_.dependency(dep).targets) {
                activate(target);
            }
        }
    }
}

void MarkingEvaluator::failInternal(Marking& marking, ElementIndex be) const {
    marking.stepCounter_ += 1;
    marking.failStep_[be] = marking.stepCounter_;
    marking.failedOrder_.push_back(be);
    updateGates(marking);
    recomputeActivation(marking);
}

void MarkingEvaluator::applyCascades(Marking& marking) const {
    bool changed = true;
    while (changed) {
        changed = false;
        for (ElementIndex dep : fdeps_) {
            Dependency const& fdep = dft_.dependency(dep);
            if (!marking.isFailed(fdep.trigger)) {
                continue;
            }
            for (ElementIndex target : fdep.targets) {
                if (!marking.isFailed(target) && !isSeqBlocked(marking, target)) {
                    failInternal(marking, target);
                    changed = true;
                    break;  // rescan from the first dependency to keep a fixed total order
                }
            }
            if (changed) {
                break;
            }
        }
    }
}

void MarkingEvaluator::failBasicEvent(Marking& marking, ElementIndex be) const {
    if (be >= dft_.size() || !dft_.isBasicEvent(be)) {
        throw UnknownElementError("'" + (be < dft_.size() ? dft_.name(be) : std::to_string(be)) +
                                  "' is not a basic event");
    }
    if (marking.isFailed(be)) {
        return;
    }
    if (isSeqBlocked(marking, be)) {
        throw SeqViolationError("basic event '" + dft_.name(be) + "' is blocked by a SEQ");
    }
    failInternal(marking, be);
    applyCascades(marking);
}

Marking MarkingEvaluator::replayFailureOrder(std::span<ElementIndex const> order) const {
    Marking marking = initialMarking();
    for (ElementIndex be : order) {
        failInternal(marking, be);
    }
    return marking;
}

std::vector<std::pair<ElementIndex, double>> MarkingEvaluator::enabledFailures(
    Marking const& marking, std::map<std::string, double> const& valuation) const {
    std::vector<std::pair<ElementIndex, double>> result;
    for (ElementIndex i = 0; i < dft_.size(); ++i) {
        if (!dft_.isBasicEvent(i)) {
            continue;
        }
        BasicEvent const& be = dft_.basicEvent(i);
        if (be.dummy || marking.isFailed(i) || isSeqBlocked(marking, i)) {
            continue;
        }
        double rate = be.rate.evaluate(valuation);
        if (rate < 0.0) {
            throw ValidationError("negative failure rate for '" + dft_.name(i) + "'");
        }
        double effective = marking.isActive(i) ? rate : rate * be.dormancy;
        if (effective > 0.0) {
            result.push_back({i, effective});
        }
    }
    return result;
}

Marking evaluateMarking(MarkingEvaluator const& evaluator, std::span<ElementIndex const> sequence) {
    Marking marking = evaluator.initialMarking();
    for (ElementIndex be : sequence) {
        evaluator.failBasicEvent(marking, be);
    }
    return marking;
}

}  // namespace dftsafe
