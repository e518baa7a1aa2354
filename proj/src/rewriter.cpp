#include "dftsafe/rewriter.hpp"

#include <algorithm>
#include <set>
#include <variant>
#include <vector>

#include "dftsafe/errors.hpp"

namespace dftsafe {

namespace {

struct Work {
    std::vector<std::string> names;
    std::vector<std::variant<BasicEvent, Gate, Dependency>> data;
    std::vector<char> alive;
    std::vector<ElementIndex> redirect;
    std::vector<char> labelReferenced;
    ElementIndex top = kNoElement;

    bool isGate(ElementIndex i) const { return std::holds_alternative<Gate>(data[i]); }
    bool isBasicEvent(ElementIndex i) const { return std::holds_alternative<BasicEvent>(data[i]); }
    bool isDependency(ElementIndex i) const { return std::holds_alternative<Dependency>(data[i]); }
    Gate& gate(ElementIndex i) { return std::get<Gate>(data[i]); }
    Dependency& dependency(ElementIndex i) { return std::get<Dependency>(data[i]); }

    ElementIndex resolve(ElementIndex i) const {
        while (redirect[i] != i) {
            i = redirect[i];
        }
        return i;
    }

    void resolveAllReferences() {
        top = resolve(top);
        for (ElementIndex i = 0; i < data.size(); ++i) {
            if (!alive[i]) {
                continue;
            }
            if (isGate(i)) {
                for (ElementIndex& child : gate(i).children) {
                    child = resolve(child);
                }
            } else if (isDependency(i)) {
                Dependency& dep = dependency(i);
                dep.trigger = resolve(dep.trigger);
                for (ElementIndex& target : dep.targets) {
                    target = resolve(target);
                }
            }
        }
    }
};

bool normalizeVot(Work& work) {
    bool changed = false;
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (!work.alive[i] || !work.isGate(i)) {
            continue;
        }
        Gate& gate = work.gate(i);
        if (gate.kind != GateKind::Vot) {
            continue;
        }
        if (gate.threshold == 1) {
            gate.kind = GateKind::Or;
            gate.threshold = 0;
            changed = true;
        } else if (gate.threshold == gate.children.size()) {
            gate.kind = GateKind::And;
            gate.threshold = 0;
            changed = true;
        }
    }
    return changed;
}

bool dropSingleChildGates(Work& work) {
    bool changed = false;
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (!work.alive[i] || !work.isGate(i) || work.labelReferenced[i]) {
            continue;
        }
        Gate& gate = work.gate(i);
        bool droppableKind =
            gate.kind == GateKind::And || gate.kind == GateKind::Or || gate.kind == GateKind::Vot;
        if (droppableKind && gate.children.size() == 1) {
            work.alive[i] = 0;
            work.redirect[i] = work.resolve(gate.children.front());
            changed = true;
        }
    }
    if (changed) {
        work.resolveAllReferences();
    }
    return changed;
}

bool flattenSameKind(Work& work) {
    bool changed = false;
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (!work.alive[i] || !work.isGate(i)) {
            continue;
        }
        Gate& gate = work.gate(i);
        if (gate.kind != GateKind::And && gate.kind != GateKind::Or) {
            continue;
        }
        std::vector<ElementIndex> flattened;
        std::set<ElementIndex> seen;
        bool localChange = false;
        for (ElementIndex child : gate.children) {
            if (work.isGate(child) && work.gate(child).kind == gate.kind) {
                for (ElementIndex grandchild : work.gate(child).children) {
                    if (seen.insert(grandchild).second) {
                        flattened.push_back(grandchild);
                    }
                }
                localChange = true;
            } else if (seen.insert(child).second) {
                flattened.push_back(child);
            } else {
                localChange = true;  // duplicate removed
            }
        }
        if (localChange) {
            gate.children = std::move(flattened);
            changed = true;
        }
    }
    return changed;
}

bool dropFatalTriggerFdeps(Work& work) {
    // F = elements whose failure alone already fails the top element.
    std::vector<char> fatal(work.data.size(), 0);
    fatal[work.top] = 1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (ElementIndex i = 0; i < work.data.size(); ++i) {
            if (!work.alive[i] || !work.isGate(i) || !fatal[i]) {
                continue;
            }
            Gate const& gate = work.gate(i);
            bool allChildrenFatal = gate.kind == GateKind::Or ||
                                    (gate.kind == GateKind::Vot && gate.threshold == 1) ||
                                    gate.children.size() == 1;
            if (gate.kind == GateKind::Seq) {
                continue;  // a SEQ never fails
            }
            if (allChildrenFatal) {
                for (ElementIndex child : gate.children) {
                    if (!fatal[child]) {
                        fatal[child] = 1;
                        grew = true;
                    }
                }
            }
        }
    }
    bool changed = false;
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (!work.alive[i] || !work.isDependency(i) || work.labelReferenced[i]) {
            continue;
        }
        Dependency const& dep = work.dependency(i);
        if (dep.kind == DependencyKind::Fdep && fatal[dep.trigger]) {
            work.alive[i] = 0;
            changed = true;
        }
    }
    return changed;
}

bool dropIrrelevantElements(Work& work) {
    std::vector<char> relevant(work.data.size(), 0);
    relevant[work.top] = 1;
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (work.alive[i] && work.labelReferenced[i]) {
            relevant[i] = 1;
        }
    }
    bool grew = true;
    while (grew) {
        grew = false;
        auto mark = [&](ElementIndex element) {
            if (!relevant[element]) {
                relevant[element] = 1;
                grew = true;
            }
        };
        for (ElementIndex i = 0; i < work.data.size(); ++i) {
            if (!work.alive[i]) {
                continue;
            }
            if (work.isGate(i)) {
                Gate const& gate = work.gate(i);
                if (gate.kind == GateKind::Seq) {
                    // A SEQ constrains the order of all its children: if any child
                    // matters, the whole constraint does.
                    bool anyRelevant = std::any_of(gate.children.begin(), gate.children.end(),
                                                   [&](ElementIndex c) { return relevant[c]; });
                    if (anyRelevant) {
                        mark(i);
                        for (ElementIndex child : gate.children) {
                            mark(child);
                        }
                    }
                } else if (relevant[i]) {
                    for (ElementIndex child : gate.children) {
                        mark(child);
                    }
                }
            } else if (work.isDependency(i)) {
                Dependency const& dep = work.dependency(i);
                bool anyRelevant = std::any_of(dep.targets.begin(), dep.targets.end(),
                                               [&](ElementIndex t) { return relevant[t]; });
                if (anyRelevant) {
                    mark(i);
                    mark(dep.trigger);
                }
            }
        }
    }
    bool changed = false;
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (!work.alive[i]) {
            continue;
        }
        if (!relevant[i]) {
            work.alive[i] = 0;
            changed = true;
            continue;
        }
        if (work.isDependency(i)) {
            Dependency& dep = work.dependency(i);
            std::vector<ElementIndex> kept;
            for (ElementIndex target : dep.targets) {
                if (relevant[target]) {
                    kept.push_back(target);
                }
            }
            if (kept.size() != dep.targets.size()) {
                dep.targets = std::move(kept);
                changed = true;
            }
        }
    }
    return changed;
}

}  // namespace

Dft rewrite(Dft const& dft) {
    dft.requireValid();

    Work work;
    work.top = dft.top();
    work.names.reserve(dft.size());
    work.data.reserve(dft.size());
    work.alive.assign(dft.size(), 1);
    work.redirect.resize(dft.size());
    work.labelReferenced.assign(dft.size(), 0);
    for (ElementIndex i = 0; i < dft.size(); ++i) {
        work.names.push_back(dft.name(i));
        work.redirect[i] = i;
        if (dft.isBasicEvent(i)) {
            work.data.emplace_back(dft.basicEvent(i));
        } else if (dft.isGate(i)) {
            work.data.emplace_back(dft.gate(i));
        } else {
            work.data.emplace_back(dft.dependency(i));
        }
    }
    for (auto const& label : dft.labels()) {
        std::vector<ElementIndex> atoms;
        label.condition.collectAtoms(atoms);
        for (ElementIndex atom : atoms) {
            work.labelReferenced[atom] = 1;
        }
    }

    for (int iteration = 0; iteration < 100; ++iteration) {
        bool changed = false;
        changed |= normalizeVot(work);
        changed |= flattenSameKind(work);
        changed |= dropSingleChildGates(work);
        changed |= dropFatalTriggerFdeps(work);
        changed |= dropIrrelevantElements(work);
        if (!changed) {
            break;
        }
    }

    // Rebuild with dense indices, preserving declaration order.
    Dft result;
    std::vector<ElementIndex> remap(dft.size(), kNoElement);
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (!work.alive[i]) {
            continue;
        }
        if (work.isBasicEvent(i)) {
            remap[i] = result.addBasicEvent(work.names[i], std::get<BasicEvent>(work.data[i]));
        } else if (work.isGate(i)) {
            remap[i] = result.addGate(work.names[i], std::get<Gate>(work.data[i]).kind, {},
                                      std::get<Gate>(work.data[i]).threshold);
        } else {
            remap[i] = result.addDependency(work.names[i], std::get<Dependency>(work.data[i]).kind, kNoElement, {});
        }
    }
    for (ElementIndex i = 0; i < work.data.size(); ++i) {
        if (!work.alive[i]) {
            continue;
        }
        if (work.isGate(i)) {
            std::vector<ElementIndex> children;
            for (ElementIndex child : work.gate(i).children) {
                children.push_back(remap[child]);
            }
            result.setGateChildren(remap[i], std::move(children));
        } else if (work.isDependency(i)) {
            Dependency const& dep = work.dependency(i);
            std::vector<ElementIndex> targets;
            for (ElementIndex target : dep.targets) {
                targets.push_back(remap[target]);
            }
            result.setDependencyWiring(remap[i], remap[dep.trigger], std::move(targets));
        }
    }
    result.setTop(remap[work.top]);
    for (auto const& [name, value] : dft.parameters()) {
        result.declareParameter(name, value);
    }
    for (auto const& label : dft.labels()) {
        result.addLabel({label.name, label.condition.remapped(remap)});
    }
    result.requireValid();
    return result;
}

}  // namespace dftsafe
