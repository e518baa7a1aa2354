#include "dftsafe/scenario.hpp"

#include <algorithm>

#include "dftsafe/errors.hpp"

namespace dftsafe {

namespace {

BasicEvent dummyEvent() {
    BasicEvent be;
    be.dummy = true;
    be.dormancy = 0.0;
    return be;
}

BasicEvent rateEvent(RateExpr rate, double dormancy, bool transient = false) {
    BasicEvent be;
    be.rate = std::move(rate);
    be.dormancy = dormancy;
    be.transient = transient;
    be.dummy = be.rate.isLiteralZero();
    if (be.dummy) {
        be.transient = false;
        be.dormancy = 0.0;
    }
    return be;
}

HardwareTemplate const& requireTemplate(Scenario const& scenario, std::string const& key) {
    auto it = scenario.hardwareTemplates.find(key);
    if (it == scenario.hardwareTemplates.end()) {
        throw ScenarioError("unknown hardware template '" + key + "'");
    }
    return it->second;
}

BlockFaultTree const& requireBlockFt(std::map<std::string, BlockFaultTree> const& blockFTs,
                                     std::string const& block, std::string const& context) {
    auto it = blockFTs.find(block);
    if (it == blockFTs.end()) {
        throw ScenarioError("no fault tree for block '" + block + "' (" + context + ")");
    }
    return it->second;
}

}  // namespace

bool BusSpec::connectsPair(std::string const& a, std::string const& b) const {
    auto has = [&](std::string const& p) { return std::find(connects.begin(), connects.end(), p) != connects.end(); };
    return has(a) && has(b);
}

BlockFaultTree buildBlockFaultTree(Dft& dft, BlockSpec const& block, std::vector<std::string> const& inputSources) {
    BlockFaultTree ft;
    ft.hardwareFault = dft.addBasicEvent(block.name + ".hw", dummyEvent());
    ElementIndex intern = dft.addBasicEvent(block.name + ".intern", rateEvent(block.internRate, 1.0));

    std::vector<ElementIndex> inputEvents;
    for (std::string const& source : inputSources) {
        if (ft.inputFaults.count(source)) {
            throw ScenarioError("duplicate channel " + source + "->" + block.name);
        }
        ElementIndex in = dft.addBasicEvent(block.name + ".in." + source, dummyEvent());
        ft.inputFaults[source] = in;
        inputEvents.push_back(in);
    }

    std::vector<ElementIndex> rootChildren = {ft.hardwareFault, intern};
    if (block.blockTemplate == "default" || block.blockTemplate == "voter") {
        if (block.blockTemplate == "voter" &&
            (block.inputVote < 1 || block.inputVote > inputEvents.size())) {
            throw ScenarioError("block '" + block.name + "': input_vote must be within 1.." +
                                std::to_string(inputEvents.size()));
        }
        if (!inputEvents.empty()) {
            GateKind kind = block.blockTemplate == "voter" ? GateKind::Vot : GateKind::Or;
            rootChildren.push_back(
                dft.addGate(block.name + ".inputs", kind, inputEvents, block.inputVote));
        }
    } else if (block.blockTemplate == "switch") {
        if (inputEvents.size() < 2) {
            throw ScenarioError("block '" + block.name + "': switch template needs at least two inputs");
        }
        ElementIndex switching =
            dft.addBasicEvent(block.name + ".switching", rateEvent(block.switchingRate, 1.0));
        rootChildren.push_back(dft.addGate(block.name + ".wrongpath", GateKind::Pand,
                                           {switching, inputEvents.front()}));
        rootChildren.push_back(dft.addGate(block.name + ".allinputs", GateKind::And, inputEvents));
    } else {
        throw ScenarioError("block '" + block.name + "': unknown template '" + block.blockTemplate + "'");
    }
    ft.root = dft.addGate(block.name, GateKind::Or, rootChildren);
    return ft;
}

void connectBlocks(Dft& dft, std::vector<Channel> const& channels,
                   std::map<std::string, BlockFaultTree> const& blockFTs) {
    for (Channel const& channel : channels) {
        BlockFaultTree const& source = requireBlockFt(blockFTs, channel.from, "channel " + channel.key());
        BlockFaultTree const& target = requireBlockFt(blockFTs, channel.to, "channel " + channel.key());
        auto it = target.inputFaults.find(channel.from);
        if (it == target.inputFaults.end()) {
            throw ScenarioError("block '" + channel.to + "' has no input-fault event for '" + channel.from + "'");
        }
        dft.addDependency("fdep." + channel.from + "." + channel.to, DependencyKind::Fdep, source.root,
                          {it->second});
    }
}

ElementIndex buildSystemLayer(Dft& dft, std::vector<TaskSpec> const& tasks,
                              std::map<std::string, BlockFaultTree> const& blockFTs) {
    if (tasks.empty()) {
        throw ScenarioError("a scenario needs at least one task");
    }
    std::vector<ElementIndex> taskRoots;
    for (TaskSpec const& task : tasks) {
        if (task.paths.empty()) {
            throw ScenarioError("task '" + task.name + "' has no paths");
        }
        std::vector<ElementIndex> pathRoots;
        for (std::size_t p = 0; p < task.paths.size(); ++p) {
            PathSpec const& path = task.paths[p];
            if (path.blocks.empty()) {
                throw ScenarioError("task '" + task.name + "': empty path");
            }
            std::vector<ElementIndex> blockRoots;
            for (std::string const& block : path.blocks) {
                blockRoots.push_back(requireBlockFt(blockFTs, block, "task " + task.name).root);
            }
            if (blockRoots.size() == 1) {
                pathRoots.push_back(blockRoots.front());
            } else {
                pathRoots.push_back(dft.addGate("task." + task.name + ".path" + std::to_string(p + 1),
                                                GateKind::Or, blockRoots));
            }
        }
        if (pathRoots.size() == 1 && !task.standby) {
            taskRoots.push_back(pathRoots.front());
        } else {
            taskRoots.push_back(dft.addGate("task." + task.name,
                                            task.standby ? GateKind::Spare : GateKind::And, pathRoots));
        }
    }
    ElementIndex top = dft.addGate("system", GateKind::Or, taskRoots);
    dft.setTop(top);
    return top;
}

ElementIndex instantiateHardwareFt(Dft& dft, HardwareTemplate const& hardwareTemplate, std::string const& id) {
    std::string prefix = "hw." + id;
    if (hardwareTemplate.simple) {
        return dft.addBasicEvent(prefix, rateEvent(hardwareTemplate.simpleRate, hardwareTemplate.dormancy));
    }
    auto buildClass = [&](std::string const& name, RateExpr const& rate, double coverage,
                          bool transient) -> ElementIndex {
        std::string classPrefix = prefix + "." + name;
        RateExpr covered = RateExpr::constant(coverage) * rate;
        RateExpr uncovered = RateExpr::constant(1.0 - coverage) * rate;
        ElementIndex uncov = dft.addBasicEvent(classPrefix + ".uncov",
                                               rateEvent(uncovered, hardwareTemplate.dormancy, transient));
        ElementIndex sm = dft.addBasicEvent(
            classPrefix + ".sm", rateEvent(hardwareTemplate.safetyMechanismRate, hardwareTemplate.dormancy));
        ElementIndex cov =
            dft.addBasicEvent(classPrefix + ".cov", rateEvent(covered, hardwareTemplate.dormancy, transient));
        ElementIndex covfail = dft.addGate(classPrefix + ".covfail", GateKind::And, {sm, cov});
        dft.addGate(classPrefix + ".seq", GateKind::Seq, {sm, cov});
        return dft.addGate(classPrefix, GateKind::Or, {uncov, covfail});
    };
    ElementIndex transientClass =
        buildClass("trans", hardwareTemplate.transientRate, hardwareTemplate.transientCoverage, true);
    ElementIndex permanentClass =
        buildClass("perm", hardwareTemplate.permanentRate, hardwareTemplate.permanentCoverage, false);
    return dft.addGate(prefix, GateKind::Or, {transientClass, permanentClass});
}

std::map<std::string, std::string> deriveChannelAssignment(Scenario const& scenario) {
    std::map<std::string, std::string> assignment;
    auto platformOf = [&](std::string const& block) -> std::string const& {
        auto it = scenario.blockAssignment.find(block);
        if (it == scenario.blockAssignment.end()) {
            throw ScenarioError("block '" + block + "' is not assigned to a platform");
        }
        return it->second;
    };
    for (Channel const& channel : scenario.channels) {
        std::string key = channel.key();
        std::string const& from = platformOf(channel.from);
        std::string const& to = platformOf(channel.to);
        auto explicitIt = scenario.channelAssignment.find(key);
        if (explicitIt != scenario.channelAssignment.end()) {
            std::string const& bus = explicitIt->second;
            auto busIt = std::find_if(scenario.buses.begin(), scenario.buses.end(),
                                      [&](BusSpec const& b) { return b.name == bus; });
            bool internal = bus == "intern:" + from && from == to;
            if (!internal && (busIt == scenario.buses.end() || !busIt->connectsPair(from, to))) {
                throw ScenarioError("channel " + key + ": bus '" + bus + "' does not connect " + from +
                                    " and " + to);
            }
            assignment[key] = bus;
            continue;
        }
        if (from == to) {
            assignment[key] = "intern:" + from;
            continue;
        }
        std::vector<std::string> candidates;
        for (BusSpec const& bus : scenario.buses) {
            if (bus.connectsPair(from, to)) {
                candidates.push_back(bus.name);
            }
        }
        if (candidates.empty()) {
            throw ScenarioError("channel " + key + ": no bus connects platforms " + from + " and " + to);
        }
        if (candidates.size() > 1) {
            throw ScenarioError("channel " + key + ": multiple buses connect platforms " + from + " and " + to +
                                "; choose one explicitly");
        }
        assignment[key] = candidates.front();
    }
    return assignment;
}

void assembleComplete(Dft& dft, Scenario const& scenario, std::map<std::string, BlockFaultTree> const& blockFTs,
                      std::map<std::string, std::string> const& channelAssignment) {
    // Hardware fault trees for every platform hosting a block, in declaration order.
    std::map<std::string, ElementIndex> platformRoot;
    for (std::string const& platform : scenario.platforms) {
        bool hosts = std::any_of(scenario.blockAssignment.begin(), scenario.blockAssignment.end(),
                                 [&](auto const& kv) { return kv.second == platform; });
        if (!hosts) {
            continue;
        }
        auto templateIt = scenario.platformTemplate.find(platform);
        if (templateIt == scenario.platformTemplate.end()) {
            platformRoot[platform] = dft.addBasicEvent("hw." + platform, dummyEvent());
        } else {
            platformRoot[platform] =
                instantiateHardwareFt(dft, requireTemplate(scenario, templateIt->second), platform);
        }
    }

    // Bus fault trees for every bus actually carrying a channel, in first-use order.
    std::map<std::string, ElementIndex> busRoot;
    for (Channel const& channel : scenario.channels) {
        std::string const& bus = channelAssignment.at(channel.key());
        if (busRoot.count(bus)) {
            continue;
        }
        auto templateIt = scenario.busTemplate.find(bus);
        if (templateIt == scenario.busTemplate.end()) {
            busRoot[bus] = dft.addBasicEvent("bus." + bus, dummyEvent());
        } else {
            busRoot[bus] = instantiateHardwareFt(dft, requireTemplate(scenario, templateIt->second), "bus." + bus);
        }
    }

    // Per block: platform failure fails the block; block activation activates its platform.
    for (BlockSpec const& block : scenario.blocks) {
        auto assignIt = scenario.blockAssignment.find(block.name);
        if (assignIt == scenario.blockAssignment.end()) {
            throw ScenarioError("block '" + block.name + "' is not assigned to a platform");
        }
        BlockFaultTree const& ft = blockFTs.at(block.name);
        ElementIndex hw = platformRoot.at(assignIt->second);
        dft.addDependency("fdep.hw." + block.name, DependencyKind::Fdep, hw, {ft.hardwareFault});
        dft.addDependency("adep.hw." + block.name, DependencyKind::Adep, ft.root, {hw});
    }

    // Per channel: bus failure fails the matching input-fault event.
    for (Channel const& channel : scenario.channels) {
        ElementIndex bus = busRoot.at(channelAssignment.at(channel.key()));
        ElementIndex target = blockFTs.at(channel.to).inputFaults.at(channel.from);
        dft.addDependency("fdep.ch." + channel.from + "." + channel.to, DependencyKind::Fdep, bus, {target});
    }
}

Dft synthesizeScenario(Scenario const& scenario) {
    Dft dft;
    for (auto const& [name, value] : scenario.parameters) {
        dft.declareParameter(name, value);
    }

    std::map<std::string, std::vector<std::string>> inputsOf;
    for (Channel const& channel : scenario.channels) {
        inputsOf[channel.to].push_back(channel.from);
    }
    std::map<std::string, BlockFaultTree> blockFTs;
    for (BlockSpec const& block : scenario.blocks) {
        if (blockFTs.count(block.name)) {
            throw ScenarioError("duplicate block '" + block.name + "'");
        }
        auto inputs = inputsOf.find(block.name);
        blockFTs[block.name] =
            buildBlockFaultTree(dft, block, inputs == inputsOf.end() ? std::vector<std::string>{} : inputs->second);
    }

    connectBlocks(dft, scenario.channels, blockFTs);
    buildSystemLayer(dft, scenario.tasks, blockFTs);
    assembleComplete(dft, scenario, blockFTs, deriveChannelAssignment(scenario));

    for (auto const& [name, predicate] : scenario.labels) {
        dft.addLabel({name, LabelExpr::parse(predicate, dft)});
    }
    dft.requireValid();
    return dft;
}

}  // namespace dftsafe
