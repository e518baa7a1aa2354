#include <doctest.h>

#include <string>

#include "dftsafe/errors.hpp"
#include "dftsafe/marking.hpp"
#include "dftsafe/scenario.hpp"
#include "dftsafe/scenario_parser.hpp"
#include "dftsafe/state_space.hpp"

using namespace dftsafe;

namespace {

Scenario pipelineScenario() {
    // Sensor S feeds processing block P; both run on one ECU.
    Scenario scenario;
    scenario.blocks.push_back({.name = "S"});
    scenario.blocks.push_back({.name = "P", .internRate = RateExpr::constant(0.001)});
    scenario.channels.push_back({"S", "P"});
    scenario.tasks.push_back({.name = "t", .standby = false, .paths = {{{"S", "P"}}}});
    scenario.platforms = {"ecu"};
    scenario.blockAssignment = {{"S", "ecu"}, {"P", "ecu"}};
    return scenario;
}

int countDependencies(Dft const& dft, DependencyKind kind) {
    int count = 0;
    for (ElementIndex i = 0; i < dft.size(); ++i) {
        if (dft.isDependency(i) && dft.dependency(i).kind == kind) {
            ++count;
        }
    }
    return count;
}

}  // namespace

TEST_CASE("default blocks combine hardware, internal, and input faults") {
    Dft dft;
    BlockSpec block{.name = "B", .internRate = RateExpr::constant(0.01)};
    BlockFaultTree ft = buildBlockFaultTree(dft, block, {"X", "Y"});
    Gate const& root = dft.gate(ft.root);
    CHECK(dft.name(ft.root) == "B");
    CHECK(root.kind == GateKind::Or);
    REQUIRE(root.children.size() == 3);
    CHECK(dft.basicEvent(dft.require("B.hw")).dummy);
    CHECK_FALSE(dft.basicEvent(dft.require("B.intern")).dummy);
    CHECK(dft.gate(dft.require("B.inputs")).kind == GateKind::Or);
    CHECK(ft.inputFaults.at("X") == dft.require("B.in.X"));
}

TEST_CASE("voter blocks vote over their inputs") {
    Dft dft;
    BlockSpec block{.name = "V", .blockTemplate = "voter", .inputVote = 2};
    buildBlockFaultTree(dft, block, {"a", "b", "c"});
    Gate const& inputs = dft.gate(dft.require("V.inputs"));
    CHECK(inputs.kind == GateKind::Vot);
    CHECK(inputs.threshold == 2);

    Dft bad;
    BlockSpec invalid{.name = "V", .blockTemplate = "voter", .inputVote = 4};
    CHECK_THROWS_AS(buildBlockFaultTree(bad, invalid, {"a", "b", "c"}), ScenarioError);
}

TEST_CASE("switch blocks order the switchover against the primary input") {
    Dft dft;
    BlockSpec block{.name = "W", .blockTemplate = "switch", .switchingRate = RateExpr::constant(0.01)};
    buildBlockFaultTree(dft, block, {"main", "backup"});
    Gate const& wrongpath = dft.gate(dft.require("W.wrongpath"));
    CHECK(wrongpath.kind == GateKind::Pand);
    CHECK(wrongpath.children[0] == dft.require("W.switching"));
    CHECK(wrongpath.children[1] == dft.require("W.in.main"));
    CHECK(dft.gate(dft.require("W.allinputs")).kind == GateKind::And);

    Dft bad;
    BlockSpec single{.name = "W", .blockTemplate = "switch"};
    CHECK_THROWS_AS(buildBlockFaultTree(bad, single, {"main"}), ScenarioError);
}

TEST_CASE("channel assignment derives internal and connecting buses") {
    Scenario scenario;
    scenario.blocks.push_back({.name = "A"});
    scenario.blocks.push_back({.name = "B"});
    scenario.blocks.push_back({.name = "C"});
    scenario.channels.push_back({"A", "B"});
    scenario.channels.push_back({"B", "C"});
    scenario.platforms = {"p1", "p2"};
    scenario.buses.push_back({"can", {"p1", "p2"}});
    scenario.blockAssignment = {{"A", "p1"}, {"B", "p1"}, {"C", "p2"}};

    auto assignment = deriveChannelAssignment(scenario);
    CHECK(assignment.at("A->B") == "intern:p1");
    CHECK(assignment.at("B->C") == "can");

    SUBCASE("no connecting bus") {
        scenario.buses.clear();
        CHECK_THROWS_AS(deriveChannelAssignment(scenario), ScenarioError);
    }
    SUBCASE("ambiguous buses need an explicit choice") {
        scenario.buses.push_back({"eth", {"p1", "p2"}});
        CHECK_THROWS_AS(deriveChannelAssignment(scenario), ScenarioError);
        scenario.channelAssignment["B->C"] = "eth";
        CHECK(deriveChannelAssignment(scenario).at("B->C") == "eth");
    }
    SUBCASE("explicit assignments must connect the endpoints") {
        scenario.channelAssignment["A->B"] = "can";  // can does connect p1-p1
        CHECK(deriveChannelAssignment(scenario).at("A->B") == "can");
        scenario.channelAssignment["B->C"] = "nope";
        CHECK_THROWS_AS(deriveChannelAssignment(scenario), ScenarioError);
    }
}

TEST_CASE("the assembled pipeline has the expected shape") {
    Dft dft = synthesizeScenario(pipelineScenario());
    CHECK(dft.validate().empty());
    CHECK(dft.name(dft.top()) == "system");
    // Two blocks and one channel: one FDEP per channel, one FDEP+ADEP pair per
    // block, one FDEP per channel-carrying bus edge.
    CHECK(countDependencies(dft, DependencyKind::Adep) == 2);
    CHECK(countDependencies(dft, DependencyKind::Fdep) == 4);
    // 3 (block S) + 5 (block P) + path gate + system + hw.ecu + bus + 6 deps.
    CHECK(dft.size() == 18);
    // Single non-standby task: no task gate, the path gate feeds the top.
    CHECK_THROWS_AS(dft.require("task.t"), UnknownElementError);
    CHECK_NOTHROW(dft.require("task.t.path1"));
    CHECK(dft.basicEvent(dft.require("hw.ecu")).dummy);
    CHECK(dft.basicEvent(dft.require("bus.intern:ecu")).dummy);
}

TEST_CASE("single-block paths collapse onto the block root") {
    Scenario scenario = pipelineScenario();
    scenario.tasks = {{.name = "solo", .standby = false, .paths = {{{"P"}}}}};
    Dft dft = synthesizeScenario(scenario);
    CHECK_THROWS_AS(dft.require("task.solo"), UnknownElementError);
    CHECK_THROWS_AS(dft.require("task.solo.path1"), UnknownElementError);
    CHECK(dft.gate(dft.top()).children == std::vector<ElementIndex>{dft.require("P")});
}

TEST_CASE("hardware coverage templates sequence detection before coverage") {
    Dft dft;
    HardwareTemplate hw;
    hw.transientRate = RateExpr::constant(0.1);
    hw.permanentRate = RateExpr::constant(0.2);
    hw.safetyMechanismRate = RateExpr::constant(0.05);
    hw.transientCoverage = 0.9;
    hw.permanentCoverage = 0.6;
    hw.dormancy = 0.0;
    ElementIndex root = instantiateHardwareFt(dft, hw, "ecu");
    CHECK(dft.name(root) == "hw.ecu");
    CHECK(dft.size() == 13);
    CHECK(dft.basicEvent(dft.require("hw.ecu.trans.uncov")).transient);
    CHECK(dft.basicEvent(dft.require("hw.ecu.trans.cov")).transient);
    CHECK_FALSE(dft.basicEvent(dft.require("hw.ecu.trans.sm")).transient);
    CHECK_FALSE(dft.basicEvent(dft.require("hw.ecu.perm.uncov")).transient);
    CHECK(dft.gate(dft.require("hw.ecu.trans.seq")).kind == GateKind::Seq);
    auto valuation = dft.valuation();
    CHECK(dft.basicEvent(dft.require("hw.ecu.trans.uncov")).rate.evaluate(valuation) ==
          doctest::Approx(0.1 * 0.1));
    CHECK(dft.basicEvent(dft.require("hw.ecu.perm.cov")).rate.evaluate(valuation) ==
          doctest::Approx(0.2 * 0.6));
}

TEST_CASE("cold-standby platforms stay dormant until their path is claimed") {
    Scenario scenario;
    scenario.blocks.push_back({.name = "EP", .internRate = RateExpr::constant(0.001)});
    scenario.blocks.push_back({.name = "sEP"});
    scenario.tasks.push_back({.name = "plan", .standby = true, .paths = {{{"EP"}}, {{"sEP"}}}});
    scenario.platforms = {"A1", "A2"};
    scenario.blockAssignment = {{"EP", "A1"}, {"sEP", "A2"}};
    HardwareTemplate hw;
    hw.transientRate = RateExpr::constant(0.1);
    hw.permanentRate = RateExpr::constant(0.2);
    hw.safetyMechanismRate = RateExpr::constant(0.05);
    hw.transientCoverage = 0.9;
    hw.permanentCoverage = 0.6;
    hw.dormancy = 0.0;
    scenario.hardwareTemplates["ecu"] = hw;
    scenario.platformTemplate = {{"A1", "ecu"}, {"A2", "ecu"}};

    Dft dft = synthesizeScenario(scenario);
    MarkingEvaluator evaluator(dft);
    Marking initial = evaluator.initialMarking();
    auto enabled = evaluator.enabledFailures(initial, dft.valuation());
    // Active side: EP.intern plus the four unblocked BEs of hw.A1; the standby
    // platform contributes nothing at dormancy zero.
    CHECK(enabled.size() == 5);
    for (auto const& [element, rate] : enabled) {
        CHECK(dft.name(element).find("A2") == std::string::npos);
    }

    Marking afterEp = initial;
    evaluator.failBasicEvent(afterEp, dft.require("EP.intern"));
    CHECK_FALSE(evaluator.topFailed(afterEp));
    auto failedOver = evaluator.enabledFailures(afterEp, dft.valuation());
    bool a2Enabled = false;
    for (auto const& [element, rate] : failedOver) {
        a2Enabled = a2Enabled || dft.name(element).find("A2") != std::string::npos;
    }
    CHECK(a2Enabled);
    CHECK(buildCtmc(dft).numStates() > 1);
}

TEST_CASE("scenario documents parse from JSON") {
    std::string text = R"json({
        "parameters": {"r_s": 1e-5},
        "blocks": [
            {"name": "S"},
            {"name": "V", "template": "voter", "input_vote": 1, "intern_rate": "2 * r_s"},
            {"name": "W", "template": "switch", "switching_rate": 0.001}
        ],
        "channels": [{"from": "S", "to": "V"}, {"from": "S", "to": "W"}, {"from": "V", "to": "W"}],
        "tasks": [{"name": "drive", "mode": "spare", "paths": [["S", "V"], ["W"]]}],
        "architecture": {
            "platforms": ["p1", "p2"],
            "buses": [{"name": "can", "connects": ["p1", "p2"]}]
        },
        "hardware_templates": {
            "sensor": {"rate": 1e-6},
            "ecu": {"transient_rate": 1e-4, "permanent_rate": 1e-5,
                     "safety_mechanism_rate": 1e-5,
                     "transient_coverage": 0.99, "permanent_coverage": 0.9}
        },
        "assignment": {
            "blocks": {"S": "p1", "V": "p2", "W": "p2"},
            "platform_templates": {"p1": "sensor", "p2": "ecu"},
            "channels": {"S->V": "can"}
        },
        "labels": [{"name": "degraded", "when": "failed(V)"}]
    })json";
    Scenario scenario = parseScenario(text);
    CHECK(scenario.parameters.at("r_s") == doctest::Approx(1e-5));
    CHECK(scenario.blocks.size() == 3);
    CHECK(scenario.blocks[1].blockTemplate == "voter");
    CHECK(scenario.tasks[0].standby);
    CHECK(scenario.hardwareTemplates.at("sensor").simple);
    CHECK(scenario.hardwareTemplates.at("ecu").transientCoverage == doctest::Approx(0.99));
    CHECK(scenario.channelAssignment.at("S->V") == "can");

    Dft dft = synthesizeScenario(scenario);
    CHECK(dft.validate().empty());
    CHECK(dft.labels().size() == 1);
    CHECK(countDependencies(dft, DependencyKind::Adep) == 3);
    CHECK(countDependencies(dft, DependencyKind::Fdep) == 3 + 2 * 3);
}

TEST_CASE("malformed scenario documents are rejected") {
    CHECK_THROWS_AS(parseScenario("not json"), ScenarioError);
    CHECK_THROWS_AS(parseScenario(R"({"blocks": [{}]})"), ScenarioError);
    CHECK_THROWS_AS(parseScenario(R"({"tasks": [{"name": "t", "mode": "xor", "paths": [["a"]]}]})"),
                    ScenarioError);
    CHECK_THROWS_AS(parseScenario(R"({"hardware_templates": {"x": {"dormancy": 1}}})"), ScenarioError);
}

TEST_CASE("synthesis validates task and assignment references") {
    Scenario scenario = pipelineScenario();
    SUBCASE("unknown block in a path") {
        scenario.tasks[0].paths[0].blocks.push_back("ghost");
        CHECK_THROWS_AS(synthesizeScenario(scenario), ScenarioError);
    }
    SUBCASE("unassigned block") {
        scenario.blockAssignment.erase("P");
        CHECK_THROWS_AS(synthesizeScenario(scenario), ScenarioError);
    }
    SUBCASE("no tasks") {
        scenario.tasks.clear();
        CHECK_THROWS_AS(synthesizeScenario(scenario), ScenarioError);
    }
}
