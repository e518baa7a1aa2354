#include "dftsafe/scenario_parser.hpp"

#include <json.hpp>

#include "dftsafe/errors.hpp"

namespace dftsafe {

namespace {

using nlohmann::json;

json const& member(json const& object, char const* key, json const& fallback) {
    auto it = object.find(key);
    return it == object.end() ? fallback : *it;
}

RateExpr rateField(json const& object, char const* key) {
    auto it = object.find(key);
    if (it == object.end()) {
        return RateExpr();
    }
    if (it->is_number()) {
        return RateExpr::constant(it->get<double>());
    }
    if (it->is_string()) {
        return RateExpr::parse(it->get<std::string>());
    }
    throw ScenarioError(std::string("field '") + key + "' must be a number or a rate expression string");
}

HardwareTemplate parseHardwareTemplate(json const& object, std::string const& key) {
    HardwareTemplate result;
    if (object.contains("rate")) {
        result.simple = true;
        result.simpleRate = rateField(object, "rate");
        result.dormancy = member(object, "dormancy", json(1.0)).get<double>();
        return result;
    }
    if (!object.contains("transient_rate") && !object.contains("permanent_rate")) {
        throw ScenarioError("hardware template '" + key + "' needs either 'rate' or the coverage fields");
    }
    result.transientRate = rateField(object, "transient_rate");
    result.permanentRate = rateField(object, "permanent_rate");
    result.safetyMechanismRate = rateField(object, "safety_mechanism_rate");
    result.transientCoverage = member(object, "transient_coverage", json(0.0)).get<double>();
    result.permanentCoverage = member(object, "permanent_coverage", json(0.0)).get<double>();
    result.dormancy = member(object, "dormancy", json(0.0)).get<double>();
    return result;
}

}  // namespace

Scenario parseScenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (json::parse_error const& error) {
        throw ScenarioError(std::string("invalid scenario JSON: ") + error.what());
    }
    try {
        Scenario scenario;
        static json const kEmptyObject = json::object();
        static json const kEmptyArray = json::array();

        for (auto const& [name, value] : member(doc, "parameters", kEmptyObject).items()) {
            scenario.parameters[name] = value.get<double>();
        }
        for (json const& entry : member(doc, "blocks", kEmptyArray)) {
            BlockSpec block;
            block.name = entry.at("name").get<std::string>();
            block.blockTemplate = member(entry, "template", json("default")).get<std::string>();
            block.inputVote = member(entry, "input_vote", json(1)).get<std::uint32_t>();
            block.internRate = rateField(entry, "intern_rate");
            block.switchingRate = rateField(entry, "switching_rate");
            scenario.blocks.push_back(std::move(block));
        }
        for (json const& entry : member(doc, "channels", kEmptyArray)) {
            scenario.channels.push_back({entry.at("from").get<std::string>(), entry.at("to").get<std::string>()});
        }
        for (json const& entry : member(doc, "tasks", kEmptyArray)) {
            TaskSpec task;
            task.name = entry.at("name").get<std::string>();
            std::string mode = member(entry, "mode", json("and")).get<std::string>();
            if (mode != "and" && mode != "spare") {
                throw ScenarioError("task '" + task.name + "': mode must be 'and' or 'spare'");
            }
            task.standby = mode == "spare";
            for (json const& pathEntry : entry.at("paths")) {
                PathSpec path;
                for (json const& block : pathEntry) {
                    path.blocks.push_back(block.get<std::string>());
                }
                task.paths.push_back(std::move(path));
            }
            scenario.tasks.push_back(std::move(task));
        }
        json const& architecture = member(doc, "architecture", kEmptyObject);
        for (json const& platform : member(architecture, "platforms", kEmptyArray)) {
            scenario.platforms.push_back(platform.get<std::string>());
        }
        for (json const& entry : member(architecture, "buses", kEmptyArray)) {
            BusSpec bus;
            bus.name = entry.at("name").get<std::string>();
            for (json const& platform : entry.at("connects")) {
                bus.connects.push_back(platform.get<std::string>());
            }
            scenario.buses.push_back(std::move(bus));
        }
        for (auto const& [key, value] : member(doc, "hardware_templates", kEmptyObject).items()) {
            scenario.hardwareTemplates[key] = parseHardwareTemplate(value, key);
        }
        json const& assignment = member(doc, "assignment", kEmptyObject);
        for (auto const& [block, platform] : member(assignment, "blocks", kEmptyObject).items()) {
            scenario.blockAssignment[block] = platform.get<std::string>();
        }
        for (auto const& [platform, key] : member(assignment, "platform_templates", kEmptyObject).items()) {
            scenario.platformTemplate[platform] = key.get<std::string>();
        }
        for (auto const& [bus, key] : member(assignment, "bus_templates", kEmptyObject).items()) {
            scenario.busTemplate[bus] = key.get<std::string>();
        }
        for (auto const& [channel, bus] : member(assignment, "channels", kEmptyObject).items()) {
            scenario.channelAssignment[channel] = bus.get<std::string>();
        }
        for (json const& entry : member(doc, "labels", kEmptyArray)) {
            scenario.labels.push_back({entry.at("name").get<std::string>(), entry.at("when").get<std::string>()});
        }
        return scenario;
    } catch (json::exception const& error) {
        throw ScenarioError(std::string("malformed scenario document: ") + error.what());
    }
}

}  // namespace dftsafe
