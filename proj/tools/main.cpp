#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dftsafe/approximation.hpp"
#include "dftsafe/errors.hpp"
#include "dftsafe/measures.hpp"
#include "dftsafe/rewriter.hpp"
#include "dftsafe/scenario.hpp"
#include "dftsafe/scenario_parser.hpp"
#include "dftsafe/state_space.hpp"
#include "dftsafe/text_format.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitUndefined = 3;

std::string readFile(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw dftsafe::DftError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void writeOutput(std::string const& path, std::string const& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw dftsafe::DftError("cannot write '" + path + "'");
    }
    out << content;
}

std::string formatNumber(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::map<std::string, double> parseParams(std::vector<std::string> const& entries) {
    std::map<std::string, double> result;
    for (std::string const& entry : entries) {
        auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw dftsafe::ValidationError("--param expects name=value, got '" + entry + "'");
        }
        result[entry.substr(0, eq)] = std::stod(entry.substr(eq + 1));
    }
    return result;
}

std::vector<std::string> splitCommas(std::string const& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            if (!current.empty()) {
                parts.push_back(current);
            }
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) {
        parts.push_back(current);
    }
    return parts;
}

std::string csvRow(dftsafe::MeasureResult const& result) {
    std::string row = result.measure + ",";
    row += result.time ? formatNumber(*result.time) : "";
    row += "," + formatNumber(result.value) + ",";
    row += result.complement ? formatNumber(*result.complement) : "";
    row += ",,";  // exact results carry no bounds
    return row + "\n";
}

int runSynth(std::string const& scenarioPath, std::string const& output) {
    dftsafe::Scenario scenario = dftsafe::parseScenario(readFile(scenarioPath));
    dftsafe::Dft dft = dftsafe::synthesizeScenario(scenario);
    writeOutput(output, dftsafe::serializeDft(dft));
    return kExitOk;
}

int runRewrite(std::string const& dftPath, std::string const& output) {
    dftsafe::Dft dft = dftsafe::parseDft(readFile(dftPath));
    writeOutput(output, dftsafe::serializeDft(dftsafe::rewrite(dft)));
    return kExitOk;
}

int runCheck(std::string const& dftPath, std::string const& measures, dftsafe::MeasureParams params,
             std::vector<std::string> const& paramEntries, std::string const& evidenceList,
             std::size_t stateCap, std::string const& output) {
    dftsafe::Dft dft = dftsafe::parseDft(readFile(dftPath));
    dft.requireValid();
    dftsafe::StateSpaceOptions options;
    options.stateCap = stateCap;
    options.valuation = parseParams(paramEntries);
    std::string csv = "measure,time,value,complement,lower,upper\n";
    if (!evidenceList.empty()) {
        std::vector<dftsafe::ElementIndex> evidence;
        for (std::string const& id : splitCommas(evidenceList)) {
            evidence.push_back(dft.require(id));
        }
        for (std::string const& measure : splitCommas(measures)) {
            for (auto const& [state, result] : dftsafe::withEvidence(dft, evidence, measure, params, options)) {
                csv += csvRow(result);
            }
        }
    } else {
        dftsafe::Ctmc ctmc = dftsafe::buildCtmc(dft, options);
        dftsafe::MeasureEngine engine(ctmc, params.analysis);
        for (std::string const& measure : splitCommas(measures)) {
            csv += csvRow(engine.compute(measure, params, ctmc.initial));
        }
    }
    writeOutput(output, csv);
    return kExitOk;
}

int runApprox(std::string const& dftPath, std::string const& measure, double relErr, double time,
              std::vector<std::string> const& paramEntries, std::size_t stateCap, std::string const& output) {
    dftsafe::Dft dft = dftsafe::parseDft(readFile(dftPath));
    dft.requireValid();
    dftsafe::ApproxOptions options;
    options.relativeError = relErr;
    options.stateCap = stateCap;
    options.valuation = parseParams(paramEntries);
    dftsafe::BoundInterval interval;
    if (measure == "unreliability") {
        interval = dftsafe::approximateUnreliability(dft, time, options);
    } else if (measure == "mttf") {
        interval = dftsafe::approximateMttf(dft, options);
    } else {
        throw dftsafe::ValidationError("--measure must be unreliability or mttf");
    }
    std::string csv = "iteration,seconds,states,lower,upper\n";
    for (dftsafe::ApproxIteration const& row : interval.trace) {
        csv += std::to_string(row.iteration) + "," + formatNumber(row.seconds) + "," +
               std::to_string(row.states) + "," + formatNumber(row.lower) + "," + formatNumber(row.upper) + "\n";
    }
    writeOutput(output, csv);
    if (!interval.converged) {
        std::cerr << "warning: state cap reached before the requested precision\n";
    }
    return kExitOk;
}

int runExport(std::string const& dftPath, std::string const& format,
              std::vector<std::string> const& paramEntries, std::size_t stateCap, std::string const& output) {
    dftsafe::Dft dft = dftsafe::parseDft(readFile(dftPath));
    dft.requireValid();
    dftsafe::StateSpaceOptions options;
    options.stateCap = stateCap;
    options.valuation = parseParams(paramEntries);
    dftsafe::Ctmc ctmc = dftsafe::buildCtmc(dft, options);
    if (format == "dot") {
        writeOutput(output, dftsafe::toDot(ctmc));
    } else if (format == "list") {
        writeOutput(output, dftsafe::toTransitionList(ctmc));
    } else {
        throw dftsafe::ValidationError("--ctmc must be dot or list");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic fault tree synthesis and safety-measure analysis"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    std::string measures = "reliability";
    std::string evidence;
    std::string ctmcFormat = "dot";
    std::vector<std::string> paramEntries;
    double time = 1.0;
    double lifetime = 10000.0;
    double drivecycle = 1.0;
    double relErr = 1e-2;
    std::size_t stateCap = 10'000'000;

    CLI::App* synth = app.add_subcommand("synth", "Synthesize a fault tree from a scenario document");
    synth->add_option("scenario", input, "Scenario document (JSON)")->required();
    synth->add_option("-o,--output", output, "Output file (default: stdout)");

    CLI::App* rewriteCmd = app.add_subcommand("rewrite", "Simplify a fault tree");
    rewriteCmd->add_option("dft", input, "Fault tree file")->required();
    rewriteCmd->add_option("-o,--output", output, "Output file (default: stdout)");

    CLI::App* check = app.add_subcommand("check", "Compute safety measures");
    check->add_option("dft", input, "Fault tree file")->required();
    check->add_option("--measure", measures, "Comma-separated measure names");
    check->add_option("--time", time, "Horizon of bounded measures");
    check->add_option("--lifetime", lifetime, "Vehicle lifetime (hours)");
    check->add_option("--drivecycle", drivecycle, "Drive-cycle duration (hours)");
    check->add_option("--param", paramEntries, "Parameter override name=value");
    check->add_option("--evidence", evidence, "Comma-separated basic events assumed failed");
    check->add_option("--state-cap", stateCap, "State-space size limit");
    check->add_option("-o,--output", output, "Output file (default: stdout)");

    CLI::App* approx = app.add_subcommand("approx", "Bound a measure by partial exploration");
    approx->add_option("dft", input, "Fault tree file")->required();
    approx->add_option("--measure", measures, "unreliability or mttf")->required();
    approx->add_option("--rel-err", relErr, "Relative-error stopping threshold");
    approx->add_option("--time", time, "Horizon for unreliability");
    approx->add_option("--param", paramEntries, "Parameter override name=value");
    approx->add_option("--state-cap", stateCap, "State-space size limit");
    approx->add_option("-o,--output", output, "Output file (default: stdout)");

    CLI::App* exportCmd = app.add_subcommand("export", "Export the state space");
    exportCmd->add_option("dft", input, "Fault tree file")->required();
    exportCmd->add_option("--ctmc", ctmcFormat, "dot or list");
    exportCmd->add_option("--param", paramEntries, "Parameter override name=value");
    exportCmd->add_option("--state-cap", stateCap, "State-space size limit");
    exportCmd->add_option("-o,--output", output, "Output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            return runSynth(input, output);
        }
        if (rewriteCmd->parsed()) {
            return runRewrite(input, output);
        }
        if (check->parsed()) {
            dftsafe::MeasureParams params;
            params.time = time;
            params.lifetime = lifetime;
            params.drivecycle = drivecycle;
            return runCheck(input, measures, params, paramEntries, evidence, stateCap, output);
        }
        if (approx->parsed()) {
            return runApprox(input, measures, relErr, time, paramEntries, stateCap, output);
        }
        if (exportCmd->parsed()) {
            return runExport(input, ctmcFormat, paramEntries, stateCap, output);
        }
    } catch (dftsafe::UndefinedMeasureError const& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitUndefined;
    } catch (dftsafe::DftError const& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
