#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dftsafe/approximation.hpp"
#include "dftsafe/errors.hpp"
#include "dftsafe/measures.hpp"
#include "dftsafe/rewriter.hpp"
#include "dftsafe/scenario.hpp"
#include "dftsafe/scenario_parser.hpp"
#include "dftsafe/state_space.hpp"
#include "dftsafe/text_format.hpp"

namespace py = pybind11;
using namespace dftsafe;

namespace {

Ctmc buildFromPython(Dft const& dft, std::size_t stateCap, std::map<std::string, double> const& params,
                     std::vector<std::string> const& evidence) {
    StateSpaceOptions options;
    options.stateCap = stateCap;
    options.valuation = params;
    for (std::string const& name : evidence) {
        options.evidence.push_back(dft.require(name));
    }
    return buildCtmc(dft, options);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dynamic fault tree synthesis, CTMC translation, and safety measures";

    // Translators run in reverse registration order: the base class first, so
    // the derived registrations below take precedence.
    py::register_exception<DftError>(m, "DftError", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<UndefinedMeasureError>(m, "UndefinedMeasureError", PyExc_ArithmeticError);
    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);

    py::class_<Dft>(m, "Dft")
        .def(py::init<>())
        .def("__len__", &Dft::size)
        .def("name", &Dft::name)
        .def("top", &Dft::top)
        .def("validate",
             [](Dft const& dft) {
                 std::vector<std::pair<std::string, std::string>> out;
                 for (Diagnostic const& d : dft.validate()) {
                     out.push_back({d.element, d.message});
                 }
                 return out;
             })
        .def("serialize", [](Dft const& dft) { return serializeDft(dft); });

    m.def("parse_dft", [](std::string const& text) { return parseDft(text); });
    m.def("rewrite", &rewrite);
    m.def("synthesize_scenario",
          [](std::string const& document) { return synthesizeScenario(parseScenario(document)); });

    py::class_<Ctmc>(m, "Ctmc")
        .def_readonly("initial", &Ctmc::initial)
        .def_readonly("entry_states", &Ctmc::entryStates)
        .def_readonly("atoms", &Ctmc::atoms)
        .def("__len__", &Ctmc::numStates)
        .def("exit_rate", [](Ctmc const& c, StateIndex s) { return c.exitRate.at(s); })
        .def("transitions", [](Ctmc const& c, StateIndex s) { return c.transitions.at(s); })
        .def("has_atom", [](Ctmc const& c, StateIndex s, std::string const& atom) {
            auto index = c.atomIndex(atom);
            return index && c.hasAtom(s, *index);
        })
        .def("to_dot", [](Ctmc const& c) { return toDot(c); })
        .def("to_transition_list", [](Ctmc const& c) { return toTransitionList(c); });

    m.def("build_ctmc", &buildFromPython, py::arg("dft"), py::arg("state_cap") = std::size_t{10'000'000},
          py::arg("params") = std::map<std::string, double>{}, py::arg("evidence") = std::vector<std::string>{});

    py::class_<MeasureResult>(m, "MeasureResult")
        .def_readonly("measure", &MeasureResult::measure)
        .def_readonly("value", &MeasureResult::value)
        .def_readonly("complement", &MeasureResult::complement)
        .def_readonly("witness", &MeasureResult::witness)
        .def_readonly("note", &MeasureResult::note)
        .def_readonly("time", &MeasureResult::time);

    m.def(
        "compute_measure",
        [](Dft const& dft, std::string const& measure, double time, double lifetime, double drivecycle,
           std::map<std::string, double> const& params, std::size_t stateCap) {
            Ctmc ctmc = buildFromPython(dft, stateCap, params, {});
            MeasureParams measureParams;
            measureParams.time = time;
            measureParams.lifetime = lifetime;
            measureParams.drivecycle = drivecycle;
            return MeasureEngine(ctmc).compute(measure, measureParams, ctmc.initial);
        },
        py::arg("dft"), py::arg("measure"), py::arg("time") = 1.0, py::arg("lifetime") = 10000.0,
        py::arg("drivecycle") = 1.0, py::arg("params") = std::map<std::string, double>{},
        py::arg("state_cap") = std::size_t{10'000'000});

    m.def(
        "compute_measure_with_evidence",
        [](Dft const& dft, std::vector<std::string> const& evidence, std::string const& measure, double time,
           double lifetime, double drivecycle, std::map<std::string, double> const& params, std::size_t stateCap) {
            StateSpaceOptions options;
            options.stateCap = stateCap;
            options.valuation = params;
            std::vector<ElementIndex> elements;
            for (std::string const& name : evidence) {
                elements.push_back(dft.require(name));
            }
            MeasureParams measureParams;
            measureParams.time = time;
            measureParams.lifetime = lifetime;
            measureParams.drivecycle = drivecycle;
            std::vector<MeasureResult> results;
            for (auto& [state, result] : withEvidence(dft, elements, measure, measureParams, options)) {
                results.push_back(std::move(result));
            }
            return results;
        },
        py::arg("dft"), py::arg("evidence"), py::arg("measure"), py::arg("time") = 1.0,
        py::arg("lifetime") = 10000.0, py::arg("drivecycle") = 1.0,
        py::arg("params") = std::map<std::string, double>{}, py::arg("state_cap") = std::size_t{10'000'000});

    py::class_<ApproxIteration>(m, "ApproxIteration")
        .def_readonly("iteration", &ApproxIteration::iteration)
        .def_readonly("seconds", &ApproxIteration::seconds)
        .def_readonly("states", &ApproxIteration::states)
        .def_readonly("lower", &ApproxIteration::lower)
        .def_readonly("upper", &ApproxIteration::upper);

    py::class_<BoundInterval>(m, "BoundInterval")
        .def_readonly("lower", &BoundInterval::lower)
        .def_readonly("upper", &BoundInterval::upper)
        .def_readonly("states_explored", &BoundInterval::statesExplored)
        .def_readonly("iterations", &BoundInterval::iterations)
        .def_readonly("converged", &BoundInterval::converged)
        .def_readonly("trace", &BoundInterval::trace);

    m.def(
        "approximate_unreliability",
        [](Dft const& dft, double time, double relErr, std::map<std::string, double> const& params,
           std::size_t stateCap) {
            ApproxOptions options;
            options.relativeError = relErr;
            options.valuation = params;
            options.stateCap = stateCap;
            return approximateUnreliability(dft, time, options);
        },
        py::arg("dft"), py::arg("time"), py::arg("rel_err") = 1e-2,
        py::arg("params") = std::map<std::string, double>{}, py::arg("state_cap") = std::size_t{10'000'000});

    m.def(
        "approximate_mttf",
        [](Dft const& dft, double relErr, std::map<std::string, double> const& params, std::size_t stateCap) {
            ApproxOptions options;
            options.relativeError = relErr;
            options.valuation = params;
            options.stateCap = stateCap;
            return approximateMttf(dft, options);
        },
        py::arg("dft"), py::arg("rel_err") = 1e-2, py::arg("params") = std::map<std::string, double>{},
        py::arg("state_cap") = std::size_t{10'000'000});
}
