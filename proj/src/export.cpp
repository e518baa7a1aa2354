#include <charconv>
#include <sstream>

#include "dftsafe/ctmc.hpp"

namespace dftsafe {

namespace {

std::string formatRate(double value) {
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, end);
}

std::string atomList(Ctmc const& ctmc, StateIndex state) {
    std::string result;
    for (std::size_t a = 0; a < ctmc.atoms.size(); ++a) {
        if (ctmc.hasAtom(state, a)) {
            if (!result.empty()) {
                result += ",";
            }
            result += ctmc.atoms[a];
        }
    }
    return result;
}

}  // namespace

std::string toDot(Ctmc const& ctmc) {
    std::ostringstream out;
    out << "digraph ctmc {\n";
    out << "  rankdir=LR;\n";
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        out << "  s" << s << " [label=\"" << s << ": " << ctmc.stateInfo[s];
        std::string atoms = atomList(ctmc, s);
        if (!atoms.empty()) {
            out << "\\n{" << atoms << "}";
        }
        out << "\"";
        if (s == ctmc.initial) {
            out << ", shape=doublecircle";
        }
        out << "];\n";
    }
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        for (auto const& [target, rate] : ctmc.transitions[s]) {
            out << "  s" << s << " -> s" << target << " [label=\"" << formatRate(rate) << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string toTransitionList(Ctmc const& ctmc) {
    std::ostringstream out;
    out << "# states " << ctmc.numStates() << "\n";
    out << "# initial " << ctmc.initial << "\n";
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        std::string atoms = atomList(ctmc, s);
        out << "# state " << s << " " << ctmc.stateInfo[s];
        if (!atoms.empty()) {
            out << " {" << atoms << "}";
        }
        out << "\n";
    }
    for (StateIndex s = 0; s < ctmc.numStates(); ++s) {
        for (auto const& [target, rate] : ctmc.transitions[s]) {
            out << s << " " << target << " " << formatRate(rate) << "\n";
        }
    }
    return out.str();
}

}  // namespace dftsafe
