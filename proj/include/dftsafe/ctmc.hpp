#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dftsafe {

using StateIndex = std::uint32_t;
inline constexpr StateIndex kNoState = UINT32_MAX;

/// Sparse labeled continuous-time Markov chain. States are dense indices;
/// transitions are sorted by target and carry positive rates.
struct Ctmc {
    StateIndex initial = 0;
    /// Analysis start states; more than one entry only when evidence was given.
    std::vector<StateIndex> entryStates;
    std::vector<std::vector<std::pair<StateIndex, double>>> transitions;
    std::vector<double> exitRate;
    /// Atom names; index 0 is always "failed".
    std::vector<std::string> atoms;
    /// Bit i set iff the state carries atoms[i].
    std::vector<std::uint64_t> labelMask;
    /// Human-readable provenance: failed basic events of the underlying marking.
    std::vector<std::string> stateInfo;
    /// The single absorbing sink all top-failed markings collapse into (kNoState if unreachable).
    StateIndex failedSink = kNoState;

    std::size_t numStates() const { return transitions.size(); }

    bool hasAtom(StateIndex state, std::size_t atom) const {
        return (labelMask[state] >> atom) & 1;
    }

    std::optional<std::size_t> atomIndex(std::string_view name) const {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (atoms[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::vector<char> statesWithAtom(std::size_t atom) const {
        std::vector<char> result(numStates(), 0);
        for (StateIndex s = 0; s < numStates(); ++s) {
            result[s] = hasAtom(s, atom) ? 1 : 0;
        }
        return result;
    }

    /// Operational states with no outgoing transition (fail-safe futures).
    std::vector<StateIndex> operationalAbsorbing() const {
        std::vector<StateIndex> result;
        for (StateIndex s = 0; s < numStates(); ++s) {
            if (transitions[s].empty() && s != failedSink) {
                result.push_back(s);
            }
        }
        return result;
    }
};

/// GraphViz rendering with state labels and transition rates.
std::string toDot(Ctmc const& ctmc);

/// Explicit transition list: one `src dst rate` line per transition, preceded by
/// `# state <index> <atoms...>` comment lines describing labels.
std::string toTransitionList(Ctmc const& ctmc);

}  // namespace dftsafe
