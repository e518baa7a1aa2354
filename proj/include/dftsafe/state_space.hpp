#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dftsafe/ctmc.hpp"
#include "dftsafe/dft.hpp"
#include "dftsafe/marking.hpp"

namespace dftsafe {

struct StateSpaceOptions {
    std::size_t stateCap = 10'000'000;
    /// Basic events assumed already failed; every permutation must be SEQ-legal.
    std::vector<ElementIndex> evidence;
    /// Overrides of the DFT's declared parameter defaults.
    std::map<std::string, double> valuation;
};

/// Exhaustive breadth-first exploration of all failure interleavings, merging
/// markings with equal canonical signatures and collapsing all top-failed
/// markings into one absorbing failed sink. Transient faults contribute a
/// transition only when fatal. Deterministic: fixed iteration orders throughout.
Ctmc buildCtmc(Dft const& dft, StateSpaceOptions const& options = {});

/// Fatal transient transitions out of an operational marking: one (BE, rate) entry
/// per active transient BE whose cascaded failure fails the top-level element.
/// Non-fatal transient faults vanish and contribute nothing.
std::vector<std::pair<ElementIndex, double>> transientTransitions(MarkingEvaluator const& evaluator,
                                                                  Marking const& marking,
                                                                  std::map<std::string, double> const& valuation);

}  // namespace dftsafe
