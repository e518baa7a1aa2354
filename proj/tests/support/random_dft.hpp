#pragma once

#include "dftsafe/dft.hpp"

namespace dftsafe::tests {

struct RandomDftOptions {
    unsigned maxBasicEvents = 7;
    bool allowTransient = true;
    bool allowDependencies = true;
    /// Adds a "degraded" label over a random disjunction of basic events.
    bool addDegradedLabel = false;
};

/// Deterministic pseudo-random DFT: a gate tree (AND/OR/VOT/PAND/SPARE) over
/// 3..maxBasicEvents basic events with rates in [5e-4, 2e-3], optional
/// dormancies, and optionally one SEQ and one FDEP. Always valid.
Dft randomDft(unsigned seed, RandomDftOptions const& options = {});

}  // namespace dftsafe::tests
