#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dftsafe/analysis.hpp"
#include "dftsafe/ctmc.hpp"
#include "dftsafe/dft.hpp"
#include "dftsafe/state_space.hpp"

namespace dftsafe {

struct MeasureParams {
    double time = 1.0;          // horizon of bounded measures
    double lifetime = 10000.0;  // hours
    double drivecycle = 1.0;    // hours
    AnalysisOptions analysis;
};

struct MeasureResult {
    std::string measure;
    double value = 0.0;
    /// 1 - value, present for probability measures only.
    std::optional<double> complement;
    /// Provenance of the minimizing state (MDR) or the undefinedness witness.
    std::optional<std::string> witness;
    std::string note;
    /// Horizon the value refers to, where applicable.
    std::optional<double> time;
};

/// Evaluates the nine safety measures on one immutable CTMC. Degraded states are
/// the operational states carrying the user-declared "degraded" atom; the failed
/// sink never counts as degraded.
class MeasureEngine {
   public:
    explicit MeasureEngine(Ctmc const& ctmc, AnalysisOptions const& options = {});

    MeasureResult reliability(double t, StateIndex from) const;
    MeasureResult afh(double lifetime, StateIndex from) const;
    MeasureResult mttf(StateIndex from) const;
    MeasureResult ffa(double t, StateIndex from) const;
    MeasureResult fwd(double t, StateIndex from) const;
    MeasureResult mtdf(StateIndex from) const;
    MeasureResult mdr(double t) const;
    MeasureResult flod(double t, double drivecycle, StateIndex from) const;
    MeasureResult silfo(double t, double drivecycle, StateIndex from) const;

    /// Dispatch by measure name (reliability, unreliability, afh, mttf, ffa, fwd,
    /// mtdf, mdr, flod, silfo). Throws UnknownElementError on unknown names.
    MeasureResult compute(std::string_view measure, MeasureParams const& params, StateIndex from) const;

    std::vector<StateIndex> const& degradedStates() const { return degraded_; }

   private:
    double boundedFailure(double t, StateIndex from) const;

    Ctmc const& ctmc_;
    AnalysisOptions options_;
    std::vector<char> failedSet_;
    std::vector<char> degradedSet_;
    std::vector<StateIndex> degraded_;
};

/// Builds the CTMC restricted by evidence and evaluates the measure from every
/// entry state; one result per entry state, in entry order.
std::vector<std::pair<StateIndex, MeasureResult>> withEvidence(Dft const& dft,
                                                               std::vector<ElementIndex> const& evidence,
                                                               std::string_view measure, MeasureParams const& params,
                                                               StateSpaceOptions options = {});

/// One row per valuation; the CTMC is rebuilt per row since rates change.
std::vector<std::pair<std::map<std::string, double>, MeasureResult>> sensitivitySweep(
    Dft const& dft, std::vector<std::map<std::string, double>> const& valuations, std::string_view measure,
    MeasureParams const& params, StateSpaceOptions options = {});

}  // namespace dftsafe
