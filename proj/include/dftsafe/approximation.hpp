#pragma once

#include <cstddef>
#include <map>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "dftsafe/analysis.hpp"
#include "dftsafe/ctmc.hpp"
#include "dftsafe/dft.hpp"
#include "dftsafe/marking.hpp"

namespace dftsafe {

/// Priority-driven partial exploration of the failure state space. States are
/// expanded in decreasing order of their embedded discovery probability (the
/// product of branch probabilities along the first path that reached them, ties
/// broken towards lower state index). Unexpanded frontier states are resolved
/// pessimistically or optimistically to obtain guaranteed bounds.
class PartialSpace {
   public:
    explicit PartialSpace(Dft const& dft, std::map<std::string, double> const& valuationOverrides = {},
                          std::size_t stateCap = 10'000'000);

    /// Expands frontier states until `exploredBudget` states are expanded, the
    /// space is exhausted, or the state cap is hit.
    void refine(std::size_t exploredBudget);

    bool exhausted() const { return queue_.empty(); }
    std::size_t numExplored() const { return explored_; }
    std::size_t numStates() const { return nodes_.size(); }

    /// Frontier states count as failed: over-approximates failure probability
    /// and under-approximates time to failure.
    Ctmc pessimisticCtmc() const;
    /// Frontier states are absorbing and operational: under-approximates
    /// failure probability.
    Ctmc optimisticCtmc() const;
    /// Every frontier state is extended by a chain that deterministically fails
    /// the remaining basic events one at a time at their current effective
    /// rates. Failure in the real process happens no later than along this
    /// chain, so expected times to failure are over-approximated. Throws
    /// UndefinedMeasureError when a frontier state cannot be completed to a
    /// failure (a fail-safe future is possible).
    Ctmc mttfUpperCtmc() const;

   private:
    struct Node {
        std::vector<ElementIndex> order;
        double priority = 0.0;
        bool expanded = false;
        std::vector<std::pair<StateIndex, double>> row;
        double exit = 0.0;
    };

    struct QueueEntry {
        double priority;
        StateIndex index;

        bool operator<(QueueEntry const& other) const {
            if (priority != other.priority) {
                return priority < other.priority;
            }
            return index > other.index;
        }
    };

    StateIndex discover(Marking const& marking, double priority);
    void expand(StateIndex index);
    Ctmc skeleton() const;

    Dft const& dft_;
    MarkingEvaluator evaluator_;
    std::map<std::string, double> valuation_;
    std::size_t stateCap_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, StateIndex> bySignature_;
    std::priority_queue<QueueEntry> queue_;
    StateIndex sink_ = kNoState;
    std::size_t explored_ = 0;
};

struct ApproxIteration {
    std::size_t iteration = 0;
    double seconds = 0.0;
    std::size_t states = 0;
    double lower = 0.0;
    double upper = 0.0;
};

struct BoundInterval {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t statesExplored = 0;
    std::size_t iterations = 0;
    /// False when the state cap was hit before the requested precision.
    bool converged = false;
    std::vector<ApproxIteration> trace;
};

struct ApproxOptions {
    /// Stop when upper - lower <= relativeError * lower.
    double relativeError = 1e-2;
    std::size_t initialBudget = 1024;
    std::size_t stateCap = 10'000'000;
    std::map<std::string, double> valuation;
    AnalysisOptions analysis;
};

/// Sound bounds on the probability of system failure within time t.
BoundInterval approximateUnreliability(Dft const& dft, double t, ApproxOptions const& options = {});

/// Sound bounds on the mean time to failure. Throws UndefinedMeasureError when
/// a fail-safe future is encountered (the exact MTTF would be undefined too).
BoundInterval approximateMttf(Dft const& dft, ApproxOptions const& options = {});

}  // namespace dftsafe
