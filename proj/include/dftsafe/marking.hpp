#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dftsafe/dft.hpp"

namespace dftsafe {

/// Dynamic status of a DFT after an ordered failure sequence: which elements have
/// failed (and in which step), which PANDs are fail-safe, and which elements are active.
class Marking {
   public:
    std::vector<ElementIndex> const& failedBasicEvents() const { return failedOrder_; }
    bool isFailed(ElementIndex element) const { return failStep_[element] != 0; }
    bool isFailSafe(ElementIndex element) const { return failSafe_[element] != 0; }
    bool isActive(ElementIndex element) const { return active_[element] != 0; }
    std::uint32_t failureStep(ElementIndex element) const { return failStep_[element]; }

    /// Canonical signature: two markings with equal keys have indistinguishable futures.
    /// Failure order is dropped; the (failed, fail-safe, active) sets determine all
    /// remaining PAND/SEQ/SPARE obligations.
    std::vector<std::uint64_t> signatureKey() const;

   private:
    friend class MarkingEvaluator;

    std::vector<std::uint32_t> failStep_;  // 0 = operational
    std::vector<char> failSafe_;
    std::vector<char> active_;
    std::vector<ElementIndex> failedOrder_;  // basic events in failure order
    std::uint32_t stepCounter_ = 0;
};

/// Reference semantics: failing basic events one at a time with immediate FDEP
/// cascades (in dependency-declaration order), PAND order bookkeeping, and
/// SPARE/ADEP activation propagation.
class MarkingEvaluator {
   public:
    /// The DFT must outlive the evaluator and be valid.
    explicit MarkingEvaluator(Dft const& dft);

    Dft const& dft() const { return dft_; }

    Marking initialMarking() const;

    /// Fails `be` (no-op when already failed, e.g. through an earlier cascade),
    /// then applies FDEP cascades to the fixpoint.
    /// Throws SeqViolationError when a left SEQ sibling is still operational,
    /// UnknownElementError when `be` is not a basic event of the DFT.
    void failBasicEvent(Marking& marking, ElementIndex be) const;

    /// Replays a cascade-resolved failure order as previously recorded in
    /// Marking::failedBasicEvents(). No FDEP cascades are re-applied: the order
    /// already lists every cascaded event. Reproduces the original marking exactly.
    Marking replayFailureOrder(std::span<ElementIndex const> order) const;

    bool isSeqBlocked(Marking const& marking, ElementIndex be) const;
    bool topFailed(Marking const& marking) const { return marking.isFailed(dft_.top()); }

    /// Currently used child of a SPARE: the leftmost operational child, kNoElement if all failed.
    ElementIndex spareUsing(Marking const& marking, ElementIndex spare) const;

    /// Effective failure rates of all operational, non-dummy, non-blocked basic events
    /// under a total valuation; inactive events are scaled by their dormancy; zero-rate
    /// entries are omitted. Sorted by element index. Transient events are included.
    std::vector<std::pair<ElementIndex, double>> enabledFailures(Marking const& marking,
                                                                 std::map<std::string, double> const& valuation) const;

   private:
    void failInternal(Marking& marking, ElementIndex be) const;
    void updateGates(Marking& marking) const;
    void recomputeActivation(Marking& marking) const;
    void applyCascades(Marking& marking) const;

    Dft const& dft_;
    std::vector<ElementIndex> gateTopo_;                                    // children before parents
    std::vector<std::vector<std::pair<ElementIndex, std::size_t>>> seqOf_;  // BE -> (SEQ gate, position)
    std::vector<ElementIndex> fdeps_;                                       // declaration order
    std::vector<std::vector<ElementIndex>> adepsBySource_;                  // element -> ADEPs it triggers
};

/// Marking after failing the given basic events in order, starting from the initial marking.
Marking evaluateMarking(MarkingEvaluator const& evaluator, std::span<ElementIndex const> sequence);

}  // namespace dftsafe
