#pragma once

#include "dftsafe/dft.hpp"

namespace dftsafe {

/// Semantics-preserving simplification, applied to a fixpoint:
///   R1  flatten OR-of-OR and AND-of-AND (removing duplicate children)
///   R2  drop single-child AND/OR/VOT gates
///   R3  normalize VOT(1 of n) -> OR and VOT(n of n) -> AND
///   R4  drop FDEPs whose trigger's failure already implies top failure
///       through a pure OR/VOT(1) path
///   R5  drop elements that cannot influence the top element or any label
/// Elements referenced by labels are never removed; PAND/SEQ/SPARE ordering and
/// dormancy are never touched. The result is valid and rewrite is idempotent.
Dft rewrite(Dft const& dft);

}  // namespace dftsafe
