// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "compacta/maps.hpp"

#include <string>

namespace compacta {

/// A compact carrying the invariants of the refinement class at (n, eps):
/// it sits below the base compact, still contains every pair witnessing
/// oscillation above 2*eps at scale 2^-n, and each of its members has a
/// nearby base member (within 2^-n+4) whose f-value is at least eps below
/// the supremum of f over the base compact.  Certificates are only built by
/// this module's constructors, which guarantee the invariants.
struct ClassCertificate {
    int n;
    Rat eps;
    Compact compact;
    std::string provenance;
};

/// One refinement: from a certificate at (n, eps) to one at (n+1, eps),
/// moving the compact by less than 2^-n+5.  Splits the base compact's net
/// into balls, keeps high-oscillation pieces, collapses low-oscillation
/// pieces to a single verified low point.
ClassCertificate refine_step(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                             const ClassCertificate& cert, int budget = 64);

/// A delta valid near the peak: pairs within delta whose first element maps
/// above sup - eps/2 have f-values within 2*eps of each other.
Rat peak_modulus(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                 const Rat& eps, int budget = 64);

/// One node of the oscillation-induction recursion, reported as the node
/// completes: oscillation level, number of ball pieces, how many were
/// recursed into, and the kappa scale (0 at base-case nodes).
struct TraceNode {
    int depth;
    int level;
    size_t pieces;
    size_t recursed;
    Rat kappa;
};
using TraceSink = std::function<void(const TraceNode&)>;

/// Full uniform-continuity modulus for a real-valued map, by induction on
/// the oscillation of f over the compact measured in steps of eps/60.
Rat uniform_modulus_real(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                         const Rat& eps, int budget = 64, const TraceSink& trace = nullptr);

/// General codomain: reduce to the real-valued case through the distance
/// functionals to an eps/3-net of the image.
Rat uniform_modulus(const EffectiveMap& f, const ImageOracle& pi_f, const Compact& k,
                    const Rat& eps, int budget = 64, const TraceSink& trace = nullptr);

}  // namespace compacta
