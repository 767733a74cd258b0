// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "compacta/compact.hpp"

namespace compacta {

/// An everywhere-defined map between spaces, given as a point oracle.
/// Totality and extensionality are the caller's claim; they are checked
/// post hoc by soundness sampling, never decided here.
struct EffectiveMap {
    SpacePtr domain;
    SpacePtr codomain;
    std::function<Point(const Point&)> apply;

    EffectiveMap(SpacePtr dom, SpacePtr cod, std::function<Point(const Point&)> fn);
};

/// delta(K, eps) > 0 such that members of K closer than delta map within eps.
using UniformModulus = std::function<Rat(const Compact&, const Rat&)>;

/// The operator Pi_f: sends a compact of the domain to the compact whose
/// member set is the closure of the f-image of the member set.  Reified as
/// data because preservation of precompactness is a hypothesis, not a
/// decidable property of f.
using ImageOracle = std::function<Compact(const Compact&)>;

UniformModulus identity_modulus();

/// Forward half of the main equivalence: a sound modulus makes the f-image
/// sequence of nets fundamental.  net(n) = pointwise image of net_K(m) with
/// 2^-m <= mu(K, 2^-(n+1)) / 2.
Compact image_compact(const EffectiveMap& f, const UniformModulus& mu, const Compact& k);

/// The standard way tests manufacture an honest Pi_f and then hide mu.
ImageOracle make_image_oracle(const EffectiveMap& f, const UniformModulus& mu);

/// Finds a member x of K with dist(f(x), y) < eps, assuming y lies in the
/// closure of the image of the member set.  Budgeted verified search over
/// ever-finer nets; BudgetExceeded signals an unverified precondition.
Point find_point_near_value(const EffectiveMap& f, const Compact& k, const Point& y,
                            const Rat& eps, int budget = 64);

/// phi(y) = dist(y, anchor): 1-Lipschitz into the real line, so it carries
/// the identity modulus.
EffectiveMap distance_functional(const SpacePtr& space, const Point& anchor);

/// Oracle for phi o f from an oracle for f, phi 1-Lipschitz into R:
/// pi(K) = image_compact(phi, identity, Pi_f(K)).  Valid because closure
/// commutes with uniformly continuous images.
ImageOracle derive_image_oracle(const EffectiveMap& phi, const ImageOracle& pi_f);

}  // namespace compacta
