// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "compacta/maps.hpp"

#include <memory>
#include <vector>

namespace compacta {

/// Expression tree for scalar functions on a metric space, built from
/// 1-Lipschitz atoms and rational scalings.  Every well-formed tree has a
/// finite Lipschitz bound, which is what lets a sound reference modulus be
/// synthesized mechanically.
struct FuncAst {
    enum class Op { Var, Const, Add, Sub, Abs, Min, Max, Scale, DistTo };

    Op op;
    std::vector<std::shared_ptr<const FuncAst>> args;
    Rat value;                 // Const: the constant; Scale: the factor
    size_t index = 0;          // Var: 0-based coordinate of the argument point
    std::vector<Rat> anchor;   // DistTo: coordinates of the anchor point
};

using AstPtr = std::shared_ptr<const FuncAst>;

AstPtr ast_var(size_t index = 0);
AstPtr ast_const(Rat value);
AstPtr ast_add(AstPtr a, AstPtr b);
AstPtr ast_sub(AstPtr a, AstPtr b);
AstPtr ast_abs(AstPtr a);
AstPtr ast_min(AstPtr a, AstPtr b);
AstPtr ast_max(AstPtr a, AstPtr b);
AstPtr ast_scale(Rat factor, AstPtr a);
AstPtr ast_dist_to(std::vector<Rat> anchor);

/// Checks arity, coordinate indices and anchor dimensions against the
/// domain.  Throws ValidationError / SpaceMismatch.
void validate_ast(const AstPtr& ast, const SpacePtr& domain);

/// Composed Lipschitz bound: atoms are 1-Lipschitz, constants 0, sums add,
/// lattice operations take the max, scalings multiply by |factor|.
Rat lipschitz_bound(const AstPtr& ast);

CReal eval_ast(const AstPtr& ast, const SpacePtr& domain, const Point& p);

/// The map with one scalar expression per codomain coordinate.
EffectiveMap ast_map(const SpacePtr& domain, const std::vector<AstPtr>& coords);

/// mu(K, eps) = eps / L with L the combined Lipschitz bound over the
/// coordinate expressions (1 if every coordinate is constant); sound by the
/// Lipschitz calculus.
UniformModulus synthesize_reference_modulus(const std::vector<AstPtr>& coords);

}  // namespace compacta
