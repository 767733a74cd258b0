// SPDX-License-Identifier: Apache-2.0

#include "compacta/ast.hpp"

#include "compacta/errors.hpp"

#include <algorithm>

namespace compacta {

namespace {

AstPtr node(FuncAst n) { return std::make_shared<const FuncAst>(std::move(n)); }

const char* op_name(FuncAst::Op op) {
    switch (op) {
        case FuncAst::Op::Var: return "var";
        case FuncAst::Op::Const: return "const";
        case FuncAst::Op::Add: return "add";
        case FuncAst::Op::Sub: return "sub";
        case FuncAst::Op::Abs: return "abs";
        case FuncAst::Op::Min: return "min";
        case FuncAst::Op::Max: return "max";
        case FuncAst::Op::Scale: return "scale";
        case FuncAst::Op::DistTo: return "dist_to";
    }
    return "?";
}

size_t arity(FuncAst::Op op) {
    switch (op) {
        case FuncAst::Op::Var:
        case FuncAst::Op::Const:
        case FuncAst::Op::DistTo: return 0;
        case FuncAst::Op::Abs:
        case FuncAst::Op::Scale: return 1;
        default: return 2;
    }
}

}  // namespace

AstPtr ast_var(size_t index) {
    FuncAst n{FuncAst::Op::Var, {}, Rat(0), index, {}};
    return node(std::move(n));
}

AstPtr ast_const(Rat value) {
    FuncAst n{FuncAst::Op::Const, {}, std::move(value), 0, {}};
    return node(std::move(n));
}

AstPtr ast_add(AstPtr a, AstPtr b) {
    FuncAst n{FuncAst::Op::Add, {std::move(a), std::move(b)}, Rat(0), 0, {}};
    return node(std::move(n));
}

AstPtr ast_sub(AstPtr a, AstPtr b) {
    FuncAst n{FuncAst::Op::Sub, {std::move(a), std::move(b)}, Rat(0), 0, {}};
    return node(std::move(n));
}

AstPtr ast_abs(AstPtr a) {
    FuncAst n{FuncAst::Op::Abs, {std::move(a)}, Rat(0), 0, {}};
    return node(std::move(n));
}

AstPtr ast_min(AstPtr a, AstPtr b) {
    FuncAst n{FuncAst::Op::Min, {std::move(a), std::move(b)}, Rat(0), 0, {}};
    return node(std::move(n));
}

AstPtr ast_max(AstPtr a, AstPtr b) {
    FuncAst n{FuncAst::Op::Max, {std::move(a), std::move(b)}, Rat(0), 0, {}};
    return node(std::move(n));
}

AstPtr ast_scale(Rat factor, AstPtr a) {
    FuncAst n{FuncAst::Op::Scale, {std::move(a)}, std::move(factor), 0, {}};
    return node(std::move(n));
}

AstPtr ast_dist_to(std::vector<Rat> anchor) {
    FuncAst n{FuncAst::Op::DistTo, {}, Rat(0), 0, std::move(anchor)};
    return node(std::move(n));
}

void validate_ast(const AstPtr& ast, const SpacePtr& domain) {
    if (!ast) throw ValidationError("validate_ast: null node");
    if (ast->args.size() != arity(ast->op))
        throw ValidationError(std::string("validate_ast: wrong arity for ") + op_name(ast->op));
    switch (ast->op) {
        case FuncAst::Op::Var:
            if (ast->index >= static_cast<size_t>(domain->dim()))
                throw SpaceMismatch("validate_ast: var index out of range for " + domain->name());
            break;
        case FuncAst::Op::DistTo:
            if (static_cast<int>(ast->anchor.size()) != domain->dim())
                throw SpaceMismatch("validate_ast: dist_to anchor dimension mismatch for " +
                                    domain->name());
            break;
        default:
            break;
    }
    for (const auto& a : ast->args) validate_ast(a, domain);
}

Rat lipschitz_bound(const AstPtr& ast) {
    switch (ast->op) {
        case FuncAst::Op::Var:
        case FuncAst::Op::DistTo: return Rat(1);
        case FuncAst::Op::Const: return Rat(0);
        case FuncAst::Op::Add:
        case FuncAst::Op::Sub:
            return lipschitz_bound(ast->args[0]) + lipschitz_bound(ast->args[1]);
        case FuncAst::Op::Abs: return lipschitz_bound(ast->args[0]);
        case FuncAst::Op::Min:
        case FuncAst::Op::Max:
            return std::max(lipschitz_bound(ast->args[0]), lipschitz_bound(ast->args[1]));
        case FuncAst::Op::Scale: {
            Rat f = ast->value < 0 ? Rat(-ast->value) : ast->value;
            return Rat(f * lipschitz_bound(ast->args[0]));
        }
    }
    throw ValidationError("lipschitz_bound: unknown op");
}

CReal eval_ast(const AstPtr& ast, const SpacePtr& domain, const Point& p) {
    switch (ast->op) {
        case FuncAst::Op::Var: return p.coords[ast->index];
        case FuncAst::Op::Const: return CReal::of_rat(ast->value);
        case FuncAst::Op::Add:
            return eval_ast(ast->args[0], domain, p) + eval_ast(ast->args[1], domain, p);
        case FuncAst::Op::Sub:
            return eval_ast(ast->args[0], domain, p) - eval_ast(ast->args[1], domain, p);
        case FuncAst::Op::Abs: return abs(eval_ast(ast->args[0], domain, p));
        case FuncAst::Op::Min:
            return min(eval_ast(ast->args[0], domain, p), eval_ast(ast->args[1], domain, p));
        case FuncAst::Op::Max:
            return max(eval_ast(ast->args[0], domain, p), eval_ast(ast->args[1], domain, p));
        case FuncAst::Op::Scale: return scale(ast->value, eval_ast(ast->args[0], domain, p));
        case FuncAst::Op::DistTo: return domain->dist(p, rational_point(ast->anchor));
    }
    throw ValidationError("eval_ast: unknown op");
}

EffectiveMap ast_map(const SpacePtr& domain, const std::vector<AstPtr>& coords) {
    if (coords.empty()) throw ValidationError("ast_map: no coordinate expressions");
    for (const auto& c : coords) validate_ast(c, domain);
    SpacePtr codomain = coords.size() == 1 ? real_line()
                                           : real_box_space(static_cast<int>(coords.size()));
    std::vector<AstPtr> exprs = coords;
    SpacePtr dom = domain;
    return EffectiveMap(domain, codomain, [exprs, dom](const Point& p) {
        Point out;
        out.coords.reserve(exprs.size());
        for (const auto& e : exprs) out.coords.push_back(eval_ast(e, dom, p));
        return out;
    });
}

UniformModulus synthesize_reference_modulus(const std::vector<AstPtr>& coords) {
    Rat lip(0);
    for (const auto& c : coords) lip = std::max(lip, lipschitz_bound(c));
    if (lip == 0) lip = 1;
    return [lip](const Compact&, const Rat& eps) { return Rat(eps / lip); };
}

}  // namespace compacta
