// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "compacta/rat.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace compacta {

/// Constructive real: a precision-queryable oracle n |-> Rat with
/// |approx(n) - value| <= 2^-n for every integer n (negative n allowed,
/// giving bounds coarser than 1).  Queries are memoized, so repeated
/// queries at the same precision return the identical rational.
///
/// Every CReal in this library approximates one fixed real value, which
/// makes the regular-Cauchy law |approx(n) - approx(m)| <= 2^-n + 2^-m
/// automatic.
class CReal {
public:
    CReal() : CReal(of_rat(Rat(0))) {}

    /// Exact embedding: approx(n) == q at every precision.
    static CReal of_rat(Rat q);

    /// Wraps an oracle satisfying |fn(n) - value| <= 2^-n.  The wrapper
    /// queries fn at n+2 and rounds to the dyadic grid 2^-(n+2), which keeps
    /// denominators bounded by the queried precision.
    static CReal from_oracle(std::function<Rat(int)> fn);

    /// Same, but the oracle's answers are returned verbatim (used where an
    /// exact rational answer is part of the contract).
    static CReal from_exact_oracle(std::function<Rat(int)> fn);

    Rat approx(int n) const;

    /// Non-null iff this value is a known rational constant (then approx(n)
    /// returns exactly that rational at every n).  Used as a fast path; a
    /// null answer says nothing about the value.
    const Rat* exact_value() const;

    friend CReal operator+(const CReal& a, const CReal& b);
    friend CReal operator-(const CReal& a, const CReal& b);
    friend CReal operator-(const CReal& a);
    friend CReal abs(const CReal& a);
    friend CReal min(const CReal& a, const CReal& b);
    friend CReal max(const CReal& a, const CReal& b);
    /// q * x for rational q (general CReal multiplication is out of scope).
    friend CReal scale(const Rat& q, const CReal& x);
    /// x * x, using the a-priori bound |x| <= |approx(0)| + 1.
    friend CReal square(const CReal& x);

private:
    struct State {
        std::function<Rat(int)> fn;
        bool round = true;
        std::optional<Rat> constant;  // set iff the value is a known rational
        mutable std::map<int, Rat> memo;
        mutable std::mutex mu;
    };
    explicit CReal(std::shared_ptr<State> s) : state_(std::move(s)) {}
    std::shared_ptr<State> state_;
};

inline const Rat* CReal::exact_value() const {
    return state_->constant ? &*state_->constant : nullptr;
}

enum class Verdict { GreaterThanA, LessThanB };

/// The constructive comparison dichotomy: for rationals a < b, every real is
/// certified either > a or < b.  Queries x at the first precision n with
/// 2^-n < (b-a)/4 and compares against the midpoint.  The returned verdict
/// is always true of x; inside (a,b) either verdict may come back.
Verdict approx_compare(const CReal& x, const Rat& a, const Rat& b);

enum class ArithOp { Add, Sub, Neg, Abs, Min, Max, ScaleByRat };

/// Dispatcher form of the arithmetic above.  `scale_arg` is consulted only
/// for ScaleByRat.  Throws ValidationError on arity mismatch.
CReal creal_arith(ArithOp op, const std::vector<CReal>& args, const Rat& scale_arg = Rat(1));

}  // namespace compacta
