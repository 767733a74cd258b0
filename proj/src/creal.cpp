// SPDX-License-Identifier: Apache-2.0

#include "compacta/creal.hpp"

#include "compacta/errors.hpp"

#include <algorithm>

namespace compacta {

CReal CReal::of_rat(Rat q) {
    auto s = std::make_shared<State>();
    s->round = false;
    s->constant = std::move(q);
    return CReal(std::move(s));
}

CReal CReal::from_oracle(std::function<Rat(int)> fn) {
    auto s = std::make_shared<State>();
    s->fn = std::move(fn);
    s->round = true;
    return CReal(std::move(s));
}

CReal CReal::from_exact_oracle(std::function<Rat(int)> fn) {
    auto s = std::make_shared<State>();
    s->fn = std::move(fn);
    s->round = false;
    return CReal(std::move(s));
}

Rat CReal::approx(int n) const {
    if (state_->constant) return *state_->constant;
    {
        std::lock_guard<std::mutex> lock(state_->mu);
        auto it = state_->memo.find(n);
        if (it != state_->memo.end()) return it->second;
    }
    // fn is pure, so computing outside the lock is safe; both racers get
    // the same answer.
    Rat value = state_->round ? round_dyadic(state_->fn(n + 2), n + 2) : state_->fn(n);
    std::lock_guard<std::mutex> lock(state_->mu);
    auto [it, fresh] = state_->memo.emplace(n, std::move(value));
    (void)fresh;
    return it->second;
}

CReal operator+(const CReal& a, const CReal& b) {
    const Rat *x = a.exact_value(), *y = b.exact_value();
    if (x && y) return CReal::of_rat(Rat(*x + *y));
    return CReal::from_oracle([a, b](int n) { return a.approx(n + 1) + b.approx(n + 1); });
}

CReal operator-(const CReal& a, const CReal& b) {
    const Rat *x = a.exact_value(), *y = b.exact_value();
    if (x && y) return CReal::of_rat(Rat(*x - *y));
    return CReal::from_oracle([a, b](int n) { return a.approx(n + 1) - b.approx(n + 1); });
}

CReal operator-(const CReal& a) {
    if (const Rat* x = a.exact_value()) return CReal::of_rat(Rat(-*x));
    return CReal::from_oracle([a](int n) { return Rat(-a.approx(n)); });
}

CReal abs(const CReal& a) {
    if (const Rat* x = a.exact_value()) return CReal::of_rat(*x < 0 ? Rat(-*x) : *x);
    return CReal::from_oracle([a](int n) {
        Rat v = a.approx(n);
        return v < 0 ? Rat(-v) : v;
    });
}

CReal min(const CReal& a, const CReal& b) {
    const Rat *x = a.exact_value(), *y = b.exact_value();
    if (x && y) return CReal::of_rat(std::min(*x, *y));
    return CReal::from_oracle([a, b](int n) { return std::min(a.approx(n), b.approx(n)); });
}

CReal max(const CReal& a, const CReal& b) {
    const Rat *x = a.exact_value(), *y = b.exact_value();
    if (x && y) return CReal::of_rat(std::max(*x, *y));
    return CReal::from_oracle([a, b](int n) { return std::max(a.approx(n), b.approx(n)); });
}

CReal scale(const Rat& q, const CReal& x) {
    if (q == 0) return CReal::of_rat(Rat(0));
    if (const Rat* v = x.exact_value()) return CReal::of_rat(Rat(q * *v));
    Rat mag = q < 0 ? Rat(-q) : q;
    int shift = std::max(0, min_n_pow2_leq(Rat(1) / mag));  // 2^shift >= |q|
    // |q| * 2^-(n+shift) <= 2^-n
    return CReal::from_oracle([q, x, shift](int n) { return Rat(q * x.approx(n + shift)); });
}

CReal square(const CReal& x) {
    if (const Rat* v = x.exact_value()) return CReal::of_rat(Rat(*v * *v));
    return CReal::from_oracle([x](int n) {
        Rat b = x.approx(0);
        if (b < 0) b = -b;
        b += 1;  // |x| <= b
        // |a^2 - x^2| <= 2^-p * (2b + 2^-p) <= 2^-n for p = n + s
        int s = std::max(0, min_n_pow2_leq(Rat(1) / (2 * b + 1)));
        Rat a = x.approx(std::max(n, 0) + s);
        return Rat(a * a);
    });
}

Verdict approx_compare(const CReal& x, const Rat& a, const Rat& b) {
    if (!(a < b)) throw ValidationError("approx_compare: requires a < b");
    int n = min_n_pow2_less(Rat((b - a) / 4));
    return x.approx(n) > (a + b) / 2 ? Verdict::GreaterThanA : Verdict::LessThanB;
}

CReal creal_arith(ArithOp op, const std::vector<CReal>& args, const Rat& scale_arg) {
    auto need = [&](size_t k) {
        if (args.size() != k) throw ValidationError("creal_arith: arity mismatch");
    };
    switch (op) {
        case ArithOp::Add: need(2); return args[0] + args[1];
        case ArithOp::Sub: need(2); return args[0] - args[1];
        case ArithOp::Neg: need(1); return -args[0];
        case ArithOp::Abs: need(1); return abs(args[0]);
        case ArithOp::Min: need(2); return min(args[0], args[1]);
        case ArithOp::Max: need(2); return max(args[0], args[1]);
        case ArithOp::ScaleByRat: need(1); return scale(scale_arg, args[0]);
    }
    throw ValidationError("creal_arith: unknown op");
}

}  // namespace compacta
