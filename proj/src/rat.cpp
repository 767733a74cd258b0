// SPDX-License-Identifier: Apache-2.0

#include "compacta/rat.hpp"

#include "compacta/errors.hpp"

#include <climits>
#include <sstream>
#include <vector>

namespace compacta {

namespace {

Rat pow2_slow(int n) {
    Int p = Int(1) << (n >= 0 ? n : -n);
    return n >= 0 ? Rat(p) : Rat(1, p);
}

}  // namespace

Rat pow2(int n) {
    constexpr int kTableHalf = 160;
    static const std::vector<Rat> table = [] {
        std::vector<Rat> t;
        t.reserve(2 * kTableHalf + 1);
        for (int i = -kTableHalf; i <= kTableHalf; ++i) t.push_back(pow2_slow(i));
        return t;
    }();
    if (n >= -kTableHalf && n <= kTableHalf) return table[n + kTableHalf];
    return pow2_slow(n);
}

int min_n_pow2_less(const Rat& q) {
    if (q <= 0) throw ValidationError("min_n_pow2_less: argument must be positive");
    // first estimate from bit lengths of num/den, then fix up
    long bn = msb(Int(numerator(q)) < 0 ? Int(-numerator(q)) : Int(numerator(q)));
    long bd = msb(Int(denominator(q)));
    int n = static_cast<int>(bd - bn);
    while (pow2(-n) >= q) ++n;
    while (n > INT_MIN + 1 && pow2(-(n - 1)) < q) --n;
    return n;
}

int min_n_pow2_leq(const Rat& q) {
    if (q <= 0) throw ValidationError("min_n_pow2_leq: argument must be positive");
    int n = min_n_pow2_less(q);
    if (pow2(-(n - 1)) <= q) --n;
    return n;
}

Rat round_dyadic(const Rat& q, int k) {
    bool neg = q < 0;
    Rat scaled = (neg ? Rat(-q) : q) * pow2(k);
    Int num(numerator(scaled)), den(denominator(scaled));
    Int r = (2 * num + den) / (2 * den);  // floor(scaled + 1/2), scaled >= 0
    Rat out = Rat(r) * pow2(-k);
    return neg ? Rat(-out) : out;
}

std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    if (denominator(q) == 1) {
        os << numerator(q);
    } else {
        os << numerator(q) << "/" << denominator(q);
    }
    return os.str();
}

Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Int num(s.substr(0, slash));
            Int den(s.substr(slash + 1));
            if (den == 0) throw ValidationError("rational with zero denominator: " + s);
            return Rat(num, den);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rat(Int(s));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        int frac = static_cast<int>(s.size() - dot - 1);
        Int den = 1;
        for (int i = 0; i < frac; ++i) den *= 10;
        return Rat(Int(digits), den);
    } catch (const std::exception& e) {
        throw ValidationError("cannot parse rational '" + s + "': " + e.what());
    }
}

std::string rat_to_decimal(const Rat& q, int digits) {
    Int den = 1;
    for (int i = 0; i < digits; ++i) den *= 10;
    Int scaled = Int(numerator(q) * den / denominator(q));  // truncates toward zero
    bool neg = scaled < 0;
    Int mag = neg ? Int(-scaled) : scaled;
    std::ostringstream os;
    os << mag;
    std::string body = os.str();
    if (static_cast<int>(body.size()) <= digits) {
        body = std::string(digits + 1 - body.size(), '0') + body;
    }
    body.insert(body.size() - digits, digits > 0 ? "." : "");
    return (neg ? "-" : "") + body;
}

}  // namespace compacta
