// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace compacta {

/// Arbitrary-precision rational, always reduced, denominator > 0.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

/// 2^n for any integer n (negative n gives a fraction).
Rat pow2(int n);

/// Smallest n (any sign) with 2^-n < q.  Requires q > 0.
int min_n_pow2_less(const Rat& q);

/// Smallest n (any sign) with 2^-n <= q.  Requires q > 0.
int min_n_pow2_leq(const Rat& q);

/// Nearest multiple of 2^-k (ties away from zero).  |result - q| <= 2^-k-1.
Rat round_dyadic(const Rat& q, int k);

/// "p/q" (or plain "p") rendering without any decimal loss.
std::string rat_to_string(const Rat& q);

/// Accepts "p", "p/q", and decimal literals like "-0.25".
Rat rat_from_string(const std::string& s);

/// Decimal rendering with `digits` places, rounded toward zero.
std::string rat_to_decimal(const Rat& q, int digits);

}  // namespace compacta
