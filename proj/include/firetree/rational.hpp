#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace firetree {

// Exact rational scalar used throughout the LP layer. GMP keeps arithmetic
// exact; nothing in this project ever rounds through floating point.
using Rat = mpq_class;
using BigInt = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "p/q" and plain decimals like "0.25". Decimals are converted
// exactly (0.25 -> 1/4), so CLI users may write either form.
Rat parse_rat(const std::string& s);

// Canonical "p" or "p/q" rendering, matching what parse_rat accepts.
std::string rat_str(const Rat& r);

long long rat_floor(const Rat& r);
long long rat_ceil(const Rat& r);

Rat rat_pow(const Rat& base, unsigned long e);

// floor(log2(m)) for m >= 1.
int ilog2_floor(unsigned long m);

// floor(log^(k) m) with log^(0) m = m, computed with nested integer floors.
// Nesting floors is exact here: floor(log2(floor(y))) == floor(log2(y)) for
// y >= 1 because no power of two can lie strictly between floor(y) and y.
// Iterates that would go below 1 clamp to 0.
int ilog_iter_floor(unsigned long m, int k);

// Exact comparison b <= log2(m) for b = p/q >= 0, via 2^p <= m^q in integers.
bool le_log2(const Rat& b, unsigned long m);
// Exact comparison b < log2(m).
bool lt_log2(const Rat& b, unsigned long m);

}  // namespace firetree
