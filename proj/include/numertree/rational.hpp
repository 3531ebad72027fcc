#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace numertree {

// Exact arithmetic everywhere; no floating point in the core.
using Int = mpz_class;
using Rat = mpq_class;

// Parses "num/den" or the integer shorthand "num". The result is canonical
// (gcd 1, positive denominator, zero is 0/1).
Rat rat_parse(const std::string& s);

// Canonical text form: "num/den", integers without the "/1".
std::string rat_str(const Rat& r);

std::string int_str(const Int& n);
Int int_parse(const std::string& s);

bool fits_uint64(const Int& n);
std::uint64_t to_uint64(const Int& n);

}  // namespace numertree
