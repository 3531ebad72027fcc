#include "numertree/rational.hpp"

#include "numertree/errors.hpp"

namespace numertree {

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal");
  mpq_t raw;
  mpq_init(raw);
  if (mpq_set_str(raw, s.c_str(), 10) != 0) {
    mpq_clear(raw);
    throw ParseError("malformed rational literal: '" + s + "'");
  }
  Rat r(raw);
  mpq_clear(raw);
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

std::string int_str(const Int& n) { return n.get_str(); }

Int int_parse(const std::string& s) {
  if (s.empty()) throw ParseError("empty integer literal");
  mpz_t raw;
  mpz_init(raw);
  if (mpz_set_str(raw, s.c_str(), 10) != 0) {
    mpz_clear(raw);
    throw ParseError("malformed integer literal: '" + s + "'");
  }
  Int n(raw);
  mpz_clear(raw);
  return n;
}

bool fits_uint64(const Int& n) {
  return n >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_uint64(const Int& n) {
  if (!fits_uint64(n)) throw ParseError("integer out of 64-bit range: " + n.get_str());
  std::uint64_t lo = mpz_get_ui(n.get_mpz_t());
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 32) {
    Int hi = n >> 32;
    lo = (static_cast<std::uint64_t>(mpz_get_ui(hi.get_mpz_t())) << 32) |
         (mpz_get_ui(n.get_mpz_t()) & 0xffffffffull);
  }
  return lo;
}

}  // namespace numertree
