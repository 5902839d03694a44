#pragma once

// Exact rational arithmetic used for every c-function quantity.
//
// BigRational is GMP's mpq_class: always canonical (reduced, positive
// denominator). The helpers below add the serialization format used by the
// command-line tools ("num/den", integers written as "n/1").

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sphelim {

using BigRational = mpq_class;
using BigInteger = mpz_class;

inline BigRational make_rational(std::int64_t num, std::int64_t den = 1)
{
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    BigRational r{BigInteger{static_cast<long>(num)}, BigInteger{static_cast<long>(den)}};
    r.canonicalize();
    return r;
}

/// Canonical "num/den" form. The denominator is always written.
inline std::string to_string(const BigRational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Parses "num/den" or a plain integer.
inline BigRational parse_rational(std::string_view text)
{
    std::string s{text};
    if (s.empty()) {
        throw std::invalid_argument("empty rational literal");
    }
    BigRational r;
    if (r.set_str(s, 10) != 0) {
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    }
    if (r.get_den() == 0) {
        throw std::domain_error("rational with zero denominator: '" + s + "'");
    }
    r.canonicalize();
    return r;
}

inline double to_double(const BigRational& r) { return r.get_d(); }

inline bool is_integer(const BigRational& r) { return r.get_den() == 1; }

inline bool is_nonnegative_integer(const BigRational& r)
{
    return is_integer(r) && sgn(r) >= 0;
}

} // namespace sphelim
