#pragma once

// exact rational scalars used everywhere in the library.
// thin helpers over gmp's mpq_class: canonical printing ("5", "-3/2"),
// strict parsing, and a few integer utilities.

#include <gmpxx.h>

#include <cassert>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>

namespace surf {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    assert(den != 0);
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat rat(const Int& num, const Int& den = 1) {
    assert(den != 0);
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int numerator(const Rat& q) { return q.get_num(); }
inline Int denominator(const Rat& q) { return q.get_den(); }

// canonical text form: integers without a slash, otherwise "num/den" with
// positive denominator and gcd-reduced parts (mpq_class keeps that invariant).
inline std::string rat_str(const Rat& q) {
    if (is_integer(q)) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// strict parser for the same form. rejects empty strings, stray signs,
// whitespace, and zero denominators (before gmp ever canonicalizes).
inline std::optional<Rat> rat_parse(const std::string& s) {
    auto digits = [](const std::string& t, size_t from, size_t to) {
        if (from >= to) return false;
        for (size_t i = from; i < to; ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    size_t slash = s.find('/');
    std::string num = (slash == std::string::npos) ? s : s.substr(0, slash);
    size_t n0 = (!num.empty() && (num[0] == '-')) ? 1 : 0;
    if (!digits(num, n0, num.size())) return std::nullopt;
    Int n(num, 10);
    Int d(1);
    if (slash != std::string::npos) {
        std::string den = s.substr(slash + 1);
        if (!digits(den, 0, den.size())) return std::nullopt;
        d = Int(den, 10);
        if (d == 0) return std::nullopt;
    }
    Rat q(n, d);
    q.canonicalize();
    return q;
}

// q as a long; caller promises q is an integer in range.
inline long to_long(const Rat& q) {
    assert(is_integer(q));
    assert(q.get_num().fits_slong_p());
    return q.get_num().get_si();
}

inline Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// exact square root of a perfect-square rational, if it is one.
inline std::optional<Rat> rat_sqrt(const Rat& q) {
    if (q < 0) return std::nullopt;
    Int n = q.get_num(), d = q.get_den();
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return std::nullopt;
    Int rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return rat(rn, rd);
}

}  // namespace surf
