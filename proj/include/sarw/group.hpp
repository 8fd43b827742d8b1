#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prime_set.hpp"
#include "sinteger.hpp"

namespace sarw {

/*
 * The semidirect product Gamma = R x| S acting affinely on R:
 * (r, s) is the map x -> r + s*x, so
 *
 *     (r, s)(r', s') = (r + s*r', s*s'),  id = (0, 1),
 *     (r, s)^{-1} = (-s^{-1} r, s^{-1}).
 *
 * Lambda = Z x| {1} is the fixed reference subgroup; its right cosets
 * (r, s)Lambda = {(r + s*k, s) : k in Z} are keyed by (s, r mod s*Z).
 */
struct AffineElement {
    SInteger r;
    SUnit s;

    bool operator==(const AffineElement& other) const = default;
};

struct AffineElementLess {
    bool operator()(const AffineElement& a, const AffineElement& b) const {
        if (!(a.s == b.s)) return SUnitLess{}(a.s, b.s);
        return SIntegerLess{}(a.r, b.r);
    }
};

inline AffineElement group_identity(std::size_t l) {
    return AffineElement{SInteger::zero(l), SUnit::identity(l)};
}

inline AffineElement mult(const PrimeSet& ps, const AffineElement& a, const AffineElement& b) {
    return AffineElement{add(ps, a.r, mul(b.r, a.s)), mul(a.s, b.s)};
}

inline AffineElement group_inverse(const PrimeSet& ps, const AffineElement& a) {
    SUnit si = inverse(a.s);
    return AffineElement{neg(mul(a.r, si)), si};
}

/// The affine action x -> g.r + g.s * x on rational points of R.
inline SInteger act_translation(const PrimeSet& ps, const AffineElement& g, const SInteger& x) {
    return add(ps, g.r, mul(x, g.s));
}

/// Canonical key of the right coset (r, s)Lambda.  Two elements share a
/// key iff they have the same s and r - r' lies in s*Z.  The residue is
/// the representative of r mod s*Z in [0, s), computed by exact rational
/// floor.
struct CosetKey {
    SUnit s;
    SInteger residue;

    bool operator==(const CosetKey& other) const = default;
};

struct CosetKeyLess {
    bool operator()(const CosetKey& a, const CosetKey& b) const {
        if (!(a.s == b.s)) return SUnitLess{}(a.s, b.s);
        return SIntegerLess{}(a.residue, b.residue);
    }
};

inline CosetKey coset_key(const PrimeSet& ps, const AffineElement& g) {
    // residue = r - s * floor(r / s)
    mpq_class ratio = g.r.to_rational(ps) / to_rational(ps, g.s);
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
    SInteger shift = mul(SInteger::from_integer(ps, fl), g.s);
    return CosetKey{g.s, sub(ps, g.r, shift)};
}

/// Key of the coset of (u, 1) * gamma for gamma any element of the keyed
/// coset; left Lambda-shifts act on keys through this.
inline CosetKey shift_coset(const PrimeSet& ps, const mpz_class& u, const CosetKey& key) {
    return coset_key(ps, AffineElement{add(ps, SInteger::from_integer(ps, u), key.residue),
                                       key.s});
}

// Textual element form "(num/den, [n1,...,nl])"; parses back exactly.

inline std::string to_string(const PrimeSet& ps, const AffineElement& g) {
    return "(" + to_string(ps, g.r) + ", " + to_string(g.s) + ")";
}

inline AffineElement parse_affine(const PrimeSet& ps, const std::string& text) {
    auto fail = [&] {
        throw std::invalid_argument("parse_affine: expected '(num/den, [n1,...,nl])', got '" +
                                    text + "'");
    };
    std::size_t a = text.find('(');
    std::size_t b = text.rfind(')');
    if (a == std::string::npos || b == std::string::npos || b <= a) fail();
    std::string body = text.substr(a + 1, b - a - 1);
    std::size_t comma = body.find(',');
    if (comma == std::string::npos) fail();
    auto trim = [](std::string s) {
        std::size_t i = s.find_first_not_of(" \t");
        std::size_t j = s.find_last_not_of(" \t");
        return i == std::string::npos ? std::string() : s.substr(i, j - i + 1);
    };
    std::string rpart = trim(body.substr(0, comma));
    std::string spart = trim(body.substr(comma + 1));
    return AffineElement{parse_sinteger(ps, rpart), parse_sunit(ps.size(), spart)};
}

} // namespace sarw
