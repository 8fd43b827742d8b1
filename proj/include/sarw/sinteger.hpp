#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prime_set.hpp"

namespace sarw {

/*
 * Exact arithmetic in R = Z[1/p_1,...,1/p_l] and in the S-unit group
 * S = {p_1^{n_1}...p_l^{n_l}}.
 *
 * Every nonzero ring element is kept in the canonical form
 *
 *     x = unit * p_1^{e_1} * ... * p_l^{e_l},    gcd(unit, p_i) = 1,
 *
 * so v_{p_i}(x) = e_i is a field read-off and equality is structural.
 * Zero is (unit = 0, exps = 0) with valuation +infinity at every prime.
 * S-units are stored as their exponent vector alone; composition is
 * vector addition.  All values are immutable after construction.
 */

/// A p-adic valuation: a finite integer, or +infinity (valuation of 0).
/// Tagged instead of a sentinel integer so min-computations cannot
/// overflow.
class PValuation {
public:
    static PValuation infinity() { return PValuation(true, 0); }
    static PValuation of(long v) { return PValuation(false, v); }

    bool is_infinity() const { return inf_; }
    long value() const {
        if (inf_) throw std::logic_error("PValuation: +infinity has no finite value");
        return v_;
    }

    friend PValuation min(const PValuation& a, const PValuation& b) {
        if (a.inf_) return b;
        if (b.inf_) return a;
        return of(std::min(a.v_, b.v_));
    }

    friend PValuation operator+(const PValuation& a, const PValuation& b) {
        if (a.inf_ || b.inf_) return infinity();
        return of(a.v_ + b.v_);
    }

    bool operator==(const PValuation& other) const = default;
    /// +infinity compares greater than every finite valuation.
    bool operator<(const PValuation& other) const {
        if (inf_) return false;
        if (other.inf_) return true;
        return v_ < other.v_;
    }
    bool operator>=(const PValuation& other) const { return !(*this < other); }

private:
    PValuation(bool inf, long v) : inf_(inf), v_(v) {}
    bool inf_;
    long v_;
};

/// An element s = p_1^{n_1}...p_l^{n_l} > 0 of the multiplicative group S.
class SUnit {
public:
    explicit SUnit(std::vector<long> exps) : exps_(std::move(exps)) {}
    static SUnit identity(std::size_t l) { return SUnit(std::vector<long>(l, 0)); }
    static SUnit prime_power(std::size_t l, std::size_t i, long n) {
        std::vector<long> e(l, 0);
        e.at(i) = n;
        return SUnit(std::move(e));
    }

    const std::vector<long>& exps() const { return exps_; }
    long exp(std::size_t i) const { return exps_.at(i); }
    std::size_t rank() const { return exps_.size(); }
    bool is_identity() const {
        return std::all_of(exps_.begin(), exps_.end(), [](long n) { return n == 0; });
    }

    bool operator==(const SUnit& other) const = default;

private:
    std::vector<long> exps_;
};

inline SUnit mul(const SUnit& a, const SUnit& b) {
    if (a.rank() != b.rank()) throw std::invalid_argument("SUnit: rank mismatch");
    std::vector<long> e(a.rank());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exp(i) + b.exp(i);
    return SUnit(std::move(e));
}

inline SUnit inverse(const SUnit& a) {
    std::vector<long> e(a.rank());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -a.exp(i);
    return SUnit(std::move(e));
}

/// Strict weak order for containers (lexicographic on exponents).
struct SUnitLess {
    bool operator()(const SUnit& a, const SUnit& b) const { return a.exps() < b.exps(); }
};

inline mpq_class to_rational(const PrimeSet& ps, const SUnit& s) {
    mpz_class num = 1, den = 1;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        long n = s.exp(i);
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps.prime(i)),
                      static_cast<unsigned long>(n >= 0 ? n : -n));
        (n >= 0 ? num : den) *= pw;
    }
    return mpq_class(num, den);
}

/// An element of R = Z[1/p_1,...,1/p_l] in canonical form.
class SInteger {
public:
    static SInteger zero(std::size_t l) { return SInteger(0, std::vector<long>(l, 0)); }

    static SInteger one(std::size_t l) { return SInteger(1, std::vector<long>(l, 0)); }

    /// Canonicalizes an arbitrary (unit, exps) pair: extracts every p_i
    /// factor of |unit| into the exponent vector.
    static SInteger from_unit_exps(const PrimeSet& ps, mpz_class unit, std::vector<long> exps) {
        if (exps.size() != ps.size())
            throw std::invalid_argument("SInteger: exponent vector length mismatch");
        if (unit == 0) return zero(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) {
            mpz_class p(ps.prime(i)), q, r;
            for (;;) {
                mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), unit.get_mpz_t(), p.get_mpz_t());
                if (r != 0) break;
                unit = q;
                ++exps[i];
            }
        }
        return SInteger(std::move(unit), std::move(exps));
    }

    static SInteger from_integer(const PrimeSet& ps, mpz_class n) {
        return from_unit_exps(ps, std::move(n), std::vector<long>(ps.size(), 0));
    }

    static SInteger from_integer(const PrimeSet& ps, long n) {
        return from_integer(ps, mpz_class(n));
    }

    /// Accepts exactly the rationals lying in R: the denominator must
    /// factor over the prime set.
    static SInteger from_rational(const PrimeSet& ps, const mpq_class& q) {
        mpq_class c = q;
        c.canonicalize();
        mpz_class num = c.get_num(), den = c.get_den();
        std::vector<long> exps(ps.size(), 0);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            mpz_class p(ps.prime(i)), qq, r;
            for (;;) {
                mpz_fdiv_qr(qq.get_mpz_t(), r.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
                if (r != 0) break;
                den = qq;
                --exps[i];
            }
        }
        if (den != 1)
            throw std::domain_error("not an S-integer: denominator has residual factor " +
                                    den.get_str());
        return from_unit_exps(ps, std::move(num), std::move(exps));
    }

    static SInteger from_sunit(const SUnit& s) { return SInteger(1, s.exps()); }

    const mpz_class& unit() const { return unit_; }
    const std::vector<long>& exps() const { return exps_; }
    long exp(std::size_t i) const { return exps_.at(i); }
    bool is_zero() const { return unit_ == 0; }

    mpq_class to_rational(const PrimeSet& ps) const {
        mpz_class num = unit_, den = 1;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            long e = exps_[i];
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps.prime(i)),
                          static_cast<unsigned long>(e >= 0 ? e : -e));
            (e >= 0 ? num : den) *= pw;
        }
        return mpq_class(num, den);
    }

    /// Canonical form makes structural equality coincide with equality
    /// of the represented rationals.
    bool operator==(const SInteger& other) const = default;

    friend SInteger neg(const SInteger& x);
    friend SInteger mul(const SInteger& a, const SInteger& b);
    friend SInteger mul(const SInteger& a, const SUnit& s);

private:
    SInteger(mpz_class unit, std::vector<long> exps)
        : unit_(std::move(unit)), exps_(std::move(exps)) {}

    mpz_class unit_;
    std::vector<long> exps_;
};

/// Deterministic strict weak order for containers. Structural, not
/// numeric: exponent vector first, then unit. Canonical form makes this
/// a valid total order on values.
struct SIntegerLess {
    bool operator()(const SInteger& a, const SInteger& b) const {
        if (a.exps() != b.exps()) return a.exps() < b.exps();
        return cmp(a.unit(), b.unit()) < 0;
    }
};

inline PValuation valuation(const SInteger& x, std::size_t i) {
    if (x.is_zero()) return PValuation::infinity();
    return PValuation::of(x.exp(i));
}

inline SInteger add(const PrimeSet& ps, const SInteger& a, const SInteger& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::vector<long> m(ps.size());
    mpz_class ta = a.unit(), tb = b.unit();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        m[i] = std::min(a.exp(i), b.exp(i));
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps.prime(i)),
                      static_cast<unsigned long>(a.exp(i) - m[i]));
        ta *= pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps.prime(i)),
                      static_cast<unsigned long>(b.exp(i) - m[i]));
        tb *= pw;
    }
    return SInteger::from_unit_exps(ps, ta + tb, std::move(m));
}

inline SInteger neg(const SInteger& x) {
    if (x.is_zero()) return x;
    return SInteger(-x.unit_, x.exps_);
}

inline SInteger mul(const SInteger& a, const SInteger& b) {
    if (a.exps().size() != b.exps().size())
        throw std::invalid_argument("SInteger: rank mismatch");
    if (a.is_zero() || b.is_zero()) return SInteger::zero(a.exps().size());
    std::vector<long> e(a.exps().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exp(i) + b.exp(i);
    // Units coprime to every p_i multiply to a unit coprime to every p_i,
    // so the product is already canonical.
    return SInteger(a.unit_ * b.unit_, std::move(e));
}

inline SInteger mul(const SInteger& a, const SUnit& s) {
    if (a.exps().size() != s.rank())
        throw std::invalid_argument("SInteger: rank mismatch");
    if (a.is_zero()) return a;
    std::vector<long> e(a.exps().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a.exp(i) + s.exp(i);
    return SInteger(a.unit_, std::move(e));
}

inline SInteger sub(const PrimeSet& ps, const SInteger& a, const SInteger& b) {
    return add(ps, a, neg(b));
}

/// Multiplicative inverse inside R. Only S-units are invertible; anything
/// else would leave R, so it is rejected with the offending factor named.
inline SInteger inv(const PrimeSet& ps, const SInteger& x) {
    if (x.is_zero()) throw std::domain_error("inv: zero is not invertible");
    if (x.unit() != 1 && x.unit() != -1) {
        mpz_class u = abs(x.unit());
        // Name a concrete prime factor when one is cheap to find.
        mpz_class f = u;
        for (long d = 2; d <= 100000 && mpz_class(d) * d <= u; ++d)
            if (u % d == 0) {
                f = d;
                break;
            }
        throw std::domain_error(x.unit().get_str() + " not an S-unit over primes" +
                                [&] {
                                    std::string s = " {";
                                    for (std::size_t i = 0; i < ps.size(); ++i)
                                        s += (i ? "," : "") + std::to_string(ps.prime(i));
                                    return s + "}";
                                }() +
                                ": residual factor " + f.get_str());
    }
    std::vector<long> e(x.exps().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -x.exp(i);
    return SInteger::from_unit_exps(ps, x.unit(), std::move(e));
}

// ---- textual forms ----------------------------------------------------
// SInteger: "num/den" in lowest terms ("3/4", "-7", "0").
// SUnit:    "[n1,...,nl]".
// Both parse back exactly.

inline std::string to_string(const PrimeSet& ps, const SInteger& x) {
    return x.to_rational(ps).get_str();
}

inline std::string to_string(const SUnit& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.rank(); ++i) {
        if (i) out += ",";
        out += std::to_string(s.exp(i));
    }
    return out + "]";
}

inline SInteger parse_sinteger(const PrimeSet& ps, const std::string& text) {
    mpq_class q;
    if (text.empty() || q.set_str(text, 10) != 0)
        throw std::invalid_argument("parse_sinteger: malformed rational '" + text + "'");
    q.canonicalize();
    return SInteger::from_rational(ps, q);
}

inline SUnit parse_sunit(std::size_t l, const std::string& text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        throw std::invalid_argument("parse_sunit: expected bracketed vector, got '" + text + "'");
    std::vector<long> exps;
    std::string body = text.substr(1, text.size() - 2);
    std::size_t pos = 0;
    while (pos <= body.size()) {
        if (body.empty() && l == 0) break;
        std::size_t comma = body.find(',', pos);
        std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_sunit: malformed exponent '" + tok + "'");
        }
        if (used != tok.size())
            throw std::invalid_argument("parse_sunit: malformed exponent '" + tok + "'");
        exps.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (exps.size() != l)
        throw std::invalid_argument("parse_sunit: expected " + std::to_string(l) +
                                    " exponents, got " + std::to_string(exps.size()));
    return SUnit(std::move(exps));
}

} // namespace sarw
