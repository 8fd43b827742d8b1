#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "group.hpp"
#include "prime_set.hpp"
#include "sinteger.hpp"
#include "symbolic_log.hpp"

namespace sarw {

/*
 * Finite-precision elements of Q_p.
 *
 * A nonzero value is stored as
 *
 *     x = p^v * u,   u in [1, p^M),  u % p != 0,
 *
 * i.e. the value is known modulo p^{v+M}; M is the relative precision
 * (the digit count) and v + M the absolute precision.  "Zero to
 * precision A" is a distinct tagged state meaning only x = 0 mod p^A is
 * known; it is never conflated with exact zero.  Arithmetic propagates
 * precision the standard way: addition keeps the smaller absolute
 * precision, multiplication the smaller relative one.  Precision is
 * never silently invented.
 */
class PAdicApprox {
public:
    /// Expansion of x in Q_{p_i} with M digits from the valuation up.
    static PAdicApprox from_sinteger(const PrimeSet& ps, const SInteger& x, std::size_t i,
                                     long digits) {
        if (digits < 1) throw std::invalid_argument("PAdicApprox: need at least one digit");
        long p = ps.prime(i);
        if (x.is_zero()) return zero_to_precision(p, digits);
        long v = x.exp(i);
        // The prime-to-p part of x is a p-adic unit num/den.
        mpz_class num = x.unit(), den = 1;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            long e = x.exp(j);
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps.prime(j)),
                          static_cast<unsigned long>(e >= 0 ? e : -e));
            (e >= 0 ? num : den) *= pw;
        }
        mpz_class mod = pow_of(p, digits);
        mpz_class deninv;
        if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::logic_error("PAdicApprox: denominator not invertible (not coprime to p)");
        mpz_class u = (num * deninv) % mod;
        if (u < 0) u += mod;
        return PAdicApprox(p, v, digits, std::move(u));
    }

    /// Same expansion but cut at a fixed absolute precision p^{abs}.
    static PAdicApprox from_sinteger_abs(const PrimeSet& ps, const SInteger& x, std::size_t i,
                                         long abs_precision) {
        if (x.is_zero() || x.exp(i) >= abs_precision)
            return zero_to_precision(ps.prime(i), abs_precision);
        return from_sinteger(ps, x, i, abs_precision - x.exp(i));
    }

    static PAdicApprox zero_to_precision(long p, long abs_precision) {
        PAdicApprox out(p, 0, 0, 0);
        out.zero_ = true;
        out.abs_precision_ = abs_precision;
        return out;
    }

    long prime() const { return prime_; }
    bool is_zero_to_precision() const { return zero_; }
    long valuation() const {
        if (zero_) throw std::logic_error("PAdicApprox: zero word has no valuation");
        return valuation_;
    }
    /// Valuation as a certified lower bound (exact for nonzero words).
    PValuation valuation_bound() const {
        return zero_ ? PValuation::of(abs_precision_) : PValuation::of(valuation_);
    }
    long rel_precision() const { return zero_ ? 0 : rel_precision_; }
    long abs_precision() const { return abs_precision_; }
    const mpz_class& unit_word() const { return unit_; }

    /// Little-endian base-p digits d_0 ... d_{M-1}, d_0 != 0.
    std::vector<long> digits() const {
        std::vector<long> out;
        mpz_class u = unit_;
        for (long k = 0; k < rel_precision(); ++k) {
            mpz_class q, r;
            mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), u.get_mpz_t(),
                           static_cast<unsigned long>(prime_));
            out.push_back(r.get_si());
            u = q;
        }
        return out;
    }

    /// The value modulo p^a as an integer residue scaled by p^{min(v,0)}:
    /// only valid when a <= abs_precision and v >= 0 or the caller tracks
    /// the scale; used for exact cross-checks.
    mpz_class residue(long abs_target) const {
        if (abs_target > abs_precision_)
            throw std::logic_error("PAdicApprox: residue beyond known precision");
        if (zero_) return 0;
        if (valuation_ < 0)
            throw std::logic_error("PAdicApprox: residue of negative-valuation value");
        if (valuation_ >= abs_target) return 0;
        mpz_class mod = pow_of(prime_, abs_target);
        mpz_class val = unit_ * pow_of(prime_, valuation_);
        mpz_class r = val % mod;
        if (r < 0) r += mod;
        return r;
    }

    friend PAdicApprox add(const PAdicApprox& a, const PAdicApprox& b) {
        if (a.prime_ != b.prime_) throw std::invalid_argument("PAdicApprox: prime mismatch");
        long p = a.prime_;
        long abs = std::min(a.abs_precision_, b.abs_precision_);
        if (a.zero_ && b.zero_) return zero_to_precision(p, abs);
        // Align both words at the valuation floor and add modulo p^abs.
        long base = std::min(a.zero_ ? b.valuation_ : a.valuation_,
                             b.zero_ ? a.valuation_ : b.valuation_);
        if (base >= abs) return zero_to_precision(p, abs);
        mpz_class mod = pow_of(p, abs - base);
        mpz_class acc = 0;
        for (const PAdicApprox* x : {&a, &b}) {
            if (x->zero_) continue;
            acc += x->unit_ * pow_of(p, x->valuation_ - base);
        }
        acc %= mod;
        if (acc < 0) acc += mod;
        return normalized(p, base, abs, std::move(acc));
    }

    friend PAdicApprox mul(const PAdicApprox& a, const PAdicApprox& b) {
        if (a.prime_ != b.prime_) throw std::invalid_argument("PAdicApprox: prime mismatch");
        long p = a.prime_;
        if (a.zero_ || b.zero_) {
            long va = a.zero_ ? a.abs_precision_ : a.valuation_;
            long vb = b.zero_ ? b.abs_precision_ : b.valuation_;
            return zero_to_precision(p, va + vb);
        }
        long rel = std::min(a.rel_precision_, b.rel_precision_);
        mpz_class mod = pow_of(p, rel);
        mpz_class u = (a.unit_ * b.unit_) % mod;
        return PAdicApprox(p, a.valuation_ + b.valuation_, rel, std::move(u));
    }

    /// Exact rescaling by the S-unit s inside Q_{p_i}: the valuation moves
    /// by n_i, the prime-to-p part multiplies the unit word.
    friend PAdicApprox scale(const PrimeSet& ps, const SUnit& s, const PAdicApprox& x,
                             std::size_t i) {
        if (ps.prime(i) != x.prime_) throw std::invalid_argument("scale: prime mismatch");
        long shift = s.exp(i);
        if (x.zero_) return zero_to_precision(x.prime_, x.abs_precision_ + shift);
        mpz_class mod = pow_of(x.prime_, x.rel_precision_);
        mpz_class num = 1, den = 1;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            long e = s.exp(j);
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps.prime(j)),
                          static_cast<unsigned long>(e >= 0 ? e : -e));
            (e >= 0 ? num : den) *= pw;
        }
        mpz_class deninv;
        if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw std::logic_error("scale: non-invertible denominator");
        mpz_class u = (x.unit_ * num % mod) * deninv % mod;
        if (u < 0) u += mod;
        return PAdicApprox(x.prime_, x.valuation_ + shift, x.rel_precision_, std::move(u));
    }

    std::string to_string() const {
        std::string out = "p-adic(" + std::to_string(prime_) + ", ";
        if (zero_) return out + "0 mod p^" + std::to_string(abs_precision_) + ")";
        out += std::to_string(valuation_) + ", ";
        bool wide = prime_ > 9;
        auto ds = digits();
        for (std::size_t k = 0; k < ds.size(); ++k) {
            if (wide && k) out += ",";
            out += std::to_string(ds[k]);
        }
        return out + ")";
    }

    static mpz_class pow_of(long p, long e) {
        if (e < 0) throw std::logic_error("PAdicApprox: negative power");
        mpz_class out;
        mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(e));
        return out;
    }

private:
    PAdicApprox(long p, long v, long rel, mpz_class u)
        : prime_(p), valuation_(v), rel_precision_(rel), abs_precision_(v + rel),
          unit_(std::move(u)) {}

    /// Build from a residue known modulo p^{abs-base}, scaled by p^base.
    static PAdicApprox normalized(long p, long base, long abs, mpz_class residue) {
        if (residue == 0) return zero_to_precision(p, abs);
        long v = base;
        mpz_class q, r;
        for (;;) {
            mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), residue.get_mpz_t(),
                           static_cast<unsigned long>(p));
            if (r != 0) break;
            residue = q;
            ++v;
        }
        return PAdicApprox(p, v, abs - v, std::move(residue));
    }

    long prime_;
    bool zero_ = false;
    long valuation_;
    long rel_precision_;
    long abs_precision_;
    mpz_class unit_;
};

/// Do two words represent the same value modulo p^{min abs precision}?
inline bool agree_to_common_precision(const PAdicApprox& a, const PAdicApprox& b) {
    if (a.prime() != b.prime()) return false;
    long common = std::min(a.abs_precision(), b.abs_precision());
    auto effectively_zero = [&](const PAdicApprox& x) {
        return x.is_zero_to_precision() || x.valuation() >= common;
    };
    if (effectively_zero(a) || effectively_zero(b))
        return effectively_zero(a) && effectively_zero(b);
    if (a.valuation() != b.valuation()) return false;
    mpz_class mod = PAdicApprox::pow_of(a.prime(), common - a.valuation());
    return a.unit_word() % mod == b.unit_word() % mod;
}

/// g.r + g.s * x evaluated in Q_{p_i} at the propagated precision.
inline PAdicApprox affine_apply(const PrimeSet& ps, const AffineElement& g, const PAdicApprox& x,
                                std::size_t i) {
    PAdicApprox sx = scale(ps, g.s, x, i);
    PAdicApprox r = PAdicApprox::from_sinteger_abs(ps, g.r, i, sx.abs_precision());
    return add(sx, r);
}

/// -log |s|_{p_i} = n_i * log(p_i): the log Radon-Nikodym derivative of
/// the affine map (r,s) against Haar measure on Q_{p_i}; constant in x.
inline SymbolicLogValue rn_derivative_log(const PrimeSet& ps, const AffineElement& g,
                                          std::size_t i) {
    if (i >= ps.size()) throw std::out_of_range("rn_derivative_log: prime index");
    return SymbolicLogValue::single(ps.size(), i, mpq_class(g.s.exp(i)));
}

/// The ball center + p^m Z_p.  Haar normalization: mass(Z_p) = 1, so the
/// mass is p^{-m} (m may be negative).
struct PAdicBall {
    long prime;
    PAdicApprox center;
    long radius_exponent;
};

inline mpq_class ball_mass(const PAdicBall& b) {
    mpz_class pw = PAdicApprox::pow_of(b.prime, b.radius_exponent >= 0 ? b.radius_exponent
                                                                       : -b.radius_exponent);
    return b.radius_exponent >= 0 ? mpq_class(1, pw) : mpq_class(pw, 1);
}

/// Image ball under the affine map: center moves, radius scales by |s|_p.
inline PAdicBall apply(const PrimeSet& ps, const AffineElement& g, const PAdicBall& b,
                       std::size_t i) {
    return PAdicBall{b.prime, affine_apply(ps, g, b.center, i),
                     b.radius_exponent + g.s.exp(i)};
}

} // namespace sarw
