#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "prime_set.hpp"
#include "sinteger.hpp"

namespace sarw {

/*
 * Exact values of the form sum_j q_j * log(p_j) with rational q_j.
 * Because logarithms of distinct primes are linearly independent over Q,
 * coefficient-vector equality is value equality, so drifts and entropies
 * compare exactly; doubles appear only when rendering.
 */
class SymbolicLogValue {
public:
    explicit SymbolicLogValue(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {}

    static SymbolicLogValue zero(std::size_t l) {
        return SymbolicLogValue(std::vector<mpq_class>(l, mpq_class(0)));
    }

    static SymbolicLogValue single(std::size_t l, std::size_t j, mpq_class q) {
        std::vector<mpq_class> c(l, mpq_class(0));
        c.at(j) = std::move(q);
        return SymbolicLogValue(std::move(c));
    }

    const std::vector<mpq_class>& coeffs() const { return coeffs_; }
    const mpq_class& coeff(std::size_t j) const { return coeffs_.at(j); }
    std::size_t rank() const { return coeffs_.size(); }

    bool is_zero() const {
        for (const auto& q : coeffs_)
            if (q != 0) return false;
        return true;
    }

    /// Round-to-nearest double of sum q_j * ln(p_j).
    double to_double(const PrimeSet& ps) const {
        if (ps.size() != coeffs_.size())
            throw std::invalid_argument("SymbolicLogValue: prime set size mismatch");
        double acc = 0.0;
        for (std::size_t j = 0; j < coeffs_.size(); ++j)
            acc += coeffs_[j].get_d() * ps.log_prime(j);
        return acc;
    }

    std::string to_string(const PrimeSet& ps) const {
        std::string out;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j] == 0) continue;
            if (!out.empty()) out += " + ";
            out += coeffs_[j].get_str() + "*log(" + std::to_string(ps.prime(j)) + ")";
        }
        return out.empty() ? "0" : out;
    }

    SymbolicLogValue operator+(const SymbolicLogValue& other) const {
        check_rank(other);
        std::vector<mpq_class> c(coeffs_);
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += other.coeffs_[j];
        return SymbolicLogValue(std::move(c));
    }

    SymbolicLogValue operator-(const SymbolicLogValue& other) const {
        check_rank(other);
        std::vector<mpq_class> c(coeffs_);
        for (std::size_t j = 0; j < c.size(); ++j) c[j] -= other.coeffs_[j];
        return SymbolicLogValue(std::move(c));
    }

    friend SymbolicLogValue operator*(const mpq_class& t, const SymbolicLogValue& v) {
        std::vector<mpq_class> c(v.coeffs_);
        for (auto& q : c) q *= t;
        return SymbolicLogValue(std::move(c));
    }

    bool operator==(const SymbolicLogValue& other) const { return coeffs_ == other.coeffs_; }
    bool operator!=(const SymbolicLogValue& other) const { return !(*this == other); }

private:
    void check_rank(const SymbolicLogValue& other) const {
        if (coeffs_.size() != other.coeffs_.size())
            throw std::invalid_argument("SymbolicLogValue: rank mismatch");
    }

    std::vector<mpq_class> coeffs_;
};

/// log ||s||_{p_i} = -n_i * log(p_i), exactly.
inline SymbolicLogValue norm_log(const PrimeSet& ps, const SUnit& s, std::size_t i) {
    if (i >= ps.size()) throw std::out_of_range("norm_log: prime index");
    return SymbolicLogValue::single(ps.size(), i, mpq_class(-s.exp(i)));
}

} // namespace sarw
