#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarw {

/// The fixed finite prime list p_1 < ... < p_l underlying the ring
/// Z[1/p_1,...,1/p_l] and the dilation group {p_1^{n_1}...p_l^{n_l}}.
/// Every other type in the library carries exponent vectors of length
/// size() relative to one of these.
class PrimeSet {
public:
    explicit PrimeSet(std::vector<long> primes) : primes_(std::move(primes)) {
        if (primes_.empty())
            throw std::invalid_argument("PrimeSet: need at least one prime");
        for (std::size_t i = 0; i < primes_.size(); ++i) {
            if (!is_prime(primes_[i]))
                throw std::invalid_argument("PrimeSet: " + std::to_string(primes_[i]) +
                                            " is not prime");
            if (i > 0 && primes_[i] <= primes_[i - 1])
                throw std::invalid_argument("PrimeSet: primes must be distinct and ascending");
        }
    }

    std::size_t size() const { return primes_.size(); }
    long prime(std::size_t i) const { return primes_.at(i); }
    const std::vector<long>& primes() const { return primes_; }

    /// log(p_i) in double precision; exact values stay symbolic elsewhere.
    double log_prime(std::size_t i) const { return std::log(static_cast<double>(prime(i))); }

    bool operator==(const PrimeSet& other) const = default;

    static bool is_prime(long p) {
        if (p < 2) return false;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) return false;
        return true;
    }

private:
    std::vector<long> primes_;
};

} // namespace sarw
