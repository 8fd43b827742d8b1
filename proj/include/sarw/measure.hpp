#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "group.hpp"
#include "prime_set.hpp"
#include "sinteger.hpp"
#include "symbolic_log.hpp"

namespace sarw {

/*
 * Finitely supported measures with exact rational weights, and the whole
 * design pipeline for the walk measure tau on Gamma = R x| S:
 *
 *     tau(r, s) = kappa_s(r) * prod_i iota_i(n_i(s)),
 *
 * where kappa_s averages a base measure kappa over coset representatives
 * of Z/(sZ n Z) (making tau Lambda-absorbing) and each iota_i is a
 * convolution-power mixture of a step measure sigma tuned to an exact
 * mean, which pins the p_i-drift.
 */

template <class T, class Less = std::less<T>>
class FiniteMeasure {
public:
    using carrier_type = T;
    using map_type = std::map<T, mpq_class, Less>;

    FiniteMeasure() = default;

    static FiniteMeasure dirac(T x) {
        FiniteMeasure m;
        m.add_mass(std::move(x), 1);
        return m;
    }

    static FiniteMeasure uniform(const std::vector<T>& points) {
        if (points.empty()) throw std::invalid_argument("uniform: empty support");
        FiniteMeasure m;
        std::set<T, Less> distinct(points.begin(), points.end());
        mpq_class w(1, static_cast<unsigned long>(distinct.size()));
        for (const auto& x : distinct) m.add_mass(x, w);
        return m;
    }

    void add_mass(T x, mpq_class w) {
        if (w <= 0) throw std::invalid_argument("FiniteMeasure: weights must be positive");
        auto it = atoms_.find(x);
        if (it == atoms_.end())
            atoms_.emplace(std::move(x), std::move(w));
        else
            it->second += w;
    }

    const map_type& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    mpq_class mass_at(const T& x) const {
        auto it = atoms_.find(x);
        return it == atoms_.end() ? mpq_class(0) : it->second;
    }

    mpq_class total_mass() const {
        mpq_class t = 0;
        for (const auto& [x, w] : atoms_) t += w;
        return t;
    }

    bool is_probability() const { return total_mass() == 1; }

    bool operator==(const FiniteMeasure& other) const { return atoms_ == other.atoms_; }

private:
    map_type atoms_;
};

using IntegerMeasure = FiniteMeasure<long>;
using SIntegerMeasure = FiniteMeasure<SInteger, SIntegerLess>;
using GroupMeasure = FiniteMeasure<AffineElement, AffineElementLess>;
using DilationMeasure = FiniteMeasure<SUnit, SUnitLess>;

/// Convex mixture t*a + (1-t)*b, exact.
template <class T, class Less>
FiniteMeasure<T, Less> mix(const mpq_class& t, const FiniteMeasure<T, Less>& a,
                           const FiniteMeasure<T, Less>& b) {
    if (t < 0 || t > 1) throw std::invalid_argument("mix: t must lie in [0,1]");
    FiniteMeasure<T, Less> out;
    if (t > 0)
        for (const auto& [x, w] : a.atoms()) out.add_mass(x, t * w);
    if (t < 1)
        for (const auto& [x, w] : b.atoms()) out.add_mass(x, (1 - t) * w);
    return out;
}

inline IntegerMeasure convolve(const IntegerMeasure& a, const IntegerMeasure& b) {
    if (!a.is_probability() || !b.is_probability())
        throw std::invalid_argument("convolve: expects probability measures");
    IntegerMeasure out;
    for (const auto& [x, wx] : a.atoms())
        for (const auto& [y, wy] : b.atoms()) out.add_mass(x + y, wx * wy);
    return out;
}

inline IntegerMeasure convolution_power(const IntegerMeasure& m, long n) {
    if (n < 1) throw std::invalid_argument("convolution_power: n >= 1 required");
    IntegerMeasure out = m;
    for (long k = 1; k < n; ++k) out = convolve(out, m);
    return out;
}

inline mpq_class mean(const IntegerMeasure& m) {
    mpq_class acc = 0;
    for (const auto& [x, w] : m.atoms()) acc += mpq_class(x) * w;
    return acc;
}

// ---- coset representatives and the absorbing average -------------------

/// [Z : sZ n Z] as an exact integer: prod_i p_i^{max(n_i, 0)}.
inline mpz_class coset_index(const PrimeSet& ps, const SUnit& s) {
    mpz_class idx = 1;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        long n = s.exp(i);
        if (n > 0) {
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(ps.prime(i)),
                          static_cast<unsigned long>(n));
            idx *= pw;
        }
    }
    return idx;
}

/// The full representative list {0, 1, ..., s_plus - 1} of Z/(sZ n Z).
struct CosetReps {
    SUnit s;
    mpz_class index; // s_plus
    std::vector<SInteger> reps;
};

inline CosetReps coset_reps(const PrimeSet& ps, const SUnit& s,
                            unsigned long max_index = 1000000) {
    mpz_class idx = coset_index(ps, s);
    if (idx > max_index)
        throw std::runtime_error("coset_reps: representative set of size " + idx.get_str() +
                                 " exceeds limit " + std::to_string(max_index));
    CosetReps out{s, idx, {}};
    unsigned long n = idx.get_ui();
    out.reps.reserve(n);
    for (unsigned long v = 0; v < n; ++v)
        out.reps.push_back(SInteger::from_integer(ps, static_cast<long>(v)));
    return out;
}

/// kappa_s(t) = (1/|V_s|) sum_{v in V_s} kappa(t + v) with V_s = {0,...,s_plus-1}.
/// The output is again a probability measure, is invariant under integer
/// shifts on every sZ-coset, and its support contains supp(kappa).
inline SIntegerMeasure absorb(const PrimeSet& ps, const SIntegerMeasure& kappa, const SUnit& s,
                              unsigned long max_index = 1000000) {
    if (!kappa.is_probability()) throw std::invalid_argument("absorb: kappa must be a probability measure");
    mpz_class idx = coset_index(ps, s);
    if (idx > max_index)
        throw std::runtime_error("absorb: coset representative set of size " + idx.get_str() +
                                 " exceeds limit " + std::to_string(max_index));
    unsigned long n = idx.get_ui();
    if (n == 1) return kappa;
    mpq_class inv_n(1, n);
    SIntegerMeasure out;
    for (const auto& [a, w] : kappa.atoms()) {
        mpq_class share = w * inv_n;
        for (unsigned long v = 0; v < n; ++v)
            out.add_mass(sub(ps, a, SInteger::from_integer(ps, static_cast<long>(v))), share);
    }
    return out;
}

// ---- drift --------------------------------------------------------------

/// phi_{p_i}(tau) = coeffs[i] * log(p_i); negative drift means every
/// coefficient is < 0.
struct DriftVector {
    std::vector<mpq_class> coeffs;

    bool all_negative() const {
        for (const auto& c : coeffs)
            if (c >= 0) return false;
        return true;
    }

    SymbolicLogValue phi(const PrimeSet& ps, std::size_t i) const {
        return SymbolicLogValue::single(ps.size(), i, coeffs.at(i));
    }
};

inline DriftVector drift(const PrimeSet& ps, const GroupMeasure& tau) {
    if (!tau.is_probability()) throw std::invalid_argument("drift: tau must be a probability measure");
    DriftVector d;
    d.coeffs.assign(ps.size(), mpq_class(0));
    for (const auto& [g, w] : tau.atoms())
        for (std::size_t i = 0; i < ps.size(); ++i) d.coeffs[i] -= mpq_class(g.s.exp(i)) * w;
    return d;
}

// ---- the product ansatz ---------------------------------------------------

/// tau(r, s) = kappa_s(r) * prod_i iota_i(n_i).
inline GroupMeasure build_tau(const PrimeSet& ps, const SIntegerMeasure& kappa,
                              const std::vector<IntegerMeasure>& iotas) {
    if (iotas.size() != ps.size())
        throw std::invalid_argument("build_tau: need one iota per prime");
    if (!kappa.is_probability()) throw std::invalid_argument("build_tau: kappa must be a probability measure");
    for (const auto& io : iotas)
        if (!io.is_probability())
            throw std::invalid_argument("build_tau: every iota must be a probability measure");

    // kappa_s depends on s only through s_plus; cache by index.
    std::map<mpz_class, SIntegerMeasure> absorbed;

    GroupMeasure tau;
    std::vector<IntegerMeasure::map_type::const_iterator> it;
    for (const auto& io : iotas) it.push_back(io.atoms().begin());
    for (;;) {
        std::vector<long> exps;
        mpq_class sweight = 1;
        for (std::size_t i = 0; i < iotas.size(); ++i) {
            exps.push_back(it[i]->first);
            sweight *= it[i]->second;
        }
        SUnit s(exps);
        mpz_class idx = coset_index(ps, s);
        auto found = absorbed.find(idx);
        if (found == absorbed.end())
            found = absorbed.emplace(idx, absorb(ps, kappa, s)).first;
        for (const auto& [t, w] : found->second.atoms())
            tau.add_mass(AffineElement{t, s}, w * sweight);

        // advance the odometer over the product of supports
        std::size_t i = 0;
        for (; i < iotas.size(); ++i) {
            if (++it[i] != iotas[i].atoms().end()) break;
            it[i] = iotas[i].atoms().begin();
        }
        if (i == iotas.size()) break;
    }
    return tau;
}

inline DilationMeasure marginal_dilation(const GroupMeasure& tau) {
    DilationMeasure out;
    for (const auto& [g, w] : tau.atoms()) out.add_mass(g.s, w);
    return out;
}

/// The product measure  prod_i iota_i on S = Z^l (for marginal checks).
inline DilationMeasure product_dilation(const std::vector<IntegerMeasure>& iotas) {
    DilationMeasure out;
    std::vector<IntegerMeasure::map_type::const_iterator> it;
    for (const auto& io : iotas) it.push_back(io.atoms().begin());
    for (;;) {
        std::vector<long> exps;
        mpq_class w = 1;
        for (std::size_t i = 0; i < iotas.size(); ++i) {
            exps.push_back(it[i]->first);
            w *= it[i]->second;
        }
        out.add_mass(SUnit(exps), w);
        std::size_t i = 0;
        for (; i < iotas.size(); ++i) {
            if (++it[i] != iotas[i].atoms().end()) break;
            it[i] = iotas[i].atoms().begin();
        }
        if (i == iotas.size()) break;
    }
    return out;
}

// ---- exact checks ---------------------------------------------------------

struct AbsorbingCheck {
    std::size_t coset;
    long shift;
    mpq_class mass;
    mpq_class shifted_mass;
};

struct AbsorbingReport {
    bool absorbing = true;
    long shift_range = 0;
    unsigned long max_index = 1;
    std::string note;
    std::vector<CosetKey> cosets;
    std::vector<mpq_class> coset_mass;
    std::vector<AbsorbingCheck> checks;
    std::size_t first_violation = std::numeric_limits<std::size_t>::max();

    bool has_violation() const {
        return first_violation != std::numeric_limits<std::size_t>::max();
    }
};

/// Exact verification of Lambda-absorption: for every coset key in the
/// support and every shift |u| <= shift_range, the mass of the shifted
/// coset equals the original mass.  shift_range = 0 picks the default
/// 2 * max s_plus; masses are periodic in u with period s_plus, so that
/// finite range decides all integer shifts (see the report note).
inline AbsorbingReport check_absorbing(const PrimeSet& ps, const GroupMeasure& tau,
                                       long shift_range = 0, bool record_transcript = true) {
    std::map<CosetKey, mpq_class, CosetKeyLess> mass;
    unsigned long max_index = 1;
    for (const auto& [g, w] : tau.atoms()) {
        mass[coset_key(ps, g)] += w;
        mpz_class idx = coset_index(ps, g.s);
        if (idx > max_index) {
            if (idx > 1000000000UL)
                throw std::runtime_error("check_absorbing: coset index exceeds limit");
            max_index = idx.get_ui();
        }
    }

    AbsorbingReport report;
    report.max_index = max_index;
    report.shift_range =
        shift_range > 0 ? shift_range : static_cast<long>(2 * max_index);
    report.note =
        "coset masses are periodic in the shift with period s_plus(s) <= " +
        std::to_string(max_index) + ", so checking |u| <= " +
        std::to_string(report.shift_range) + " decides every integer shift";

    for (const auto& [key, m] : mass) {
        report.cosets.push_back(key);
        report.coset_mass.push_back(m);
    }

    for (std::size_t k = 0; k < report.cosets.size(); ++k) {
        const CosetKey& key = report.cosets[k];
        const mpq_class& m = report.coset_mass[k];
        for (long u = -report.shift_range; u <= report.shift_range; ++u) {
            CosetKey shifted = shift_coset(ps, mpz_class(u), key);
            auto it = mass.find(shifted);
            mpq_class m2 = it == mass.end() ? mpq_class(0) : it->second;
            bool ok = (m == m2);
            if (record_transcript)
                report.checks.push_back(AbsorbingCheck{k, u, m, m2});
            if (!ok) {
                report.absorbing = false;
                if (!report.has_violation()) {
                    if (!record_transcript)
                        report.checks.push_back(AbsorbingCheck{k, u, m, m2});
                    report.first_violation = report.checks.size() - 1;
                }
            }
        }
    }
    return report;
}

enum class GeneratingVerdict { verified, inconclusive };

struct GeneratingReport {
    GeneratingVerdict verdict = GeneratingVerdict::inconclusive;
    long depth = 0;
    std::vector<std::pair<AffineElement, long>> found; // generator, first length reached
    std::vector<AffineElement> missing;
    std::size_t explored = 0;
    bool truncated = false;
};

inline std::vector<AffineElement> default_generators(const PrimeSet& ps) {
    const std::size_t l = ps.size();
    std::vector<AffineElement> gens;
    gens.push_back(AffineElement{SInteger::from_integer(ps, 1), SUnit::identity(l)});
    gens.push_back(AffineElement{SInteger::from_integer(ps, -1), SUnit::identity(l)});
    for (std::size_t i = 0; i < l; ++i) {
        gens.push_back(AffineElement{SInteger::zero(l), SUnit::prime_power(l, i, 1)});
        gens.push_back(AffineElement{SInteger::zero(l), SUnit::prime_power(l, i, -1)});
    }
    return gens;
}

/// Breadth-first search over products of support elements up to the given
/// length.  "verified" means every listed generator was reached; anything
/// else is inconclusive (semigroup membership is not decidable here in
/// general).
inline GeneratingReport check_generating(const PrimeSet& ps, const GroupMeasure& tau,
                                         const std::vector<AffineElement>& generators,
                                         long depth, std::size_t max_elements = 200000) {
    GeneratingReport report;
    report.depth = depth;

    std::vector<AffineElement> support;
    support.reserve(tau.size());
    for (const auto& [g, w] : tau.atoms()) support.push_back(g);

    std::set<AffineElement, AffineElementLess> reachable;
    std::set<AffineElement, AffineElementLess> wanted(generators.begin(), generators.end());
    std::map<AffineElement, long, AffineElementLess> found_depth;

    std::vector<AffineElement> frontier;
    auto visit = [&](const AffineElement& g, long d) {
        if (!reachable.insert(g).second) return;
        frontier.push_back(g);
        if (wanted.erase(g)) found_depth.emplace(g, d);
    };

    for (const auto& g : support) visit(g, 1);
    for (long d = 2; d <= depth && !wanted.empty(); ++d) {
        std::vector<AffineElement> prev;
        prev.swap(frontier);
        for (const auto& f : prev) {
            for (const auto& a : support) {
                visit(mult(ps, f, a), d);
                if (reachable.size() > max_elements) {
                    report.truncated = true;
                    break;
                }
            }
            if (report.truncated) break;
        }
        if (report.truncated) break;
    }

    report.explored = reachable.size();
    for (const auto& g : generators) {
        auto it = found_depth.find(g);
        if (it != found_depth.end())
            report.found.emplace_back(g, it->second);
        else
            report.missing.push_back(g);
    }
    report.verdict =
        report.missing.empty() ? GeneratingVerdict::verified : GeneratingVerdict::inconclusive;
    return report;
}

// ---- drift-targeted design -------------------------------------------------

struct IotaDesign {
    IntegerMeasure iota;
    long power = 0;     // N: the convolution power of sigma used
    mpq_class weight;   // w: mass placed on sigma^{*N}; 1 - w sits on delta_0
};

/// The default step measure on Z used by the designer: mean 1, generating,
/// 0 in its support, so unit drift targets stay at the first convolution
/// power and the designed tau stays small.
inline IntegerMeasure default_sigma() {
    IntegerMeasure m;
    m.add_mass(-1, mpq_class(1, 8));
    m.add_mass(0, mpq_class(1, 8));
    m.add_mass(1, mpq_class(3, 8));
    m.add_mass(2, mpq_class(3, 8));
    return m;
}

/// iota = w * sigma^{*N} + (1 - w) * delta_0 with w = c/(E[sigma]*N), N
/// minimal subject to w <= 1 and the support condition
/// supp(sigma^{*N}) u {0} >= support_goal (the {0} only participates when
/// w < 1).  The mean of the result is exactly c.
inline IotaDesign design_iota(const mpq_class& target, const IntegerMeasure& sigma,
                              const std::vector<long>& support_goal) {
    if (target <= 0) throw std::domain_error("drift target must be positive");
    if (sigma.empty() || !sigma.is_probability())
        throw std::invalid_argument("design_iota: sigma must be a probability measure");

    mpq_class E = mean(sigma);
    if (E == 0) throw std::domain_error("design_iota: sigma must have non-zero mean");
    if (E < 0)
        throw std::domain_error("design_iota: sigma mean must be positive for a positive target");

    // Semigroup-generation of Z: gcd of the support is 1 and both signs occur.
    {
        mpz_class g = 0;
        bool pos = false, neg_ = false;
        for (const auto& [x, w] : sigma.atoms()) {
            mpz_class ax = abs(mpz_class(x));
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ax.get_mpz_t());
            pos = pos || x > 0;
            neg_ = neg_ || x < 0;
        }
        if (g != 1 || !pos || !neg_)
            throw std::domain_error(
                "design_iota: sigma support must generate the integers as a semigroup");
    }

    std::set<long> goal(support_goal.begin(), support_goal.end());
    long max_abs_goal = 0;
    for (long g : goal) max_abs_goal = std::max(max_abs_goal, g >= 0 ? g : -g);

    // First N with w <= 1 is ceil(target / E); beyond that only the support
    // condition can postpone, and it repeats with the parity pattern of
    // sigma, so a bounded scan decides reachability.
    mpq_class ratio = target / E;
    mpz_class first_ok;
    mpz_cdiv_q(first_ok.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
    if (first_ok < 1) first_ok = 1;
    if (first_ok > 4096) throw std::domain_error("design_iota: target needs convolution power > 4096");
    long cap = first_ok.get_si() + 64 + 4 * max_abs_goal;

    IntegerMeasure power = sigma;
    for (long n = 1; n <= cap; ++n) {
        mpq_class w = target / (E * n);
        if (w <= 1) {
            bool covered = true;
            for (long g : goal) {
                bool in_power = power.mass_at(g) > 0;
                if (!in_power && !(w < 1 && g == 0)) {
                    covered = false;
                    break;
                }
            }
            if (covered) {
                IotaDesign out;
                out.power = n;
                out.weight = w;
                for (const auto& [x, wx] : power.atoms()) out.iota.add_mass(x, w * wx);
                if (w < 1) out.iota.add_mass(0, 1 - w);
                return out;
            }
        }
        if (n < cap) power = convolve(power, sigma);
    }

    long missing = 0;
    for (long g : goal)
        if (power.mass_at(g) == 0 && g != 0) {
            missing = g;
            break;
        }
    throw std::domain_error("design_iota: support goal point " + std::to_string(missing) +
                            " unreachable with the given sigma");
}

/// End-to-end design: one iota per prime with exact mean c_i, kappa uniform
/// on the translation parts of the generator list, tau via the product
/// ansatz.  The resulting drift is exactly (-c_1 log p_1, ..., -c_l log p_l).
struct DesignResult {
    SIntegerMeasure kappa;
    std::vector<IotaDesign> iotas;
    GroupMeasure tau;
    DriftVector exact_drift;
};

inline DesignResult design_tau(const PrimeSet& ps, const std::vector<mpq_class>& targets,
                               const IntegerMeasure& sigma,
                               const std::vector<AffineElement>& generators) {
    if (targets.size() != ps.size())
        throw std::invalid_argument("design_tau: need one target per prime");
    if (generators.empty()) throw std::invalid_argument("design_tau: empty generator list");

    DesignResult out;

    std::vector<SInteger> translations;
    for (const auto& g : generators) translations.push_back(g.r);
    out.kappa = SIntegerMeasure::uniform(translations);

    std::vector<IntegerMeasure> iotas;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::vector<long> goal;
        for (const auto& g : generators) goal.push_back(g.s.exp(i));
        out.iotas.push_back(design_iota(targets[i], sigma, goal));
        iotas.push_back(out.iotas.back().iota);
    }

    out.tau = build_tau(ps, out.kappa, iotas);
    out.exact_drift = drift(ps, out.tau);
    return out;
}

inline DesignResult design_tau(const PrimeSet& ps, const std::vector<mpq_class>& targets) {
    return design_tau(ps, targets, default_sigma(), default_generators(ps));
}

} // namespace sarw
