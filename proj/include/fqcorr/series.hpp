#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fqcorr/bigint.hpp"
#include "fqcorr/local_density.hpp"
#include "fqcorr/shifts.hpp"

namespace fqcorr {

namespace detail {

// Generic truncated Euler-type product over the chi = -1 primes of degree
// <= cutoff. The per-prime factor depends only on |P| = q^d, so each degree
// contributes factor(q^d)^count. Rounding slack is tracked per operation.
template <class FactorFn>
inline long double chi_minus_product(const PrimeField& field, int cutoff, FactorFn factor_of,
                                     double& rounding_slack_rel) {
    long double prod = 1.0L;
    long long ops = 0;
    for (int d = 1; d <= cutoff; ++d) {
        int64_t count = chi_minus_count(field, d);
        if (count == 0) continue;
        long double Q = std::pow((long double)field.q(), (long double)d);
        prod *= std::pow(factor_of(Q), (long double)count);
        ops += 2;
    }
    rounding_slack_rel = double(ops + 16) * std::numeric_limits<double>::epsilon() * 4;
    return prod;
}

}  // namespace detail

// S_h = 2^(k - #{distinct constant terms}); the large-q limit of the
// singular series.
inline Rat limit_singular_series(const ShiftTuple& h) {
    std::vector<uint32_t> constants;
    for (const Poly& s : h.shifts()) constants.push_back(s.constant_term());
    std::sort(constants.begin(), constants.end());
    constants.erase(std::unique(constants.begin(), constants.end()), constants.end());
    return Rat(int_pow(Int(2), unsigned(h.k() - int(constants.size()))));
}

// Exact finite part of the singular series: the T-factor together with the
// factors at chi = -1 primes dividing Delta_h, normalized so that the
// remaining product over all other chi = -1 primes (the tail) is shared by
// every tuple with the same k. Returns 0 exactly when a local obstruction
// exists.
inline Rat singular_series_finite_part(const ShiftTuple& h, RandomSource& rng,
                                       uint64_t residue_budget = kDefaultResidueBudget) {
    const PrimeField& F = h.field();
    int k = h.k();
    Poly T = Poly::variable(F);
    Rat delta_T = delta(T, h, residue_budget).value;
    if (delta_T == 0) return Rat(0);
    // delta_{q,0}(T) = 1/2 exactly, so dividing by its k-th power is *2^k.
    Rat part = delta_T * int_pow(Int(2), unsigned(k));

    std::vector<Poly> divisors;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            for (const auto& [prime, exp] : factor(h.at(i) - h.at(j), rng).factors)
                if (prime.chi() == -1) divisors.push_back(prime);
    std::sort(divisors.begin(), divisors.end(), Poly::index_less);
    divisors.erase(std::unique(divisors.begin(), divisors.end()), divisors.end());
    for (const Poly& P : divisors) {
        Rat dp = delta(P, h, residue_budget).value;
        if (dp == 0) return Rat(0);
        Int Q = int_pow(Int(F.q()), unsigned(P.degree()));
        part *= dp / (1 - Rat(k, Q + 1));
    }
    return part;
}

// Ratio of two singular series with the same k. The infinite tail product
// depends only on (q, k) and cancels, so the ratio is an exact rational.
inline Rat singular_series_ratio(const ShiftTuple& ha, const ShiftTuple& hb, RandomSource& rng,
                                 uint64_t residue_budget = kDefaultResidueBudget) {
    if (ha.k() != hb.k())
        throw std::invalid_argument("series ratio requires tuples of equal length");
    Rat fb = singular_series_finite_part(hb, rng, residue_budget);
    if (fb == 0) throw std::domain_error("denominator tuple has a local obstruction");
    return singular_series_finite_part(ha, rng, residue_budget) / fb;
}

// The singular series S_{q,h} as a truncated product with a rigorous tail
// bound. The exact finite part multiplies the shared tail
//   prod over chi = -1 primes of (1 - k/(|P|+1)) / (1 - 1/(|P|+1))^k,
// truncated at degree cutoff. Beyond the cutoff each per-prime log defect
// a_P satisfies 0 <= a_P <= k^2 |P|^{-2} once |P| >= 2k - 1 (power series
// comparison), and there are at most q^d primes of degree d, so the missing
// exponent is at most k^2 q^{-cutoff}/(q-1). The enumerated degrees assert
// the same envelope numerically before it is trusted.
inline BoundedReal singular_series(const ShiftTuple& h, int cutoff, RandomSource& rng,
                                   uint64_t residue_budget = kDefaultResidueBudget) {
    const PrimeField& F = h.field();
    int k = h.k();
    Poly delta_h = h.difference_product();
    int min_cutoff = std::max(1, delta_h.degree());
    if (cutoff < min_cutoff)
        throw std::invalid_argument("cutoff must be at least max(1, deg Delta_h)");
    Rat finite = singular_series_finite_part(h, rng, residue_budget);
    if (finite == 0) return {0.0, 0.0};

    if (std::pow(double(F.q()), double(cutoff + 1)) < double(2 * k - 1))
        throw std::invalid_argument("cutoff too small for the tail envelope at this k");

    double slack_rel = 0.0;
    long double tail = detail::chi_minus_product(
        F, cutoff,
        [&](long double Q) {
            // Numeric validation of the tail envelope wherever it applies.
            if (Q >= 2 * k - 1) {
                long double defect = (long double)k * std::log1p(-1.0L / (Q + 1)) -
                                     std::log1p(-(long double)k / (Q + 1));
                long double envelope = (long double)k * k / (Q * Q);
                if (!(defect >= -1e-18L && defect <= envelope * (1 + 1e-12L) + 1e-18L))
                    throw std::logic_error("per-prime tail envelope violated");
            }
            return (1.0L - (long double)k / (Q + 1)) /
                   std::pow(1.0L - 1.0L / (Q + 1), (long double)k);
        },
        slack_rel);

    double value = double((long double)rat_double(finite) * tail);
    double tail_bound =
        double(k) * k * std::pow(double(F.q()), -double(cutoff)) / double(F.q() - 1);
    double err = value * (1.0 - std::exp(-tail_bound)) + std::abs(value) * slack_rel;
    return {value, err};
}

// K_q = (1 - 1/q)^{-1/2} prod over chi = -1 primes of (1 - |P|^{-2})^{-1/2},
// truncated at degree cutoff. Tail: each missing factor raises the log by
// at most |P|^{-2}, giving exponent at most q^{-cutoff}/(q-1).
inline BoundedReal landau_constant(const PrimeField& field, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
    double slack_rel = 0.0;
    long double prod = detail::chi_minus_product(
        field, cutoff, [](long double Q) { return 1.0L / std::sqrt(1.0L - 1.0L / (Q * Q)); },
        slack_rel);
    long double value =
        prod / std::sqrt(1.0L - 1.0L / (long double)field.q());
    double tail_bound = std::pow(double(field.q()), -double(cutoff)) / double(field.q() - 1);
    double err =
        double(value) * (std::exp(tail_bound) - 1.0) + double(value) * slack_rel;
    return {double(value), err};
}

// Local densities for the prime-shifted-by-a-square problem. rho_q(P) is the
// two-variable baseline, rho_{q,h}(P) the shifted count.
inline Rat rho_plain(const Poly& P) {
    Int Q = int_pow(Int(P.field().q()), unsigned(P.degree()));
    Rat delta0;
    switch (P.chi()) {
        case 1: delta0 = 1; break;
        case 0: delta0 = Rat(1, 2); break;
        default: delta0 = 1 - Rat(1, Q + 1); break;
    }
    return (1 - Rat(1, Q)) * delta0;
}

inline Rat rho(const Poly& P, const Poly& h1) {
    if (h1.is_zero()) throw std::invalid_argument("rho requires a nonzero shift");
    Int Q = int_pow(Int(P.field().q()), unsigned(P.degree()));
    switch (P.chi()) {
        case 1:
            return 1 - Rat(1, Q);
        case -1:
            if (valuation(h1, P) > 0) return 1 - Rat(1, Q);
            return 1 - Rat(1, Q) - Rat(1, Q + 1);
        default: {
            int chi_h = h1.chi();
            return Rat(1, 2) - Rat(1 + chi_h, 2 * int64_t(P.field().q()));
        }
    }
}

// T_{q,h} = prod over primes of rho_{q,h}(P) / rho_q(P). chi = +1 primes
// contribute 1; the T-factor and the chi = -1 primes dividing h are exact;
// the remaining chi = -1 primes contribute 1 - 1/(|P|^2 - |P|) each,
// truncated at degree cutoff with tail exponent at most 3 q^{-cutoff}/(q-1).
inline BoundedReal T_constant(const PrimeField& field, const Poly& h1, int cutoff,
                              RandomSource& rng) {
    if (h1.is_zero()) throw std::invalid_argument("T_constant requires a nonzero shift");
    if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
    Poly T = Poly::variable(field);
    Rat finite = rho(T, h1) / rho_plain(T);

    std::vector<Poly> divisors;
    for (const auto& [prime, exp] : factor(h1, rng).factors)
        if (prime.chi() == -1) divisors.push_back(prime);
    for (const Poly& P : divisors) finite *= rho(P, h1) / rho_plain(P);

    // Per-degree division counts: how many chi = -1 primes of degree d divide h1.
    std::map<int, int> dividing_by_degree;
    for (const Poly& P : divisors) ++dividing_by_degree[P.degree()];

    long double prod = 1.0L;
    long long ops = 0;
    for (int d = 1; d <= cutoff; ++d) {
        int64_t count = chi_minus_count(field, d) -
                        (dividing_by_degree.count(d) ? dividing_by_degree[d] : 0);
        if (count <= 0) continue;
        long double Q = std::pow((long double)field.q(), (long double)d);
        prod *= std::pow(1.0L - 1.0L / (Q * Q - Q), (long double)count);
        ops += 2;
    }
    double slack_rel = double(ops + 16) * std::numeric_limits<double>::epsilon() * 4;
    double value = double((long double)rat_double(finite) * prod);
    double tail_bound = 3.0 * std::pow(double(field.q()), -double(cutoff)) / double(field.q() - 1);
    double err = std::abs(value) * (1.0 - std::exp(-tail_bound)) + std::abs(value) * slack_rel;
    return {value, err};
}

}  // namespace fqcorr
