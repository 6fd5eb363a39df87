#pragma once

#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "fqcorr/bigint.hpp"
#include "fqcorr/factor.hpp"
#include "fqcorr/poly.hpp"

namespace fqcorr {

// Brute-force search oracles for the sums-of-two-squares detector b and the
// representation count r, independent of the factorization pipeline. A
// representation f = A^2 + T B^2 of a monic degree-n polynomial forces
// deg A <= floor(n/2) and deg B <= floor((n-1)/2); both spaces are scanned
// exhaustively. Guarded at degree 8 where the scan is still instant.

namespace detail {

constexpr int kOracleDegreeCap = 8;

inline void check_oracle_input(const Poly& f) {
    if (!f.is_monic()) throw std::invalid_argument("oracle expects a monic polynomial");
    if (f.degree() > kOracleDegreeCap)
        throw std::invalid_argument("oracle degree guard: deg f <= 8 required");
    Int scan = int_pow(Int(f.field().q()), unsigned(f.degree() / 2 + 1));
    if (scan > 100'000'000)
        throw std::invalid_argument("oracle cost guard: q^(deg/2+1) too large");
}

// Counts ordered pairs (A, B) with f = A^2 + T B^2.
inline Int ordered_pair_count(const Poly& f, bool stop_at_first) {
    const PrimeField& F = f.field();
    int n = f.degree();
    uint64_t a_count = 1, b_count = 1;
    for (int i = 0; i <= n / 2; ++i) a_count *= F.q();
    if (n >= 1)
        for (int i = 0; i <= (n - 1) / 2; ++i) b_count *= F.q();

    // Index every value A^2 with its multiplicity, then look up f - T B^2.
    std::unordered_map<uint64_t, uint32_t> squares;
    squares.reserve(size_t(a_count));
    for (uint64_t ia = 0; ia < a_count; ++ia) {
        Poly a = Poly::from_index(F, ia);
        ++squares[(a * a).to_index()];
    }
    Poly t = Poly::variable(F);
    Int total = 0;
    for (uint64_t ib = 0; ib < b_count; ++ib) {
        Poly b = Poly::from_index(F, ib);
        Poly rest = f - t * (b * b);
        if (rest.degree() > n) continue;
        auto it = squares.find(rest.to_index());
        if (it != squares.end()) {
            total += it->second;
            if (stop_at_first) return total;
        }
    }
    return total;
}

}  // namespace detail

inline Int bq_oracle(const Poly& f) {
    detail::check_oracle_input(f);
    return detail::ordered_pair_count(f, true) > 0 ? 1 : 0;
}

// Representations counted up to the simultaneous sign flip (A, B) -> (-A, -B);
// the flip is free on every pair since f != 0 excludes A = B = 0.
inline Int rq_oracle(const Poly& f) {
    detail::check_oracle_input(f);
    return detail::ordered_pair_count(f, false) / 2;
}

// Independent route: enumerate all monic divisors from the factorization and
// sum the quadratic character of each reassembled divisor.
inline Int rq_divisor_sum(const Poly& f, RandomSource& rng) {
    if (f.is_zero()) throw std::domain_error("divisor sum of the zero polynomial");
    Factorization fac = factor(f, rng);
    Int sum = 0;
    Poly divisor = Poly::one(f.field());
    std::vector<int> exps(fac.factors.size(), 0);
    std::function<void(size_t, Poly)> walk = [&](size_t i, Poly d) {
        if (i == fac.factors.size()) {
            sum += d.chi();
            return;
        }
        for (int e = 0; e <= fac.factors[i].exponent; ++e) {
            walk(i + 1, d);
            if (e < fac.factors[i].exponent) d = d * fac.factors[i].prime;
        }
    };
    walk(0, divisor);
    return sum;
}

}  // namespace fqcorr
