#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fqcorr/bigint.hpp"
#include "fqcorr/poly.hpp"
#include "fqcorr/prime_field.hpp"
#include "fqcorr/rng.hpp"

namespace fqcorr {

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m) {
    return Poly::mod(a * b, m);
}

inline Poly powmod(Poly base, const Int& exp, const Poly& m) {
    Poly r = Poly::one(m.field());
    base = Poly::mod(base, m);
    unsigned bits = exp == 0 ? 0 : boost::multiprecision::msb(exp) + 1;
    for (unsigned i = 0; i < bits; ++i) {
        if (boost::multiprecision::bit_test(exp, i)) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
    }
    return r;
}

namespace detail {

// f(T) with every exponent divisible by p is g(T)^p with g obtained by
// dividing exponents by p; coefficients are Frobenius-fixed in a prime field.
inline Poly pth_root(const Poly& f) {
    uint32_t p = f.field().q();
    std::vector<uint32_t> c(size_t(f.degree() / int(p)) + 1);
    for (size_t i = 0; i < c.size(); ++i) c[i] = f.coeff(int(i * p));
    return Poly::from_coeffs(f.field(), std::move(c));
}

// Squarefree decomposition of monic f into pairwise coprime squarefree
// monic parts with multiplicities, correct in odd characteristic: the
// classic gcd ladder extracts multiplicities prime to p, and the leftover
// p-th power part recurses through its p-th root.
inline void squarefree_recurse(const Poly& f, int scale,
                               std::vector<std::pair<Poly, int>>& out) {
    if (f.degree() < 1) return;
    uint32_t p = f.field().q();
    Poly df = f.derivative();
    if (df.is_zero()) {
        squarefree_recurse(pth_root(f), scale * int(p), out);
        return;
    }
    Poly c = Poly::gcd(f, df);
    Poly w = Poly::divrem(f, c).first;
    int i = 1;
    while (!w.is_one()) {
        Poly y = Poly::gcd(w, c);
        Poly z = Poly::divrem(w, y).first;
        if (z.degree() > 0) out.emplace_back(z, i * scale);
        w = std::move(y);
        c = Poly::divrem(c, w).first;
        ++i;
    }
    if (!c.is_one()) squarefree_recurse(pth_root(c), scale * int(p), out);
}

// Distinct-degree factorization of monic squarefree g: returns pairs
// (product of the irreducible factors of degree d, d).
inline std::vector<std::pair<Poly, int>> distinct_degree(Poly g) {
    std::vector<std::pair<Poly, int>> out;
    const PrimeField& F = g.field();
    Poly t = Poly::variable(F);
    Poly h = Poly::mod(t, g);
    int d = 0;
    while (g.degree() >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, Int(F.q()), g);
        Poly sep = Poly::gcd(g, h - t);
        if (sep.degree() > 0) {
            out.emplace_back(sep, d);
            g = Poly::divrem(g, sep).first;
            h = Poly::mod(h, g);
        }
    }
    if (g.degree() > 0) out.emplace_back(g, g.degree());
    return out;
}

// Cantor-Zassenhaus equal-degree splitting for odd q. v is monic squarefree
// with all irreducible factors of degree d. Random element powering splits
// with probability about 1/2 per round; termination is almost sure.
inline void equal_degree_split(const Poly& v, int d, RandomSource& rng,
                               std::vector<Poly>& out) {
    if (v.degree() == d) {
        out.push_back(v);
        return;
    }
    const PrimeField& F = v.field();
    Int e = (int_pow(Int(F.q()), unsigned(d)) - 1) / 2;
    for (;;) {
        uint64_t n = uint64_t(v.degree());
        std::vector<uint32_t> coeffs(n);
        for (auto& c : coeffs) c = uint32_t(rng.below(F.q()));
        Poly a = Poly::from_coeffs(F, std::move(coeffs));
        if (a.degree() < 1) continue;
        Poly g = Poly::gcd(v, a);
        if (g.degree() == 0) {
            Poly b = powmod(a, e, v);
            g = Poly::gcd(v, b - Poly::one(F));
        }
        if (g.degree() > 0 && g.degree() < v.degree()) {
            equal_degree_split(g, d, rng, out);
            equal_degree_split(Poly::divrem(v, g).first, d, rng, out);
            return;
        }
    }
}

}  // namespace detail

// Rabin irreducibility test: f of degree n is irreducible iff T^(q^n) = T
// mod f and gcd(T^(q^(n/l)) - T, f) = 1 for every prime l dividing n.
inline bool is_irreducible(const Poly& f0) {
    if (f0.degree() < 1) throw std::invalid_argument("is_irreducible requires degree >= 1");
    if (f0.degree() == 1) return true;
    Poly f = f0.monic();
    const PrimeField& F = f.field();
    int n = f.degree();

    // Cheap exact pre-filter for small q: scan for roots.
    if (F.q() <= 64) {
        for (uint32_t c = 0; c < F.q(); ++c)
            if (f.eval(c) == 0) return false;
        if (n <= 3) return true;  // no roots and degree <= 3
    }

    std::vector<int> checkpoints;
    int m = n;
    for (int l = 2; l * l <= m; ++l)
        while (m % l == 0) {
            checkpoints.push_back(n / l);
            m /= l;
        }
    if (m > 1) checkpoints.push_back(n / m);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

    Poly t = Poly::mod(Poly::variable(F), f);
    Poly h = t;
    size_t next_cp = 0;
    for (int i = 1; i <= n; ++i) {
        h = powmod(h, Int(F.q()), f);
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == i) {
            ++next_cp;
            Poly diff = h - t;
            if (diff.is_zero() || Poly::gcd(f, diff).degree() > 0) return false;
        }
    }
    return h == t;
}

// Largest e with P^e dividing f. f must be nonzero (the valuation of 0 is
// infinite); P monic irreducible.
inline int valuation(const Poly& f, const Poly& P) {
    if (f.is_zero()) throw std::domain_error("valuation of the zero polynomial is infinite");
    if (P.degree() < 1 || !P.is_monic()) throw std::invalid_argument("valuation needs a monic prime");
    int e = 0;
    Poly g = f;
    for (;;) {
        auto [quot, rem] = Poly::divrem(g, P);
        if (!rem.is_zero()) return e;
        g = std::move(quot);
        ++e;
    }
}

struct PrimePower {
    Poly prime;
    int exponent;
};

// Complete factorization f = unit * prod prime^exponent with monic
// irreducible, pairwise distinct primes, sorted in enumeration order.
// The ordering makes the result independent of the splitting randomness.
struct Factorization {
    FFElem unit;
    std::vector<PrimePower> factors;

    Poly reassemble() const {
        Poly r = Poly::constant(unit.field(), unit.value());
        for (const auto& [prime, exponent] : factors)
            for (int i = 0; i < exponent; ++i) r = r * prime;
        return r;
    }
};

inline Factorization factor(const Poly& f, RandomSource& rng) {
    if (f.is_zero()) throw std::domain_error("cannot factor the zero polynomial");
    Factorization result{FFElem(f.field(), f.leading()), {}};
    if (f.degree() < 1) return result;
    Poly fm = f.monic();

    std::vector<std::pair<Poly, int>> squarefree;
    detail::squarefree_recurse(fm, 1, squarefree);
    for (const auto& [part, mult] : squarefree) {
        for (const auto& [grouped, d] : detail::distinct_degree(part)) {
            std::vector<Poly> primes;
            detail::equal_degree_split(grouped, d, rng, primes);
            for (Poly& P : primes) result.factors.push_back({std::move(P), mult});
        }
    }
    std::sort(result.factors.begin(), result.factors.end(),
              [](const PrimePower& a, const PrimePower& b) {
                  return Poly::index_less(a.prime, b.prime);
              });
    return result;
}

}  // namespace fqcorr
