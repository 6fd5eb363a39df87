#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fqcorr/bigint.hpp"
#include "fqcorr/factor.hpp"
#include "fqcorr/poly.hpp"
#include "fqcorr/shifts.hpp"

namespace fqcorr {

// A floating approximation together with a rigorous bound on its distance
// from the true value (truncation tail plus rounding slack).
struct BoundedReal {
    double value = 0.0;
    double error_bound = 0.0;
};

struct LocalDensity {
    Poly prime;
    Rat value;  // in [0, 1]
};

inline constexpr uint64_t kDefaultResidueBudget = 10'000'000;

struct BudgetExceeded : std::runtime_error {
    Int required;
    explicit BudgetExceeded(Int req)
        : std::runtime_error("residue enumeration needs budget >= " + req.str()),
          required(std::move(req)) {}
};

// chi = -1 monic irreducibles of a given degree, found by filtering the full
// enumeration; cached per (q, degree) since series evaluation revisits them.
// Population is serialized by a mutex; vectors are stable once inserted.
inline const std::vector<Poly>& chi_minus_primes(const PrimeField& field, int degree) {
    static std::mutex mutex;
    static std::map<std::pair<uint32_t, int>, std::vector<Poly>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(field.q(), degree);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Poly> primes;
    uint64_t count = 1;
    for (int i = 0; i < degree; ++i) count *= field.q();
    for (uint64_t idx = 0; idx < count; ++idx) {
        Poly p = Poly::monic_by_index(field, degree, idx);
        if (p.chi() == -1 && is_irreducible(p)) primes.push_back(std::move(p));
    }
    return cache.emplace(key, std::move(primes)).first->second;
}

inline int64_t chi_minus_count(const PrimeField& field, int degree) {
    return int64_t(chi_minus_primes(field, degree).size());
}

// Membership of f mod P^nu in the set of residues attained by A^2 + T B^2.
// Write f = P^alpha g with P not dividing g: for chi(P) = -1 membership
// means alpha even, for P = T it means chi(g) = +1, for chi(P) = +1 every
// residue qualifies. The zero residue is always a member.
inline bool in_A(const Poly& f, const Poly& P, int nu) {
    if (nu < 1) throw std::invalid_argument("in_A requires nu >= 1");
    int chi_p = P.chi();
    if (chi_p == 1) return true;
    Poly p_nu = Poly::one(P.field());
    for (int i = 0; i < nu; ++i) p_nu = p_nu * P;
    Poly r = Poly::mod(f, p_nu);
    if (r.is_zero()) return true;
    int alpha = 0;
    Poly g = r;
    for (;;) {
        auto [quot, rem] = Poly::divrem(g, P);
        if (!rem.is_zero()) break;
        g = std::move(quot);
        ++alpha;
    }
    if (chi_p == -1) return alpha % 2 == 0;
    return g.chi() == 1;  // chi_p == 0, i.e. P = T
}

// #A_q(P^nu), exact. Includes the zero residue.
inline Rat count_A(const Poly& P, int nu) {
    if (nu < 1) throw std::invalid_argument("count_A requires nu >= 1");
    Int Q = int_pow(Int(P.field().q()), unsigned(P.degree()));
    Int Qnu = int_pow(Q, unsigned(nu));
    switch (P.chi()) {
        case 1:
            return Rat(Qnu);
        case 0:
            return Rat(Qnu + 1, 2);
        default: {
            Rat main = Rat(Qnu) * (1 - Rat(1, Q + 1));
            Rat tail = (nu % 2 == 1) ? Rat(Q, Q + 1) : Rat(1, Q + 1);
            return main + tail;
        }
    }
}

struct OmegaCounts {
    int64_t omega = 0;       // members with some f + h_i = 0 mod P^nu
    int64_t omega_star = 0;  // members with every f + h_i nonzero mod P^nu
};

// Both counts at level nu > nu_h(P). Omega comes from the shift-difference
// criterion (k^2 membership tests); Omega* scans all |P|^nu residues and is
// guarded by the enumeration budget.
inline OmegaCounts omega_counts(const Poly& P, const ShiftTuple& h, int nu,
                                uint64_t residue_budget = kDefaultResidueBudget) {
    if (nu <= h.nu(P)) throw std::invalid_argument("omega_counts requires nu > nu_h(P)");
    Int residues = int_pow(Int(P.field().q()), unsigned(P.degree() * nu));
    if (residues > residue_budget) throw BudgetExceeded(residues);

    OmegaCounts out;
    for (int i = 0; i < h.k(); ++i) {
        bool all = true;
        for (int j = 0; j < h.k() && all; ++j)
            all = in_A(h.at(j) - h.at(i), P, nu);
        if (all) ++out.omega;
    }

    Poly p_nu = Poly::one(P.field());
    for (int i = 0; i < nu; ++i) p_nu = p_nu * P;
    uint64_t total = residues.convert_to<uint64_t>();
    for (uint64_t idx = 0; idx < total; ++idx) {
        Poly f = Poly::from_index(P.field(), idx);
        bool member = true;
        for (int i = 0; i < h.k() && member; ++i) {
            Poly shifted = Poly::mod(f + h.at(i), p_nu);
            member = !shifted.is_zero() && in_A(shifted, P, nu);
        }
        if (member) ++out.omega_star;
    }
    return out;
}

// The local density delta_{q,h}(P), exact. Case ladder: chi = +1 primes have
// density 1; chi = -1 primes away from Delta_h have the closed form
// 1 - k/(|P|+1); everything else reduces to the Omega counts at the minimal
// admissible level nu = nu_h(P) + 1.
inline LocalDensity delta(const Poly& P, const ShiftTuple& h,
                          uint64_t residue_budget = kDefaultResidueBudget) {
    if (!P.is_monic() || P.degree() < 1)
        throw std::invalid_argument("delta needs a monic irreducible prime");
    Int Q = int_pow(Int(P.field().q()), unsigned(P.degree()));
    int chi_p = P.chi();
    if (chi_p == 1) return {P, Rat(1)};
    if (chi_p == -1 && !h.divides_difference(P))
        return {P, 1 - Rat(h.k(), Q + 1)};

    int nu = h.nu(P) + 1;
    OmegaCounts oc = omega_counts(P, h, nu, residue_budget);
    Rat scale = Rat(1, int_pow(Q, unsigned(nu)));
    Rat value;
    if (chi_p == 0) {
        value = scale * (Rat(oc.omega_star) + Rat(oc.omega, 2));
    } else if (nu % 2 == 1) {
        value = scale * (Rat(oc.omega_star) + Rat(oc.omega) / (Q + 1));
    } else {
        value = scale * (Rat(oc.omega_star) + Rat(oc.omega) * Q / (Q + 1));
    }
    return {P, value};
}

// Closed forms for k = 2, h = (0, h1), with rho = v_P(h1); an independent
// check of delta.
inline LocalDensity delta_pair_closed_form(const Poly& P, const Poly& h1) {
    if (h1.is_zero()) throw std::invalid_argument("h1 must be nonzero");
    Int Q = int_pow(Int(P.field().q()), unsigned(P.degree()));
    int rho = valuation(h1, P);
    Int Qrho = int_pow(Q, unsigned(rho));
    switch (P.chi()) {
        case 1:
            return {P, Rat(1)};
        case -1:
            return {P, 1 - Rat(Qrho + 1, Qrho * (Q + 1))};
        default:
            return {P, Rat(1, 2) - Rat(1, 4 * Qrho) - Rat(1, 4 * Qrho * Q)};
    }
}

// Scans the finite candidate set {T} plus the chi = -1 primes dividing
// Delta_h; returns the first prime with vanishing local density, if any.
inline std::optional<Poly> has_local_obstruction(const ShiftTuple& h, RandomSource& rng,
                                                 uint64_t residue_budget = kDefaultResidueBudget) {
    std::vector<Poly> candidates{Poly::variable(h.field())};
    for (int i = 0; i < h.k(); ++i)
        for (int j = i + 1; j < h.k(); ++j)
            for (const auto& [prime, exp] : factor(h.at(i) - h.at(j), rng).factors)
                if (prime.chi() == -1) candidates.push_back(prime);
    std::sort(candidates.begin() + 1, candidates.end(), Poly::index_less);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const Poly& P : candidates)
        if (delta(P, h, residue_budget).value == 0) return P;
    return std::nullopt;
}

}  // namespace fqcorr
