#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "fqcorr/bigint.hpp"
#include "fqcorr/sft.hpp"
#include "fqcorr/shifts.hpp"

namespace fqcorr {

// Conjugacy datum on the group of signed permutations of degree n: for each
// cycle length d, the number of cycles whose sign product is +1 resp. -1.
// Averages of class functions run over these types instead of the 2^n n!
// elements.
struct SignedCycleType {
    struct Part {
        int length;
        int plus;   // cycles of this length with sign +1
        int minus;  // cycles of this length with sign -1
    };
    std::vector<Part> parts;  // strictly decreasing lengths

    int degree() const {
        int n = 0;
        for (const Part& p : parts) n += p.length * (p.plus + p.minus);
        return n;
    }
};

// Visits every signed cycle type of degree n exactly once: partitions of n
// refined by a sign split of each length multiplicity.
inline void for_each_signed_cycle_type(int n,
                                       const std::function<void(const SignedCycleType&)>& fn) {
    if (n < 1) throw std::invalid_argument("degree must be >= 1");
    SignedCycleType type;
    std::function<void(int, int)> rec = [&](int remaining, int max_len) {
        if (remaining == 0) {
            fn(type);
            return;
        }
        for (int d = std::min(remaining, max_len); d >= 1; --d) {
            for (int m = 1; m * d <= remaining; ++m) {
                for (int plus = 0; plus <= m; ++plus) {
                    type.parts.push_back({d, plus, m - plus});
                    rec(remaining - m * d, d - 1);
                    type.parts.pop_back();
                }
            }
        }
    };
    rec(n, n);
}

inline Int hyperoctahedral_order(int n) { return int_pow(Int(2), unsigned(n)) * factorial(n); }

// Size of the conjugacy class with the given signed cycle type:
//   n! / prod_d (d^{m_d} m_d!) permutations of that cycle type, times
//   C(m_d, m_d^+) sign patterns across equal-length cycles, times
//   2^{(d-1) m_d} sign vectors per cycle realizing a fixed cycle sign.
inline Int class_size(const SignedCycleType& type) {
    int n = type.degree();
    Int size = factorial(n);
    for (const auto& p : type.parts) {
        int m = p.plus + p.minus;
        size /= int_pow(Int(p.length), unsigned(m)) * factorial(m);
        size *= binomial(m, p.plus);
        size *= int_pow(Int(2), unsigned((p.length - 1) * m));
    }
    return size;
}

// Group elements have squarefree type: every cycle is one "prime" with
// exponent 1 and sign +-1.
inline SignedFactorizationType sft_of_type(const SignedCycleType& type) {
    SignedFactorizationType lambda;
    for (const auto& p : type.parts) {
        lambda.add(p.length, 1, 1, p.plus);
        lambda.add(p.length, 1, -1, p.minus);
    }
    return lambda;
}

inline int total_sign_of_type(const SignedCycleType& type) {
    int minus = 0;
    for (const auto& p : type.parts) minus += p.minus;
    return minus % 2 == 0 ? 1 : -1;
}

// Mean of psi over the full group of degree n, exact.
inline Rat average(const ArithmeticFunction& psi, int n) {
    Int sum = 0;
    for_each_signed_cycle_type(n, [&](const SignedCycleType& t) {
        Int v = psi(sft_of_type(t));
        if (v != 0) sum += class_size(t) * v;
    });
    return Rat(sum, hyperoctahedral_order(n));
}

// Class sums conditioned on the total sign: S_+ over elements of sign +1,
// S_- over sign -1. S_+ + S_- = |H_n| * average(psi, n).
inline std::pair<Rat, Rat> signed_sums(const ArithmeticFunction& psi, int n) {
    Int plus = 0, minus = 0;
    for_each_signed_cycle_type(n, [&](const SignedCycleType& t) {
        Int v = psi(sft_of_type(t));
        if (v == 0) return;
        (total_sign_of_type(t) == 1 ? plus : minus) += class_size(t) * v;
    });
    return {Rat(plus), Rat(minus)};
}

// Average over the fiber product of t copies of the group glued along the
// total sign: tuples (g_1, ..., g_t) with all chi(g_i) equal. The subgroup
// has index 2^{t-1}, and the product statistic factors sign-wise, giving
//   2^{t-1} (prod S_i^+ + prod S_i^-) / |H_n|^t.
inline Rat fiber_average(const std::vector<ArithmeticFunction>& psis, int n) {
    if (psis.empty()) throw std::invalid_argument("fiber_average needs at least one function");
    Rat plus_prod = 1, minus_prod = 1;
    for (const auto& psi : psis) {
        auto [sp, sm] = signed_sums(psi, n);
        plus_prod *= sp;
        minus_prod *= sm;
    }
    Rat order_pow = Rat(int_pow(hyperoctahedral_order(n), unsigned(psis.size())));
    return int_pow(Int(2), unsigned(psis.size() - 1)) * (plus_prod + minus_prod) / order_pow;
}

// Indices 1..k grouped by the constant term of the corresponding shift.
struct ShiftPartition {
    std::vector<std::vector<int>> blocks;  // 0-based indices, block order by first index
};

inline ShiftPartition partition_from_shifts(const ShiftTuple& h) {
    ShiftPartition part;
    std::vector<uint32_t> block_constant;
    for (int i = 0; i < h.k(); ++i) {
        uint32_t c = h.at(i).constant_term();
        size_t b = 0;
        while (b < block_constant.size() && block_constant[b] != c) ++b;
        if (b == block_constant.size()) {
            block_constant.push_back(c);
            part.blocks.emplace_back();
        }
        part.blocks[b].push_back(i);
    }
    return part;
}

// Average over the product of per-block fiber products.
inline Rat partitioned_average(const std::vector<ArithmeticFunction>& psis,
                               const ShiftPartition& partition, int n) {
    size_t covered = 0;
    Rat result = 1;
    for (const auto& block : partition.blocks) {
        std::vector<ArithmeticFunction> block_psis;
        for (int i : block) {
            if (i < 0 || size_t(i) >= psis.size())
                throw std::invalid_argument("partition index out of range");
            block_psis.push_back(psis[size_t(i)]);
        }
        covered += block.size();
        result *= fiber_average(block_psis, n);
    }
    if (covered != psis.size())
        throw std::invalid_argument("partition must cover all function indices");
    return result;
}

// Literal enumeration of group elements as (sign vector, permutation) pairs,
// restricted to tuples of equal total sign. Oracle for fiber_average; the
// guard keeps the tuple count at |H_3|^2 / 2 = 1152 or below.
inline Rat brute_force_fiber_average(const std::vector<ArithmeticFunction>& psis, int n) {
    size_t t = psis.size();
    if (n > 3 || t > 2) throw std::invalid_argument("brute force guard: n <= 3 and t <= 2");
    if (t == 0) throw std::invalid_argument("need at least one function");

    struct Element {
        SignedFactorizationType lambda;
        int sign;
    };
    std::vector<Element> elements;
    std::vector<int> perm(size_t(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (uint32_t bits = 0; bits < (1u << n); ++bits) {
            SignedFactorizationType lambda;
            int total = 1;
            std::vector<bool> seen(size_t(n), false);
            for (int start = 0; start < n; ++start) {
                if (seen[size_t(start)]) continue;
                int len = 0, sign = 1, i = start;
                do {
                    seen[size_t(i)] = true;
                    if (bits & (1u << i)) sign = -sign;
                    i = perm[size_t(i)];
                    ++len;
                } while (i != start);
                lambda.add(len, 1, sign);
                if (sign == -1) total = -total;
            }
            elements.push_back({std::move(lambda), total});
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    Rat sum = 0;
    Int tuples = 0;
    if (t == 1) {
        for (const Element& e : elements) sum += Rat(psis[0](e.lambda));
        tuples = Int(elements.size());
    } else {
        for (const Element& a : elements)
            for (const Element& b : elements) {
                if (a.sign != b.sign) continue;
                tuples += 1;
                Int va = psis[0](a.lambda);
                if (va == 0) continue;
                sum += Rat(va * psis[1](b.lambda));
            }
    }
    return sum / Rat(tuples);
}

// The large-q main term of the k-point correlation at shift tuple h: the
// average over the sign-glued product group determined by the constant
// terms of the shifts.
inline Rat predicted_correlation(const std::vector<ArithmeticFunction>& psis,
                                 const ShiftTuple& h, int n) {
    if (int(psis.size()) != h.k())
        throw std::invalid_argument("need one function per shift");
    if (h.max_degree() >= n)
        throw std::invalid_argument("shift degrees must be below the polynomial degree");
    return partitioned_average(psis, partition_from_shifts(h), n);
}

}  // namespace fqcorr
