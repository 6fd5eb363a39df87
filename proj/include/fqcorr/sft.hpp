#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fqcorr/bigint.hpp"
#include "fqcorr/factor.hpp"
#include "fqcorr/poly.hpp"

namespace fqcorr {

// Signed factorization type: the multiset of (degree, exponent, chi-sign)
// data of a prime factorization. Every arithmetic function in this library
// factors through it.
class SignedFactorizationType {
  public:
    struct Key {
        int d;  // prime degree, >= 1
        int e;  // exponent, >= 1
        int s;  // chi sign, in {-1, 0, +1}
        auto operator<=>(const Key&) const = default;
    };

    void add(int d, int e, int s, int mult = 1) {
        if (mult == 0) return;
        counts_[Key{d, e, s}] += mult;
    }

    int count(int d, int e, int s) const {
        auto it = counts_.find(Key{d, e, s});
        return it == counts_.end() ? 0 : it->second;
    }

    const std::map<Key, int>& counts() const { return counts_; }

    int degree() const {
        int deg = 0;
        for (const auto& [k, m] : counts_) deg += k.d * k.e * m;
        return deg;
    }

    bool operator==(const SignedFactorizationType&) const = default;

  private:
    std::map<Key, int> counts_;
};

inline SignedFactorizationType sft_of_poly(const Poly& f, RandomSource& rng) {
    if (!f.is_monic()) throw std::invalid_argument("sft_of_poly expects a monic polynomial");
    SignedFactorizationType lambda;
    for (const auto& [prime, exponent] : factor(f, rng).factors)
        lambda.add(prime.degree(), exponent, prime.chi());
    return lambda;
}

// Sum-of-two-squares indicator: 1 iff no chi = -1 prime occurs to an odd
// exponent.
inline Int b_of_sft(const SignedFactorizationType& lambda) {
    for (const auto& [k, m] : lambda.counts())
        if (k.s == -1 && k.e % 2 == 1 && m > 0) return 0;
    return 1;
}

// Representation count: prod (e+1) over chi = +1 primes when no chi = -1
// prime has odd exponent, else 0. Primes with chi = 0 contribute factor 1.
inline Int r_of_sft(const SignedFactorizationType& lambda) {
    Int r = 1;
    for (const auto& [k, m] : lambda.counts()) {
        if (k.s == -1 && k.e % 2 == 1 && m > 0) return 0;
        if (k.s == 1) r *= int_pow(Int(k.e + 1), unsigned(m));
    }
    return r;
}

// r-fold divisor function: prod C(e+r-1, r-1) over all prime powers.
inline Int dr_of_sft(const SignedFactorizationType& lambda, int r) {
    if (r < 2) throw std::invalid_argument("dr_of_sft requires r >= 2");
    Int v = 1;
    for (const auto& [k, m] : lambda.counts())
        v *= int_pow(binomial(k.e + r - 1, r - 1), unsigned(m));
    return v;
}

// Quadratic character through the type: 0 if a chi = 0 prime is present,
// else (-1)^(sum of exponents over chi = -1 primes).
inline int chi_of_sft(const SignedFactorizationType& lambda) {
    long parity = 0;
    for (const auto& [k, m] : lambda.counts()) {
        if (k.s == 0 && m > 0) return 0;
        if (k.s == -1) parity += long(k.e) * m;
    }
    return parity % 2 == 0 ? 1 : -1;
}

inline bool is_prime_power_sft(const SignedFactorizationType& lambda) {
    int total = 0;
    for (const auto& [k, m] : lambda.counts()) total += m;
    return total == 1;
}

inline int one_prime_of_sft(const SignedFactorizationType& lambda) {
    if (!is_prime_power_sft(lambda)) return 0;
    return lambda.counts().begin()->first.e == 1 ? 1 : 0;
}

// von Mangoldt: the degree of the underlying prime on prime powers, else 0.
inline int von_mangoldt_of_sft(const SignedFactorizationType& lambda) {
    if (!is_prime_power_sft(lambda)) return 0;
    return lambda.counts().begin()->first.d;
}

// Moebius: 0 when any exponent exceeds 1, else (-1)^(number of primes).
inline int mu_of_sft(const SignedFactorizationType& lambda) {
    int primes = 0;
    for (const auto& [k, m] : lambda.counts()) {
        if (k.e > 1 && m > 0) return 0;
        primes += m;
    }
    return primes % 2 == 0 ? 1 : -1;
}

// A named class function of the signed factorization type. All functions in
// the registry are integer valued, so evaluation returns an exact Int.
struct ArithmeticFunction {
    std::string name;
    std::function<Int(const SignedFactorizationType&)> eval;

    Int operator()(const SignedFactorizationType& lambda) const { return eval(lambda); }
};

// Registry lookup. Fixed names plus the parametric families d<r> and
// d<r>chi for 2 <= r <= 9. Returns nullopt for unknown names.
inline std::optional<ArithmeticFunction> find_function(std::string_view name) {
    std::string n(name);
    if (n == "one") return ArithmeticFunction{n, [](const auto&) { return Int(1); }};
    if (n == "b") return ArithmeticFunction{n, [](const auto& l) { return b_of_sft(l); }};
    if (n == "r") return ArithmeticFunction{n, [](const auto& l) { return r_of_sft(l); }};
    if (n == "chi") return ArithmeticFunction{n, [](const auto& l) { return Int(chi_of_sft(l)); }};
    if (n == "mu") return ArithmeticFunction{n, [](const auto& l) { return Int(mu_of_sft(l)); }};
    if (n == "primes")
        return ArithmeticFunction{n, [](const auto& l) { return Int(one_prime_of_sft(l)); }};
    if (n == "lambda")
        return ArithmeticFunction{n, [](const auto& l) { return Int(von_mangoldt_of_sft(l)); }};
    if (n.size() >= 2 && n[0] == 'd' && n[1] >= '2' && n[1] <= '9') {
        int r = n[1] - '0';
        if (n.size() == 2)
            return ArithmeticFunction{n, [r](const auto& l) { return dr_of_sft(l, r); }};
        if (n.substr(2) == "chi")
            return ArithmeticFunction{
                n, [r](const auto& l) { return dr_of_sft(l, r) * chi_of_sft(l); }};
    }
    return std::nullopt;
}

inline std::string registry_help() {
    return "one, b, r, chi, mu, primes, lambda, d<r>, d<r>chi (2 <= r <= 9)";
}

inline std::vector<ArithmeticFunction> parse_function_list(const std::string& csv) {
    std::vector<ArithmeticFunction> out;
    size_t pos = 0;
    while (pos <= csv.size()) {
        size_t comma = csv.find(',', pos);
        std::string name = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        auto fn = find_function(name);
        if (!fn)
            throw std::invalid_argument("unknown function '" + name +
                                        "'; available: " + registry_help());
        out.push_back(std::move(*fn));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace fqcorr
