#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fqcorr/bigint.hpp"
#include "fqcorr/prime_field.hpp"
#include "fqcorr/rng.hpp"

namespace fqcorr {

// Dense polynomial over F_q, coefficients stored lowest degree first.
// The zero polynomial has an empty coefficient vector; degree() returns -1
// for it, standing in for degree -infinity.
class Poly {
  public:
    explicit Poly(PrimeField field) : field_(field) {}

    static Poly zero(PrimeField field) { return Poly(field); }

    static Poly constant(PrimeField field, uint32_t c) {
        Poly p(field);
        p.coeffs_.assign(1, c % field.q());
        p.trim();
        return p;
    }

    static Poly one(PrimeField field) { return constant(field, 1); }

    // The variable T.
    static Poly variable(PrimeField field) {
        Poly p(field);
        p.coeffs_ = {0, 1};
        return p;
    }

    static Poly from_coeffs(PrimeField field, std::vector<uint32_t> coeffs) {
        Poly p(field);
        for (uint32_t& c : coeffs) c %= field.q();
        p.coeffs_ = std::move(coeffs);
        p.trim();
        return p;
    }

    const PrimeField& field() const { return field_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
    bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }

    uint32_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[size_t(i)] : 0;
    }
    uint32_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
    uint32_t constant_term() const { return coeff(0); }

    uint32_t eval(uint32_t x) const {
        uint32_t r = 0;
        for (size_t i = coeffs_.size(); i-- > 0;) r = field_.add(field_.mul(r, x), coeffs_[i]);
        return r;
    }

    // The quadratic character mod T: the square class of the constant term.
    int chi() const { return field_.square_class(constant_term()); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        a.check_same(b);
        Poly r(a.field_);
        r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
        for (size_t i = 0; i < r.coeffs_.size(); ++i)
            r.coeffs_[i] = a.field_.add(a.coeff(int(i)), b.coeff(int(i)));
        r.trim();
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        a.check_same(b);
        Poly r(a.field_);
        r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
        for (size_t i = 0; i < r.coeffs_.size(); ++i)
            r.coeffs_[i] = a.field_.sub(a.coeff(int(i)), b.coeff(int(i)));
        r.trim();
        return r;
    }

    Poly operator-() const {
        Poly r(field_);
        r.coeffs_.resize(coeffs_.size());
        for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = field_.neg(coeffs_[i]);
        return r;
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check_same(b);
        if (a.is_zero() || b.is_zero()) return Poly(a.field_);
        Poly r(a.field_);
        r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
        uint64_t q = a.field_.q();
        for (size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            uint64_t ai = a.coeffs_[i];
            for (size_t j = 0; j < b.coeffs_.size(); ++j)
                r.coeffs_[i + j] =
                    static_cast<uint32_t>((r.coeffs_[i + j] + ai * b.coeffs_[j]) % q);
        }
        r.trim();
        return r;
    }

    Poly times_scalar(uint32_t c) const {
        Poly r(field_);
        c %= field_.q();
        if (c == 0) return r;
        r.coeffs_.resize(coeffs_.size());
        for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = field_.mul(coeffs_[i], c);
        return r;
    }

    // Multiply by T^k.
    Poly times_T_power(int k) const {
        if (is_zero() || k == 0) return *this;
        Poly r(field_);
        r.coeffs_.assign(coeffs_.size() + size_t(k), 0);
        std::copy(coeffs_.begin(), coeffs_.end(), r.coeffs_.begin() + k);
        return r;
    }

    Poly monic() const {
        if (is_zero()) throw std::domain_error("monic() of the zero polynomial");
        if (coeffs_.back() == 1) return *this;
        return times_scalar(field_.inv(coeffs_.back()));
    }

    Poly derivative() const {
        Poly r(field_);
        if (coeffs_.size() < 2) return r;
        r.coeffs_.resize(coeffs_.size() - 1);
        for (size_t i = 1; i < coeffs_.size(); ++i)
            r.coeffs_[i - 1] = field_.mul(coeffs_[i], uint32_t(i % field_.q()));
        r.trim();
        return r;
    }

    // a = quot * b + rem with deg rem < deg b.
    static std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
        a.check_same(b);
        if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
        Poly quot(a.field_), rem = a;
        if (a.degree() < b.degree()) return {quot, rem};
        const PrimeField& F = a.field_;
        uint32_t lead_inv = F.inv(b.leading());
        quot.coeffs_.assign(size_t(a.degree() - b.degree()) + 1, 0);
        while (!rem.is_zero() && rem.degree() >= b.degree()) {
            int shift = rem.degree() - b.degree();
            uint32_t c = F.mul(rem.coeffs_.back(), lead_inv);
            quot.coeffs_[size_t(shift)] = c;
            for (size_t i = 0; i < b.coeffs_.size(); ++i)
                rem.coeffs_[size_t(shift) + i] =
                    F.sub(rem.coeffs_[size_t(shift) + i], F.mul(c, b.coeffs_[i]));
            rem.trim();
        }
        quot.trim();
        return {quot, rem};
    }

    static Poly mod(const Poly& a, const Poly& b) { return divrem(a, b).second; }

    // Monic gcd; gcd(0, 0) is an error.
    static Poly gcd(Poly a, Poly b) {
        a.check_same(b);
        if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd(0, 0)");
        while (!b.is_zero()) {
            Poly r = divrem(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    bool operator==(const Poly& other) const {
        return field_ == other.field_ && coeffs_ == other.coeffs_;
    }

    // Enumeration order: the coefficient of T^j is the j-th base-q digit of
    // the index, so the sequence starts 0, 1, ..., q-1, T, T+1, ...
    static Poly from_index(PrimeField field, uint64_t index) {
        Poly p(field);
        while (index) {
            p.coeffs_.push_back(uint32_t(index % field.q()));
            index /= field.q();
        }
        return p;
    }

    uint64_t to_index() const {
        uint64_t idx = 0;
        for (size_t i = coeffs_.size(); i-- > 0;) {
            if (idx > (UINT64_MAX - coeffs_[i]) / field_.q())
                throw std::overflow_error("polynomial index exceeds 64 bits");
            idx = idx * field_.q() + coeffs_[i];
        }
        return idx;
    }

    // Index order without materializing the index (works at any degree).
    static bool index_less(const Poly& a, const Poly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        for (size_t i = a.coeffs_.size(); i-- > 0;)
            if (a.coeffs_[i] != b.coeffs_[i]) return a.coeffs_[i] < b.coeffs_[i];
        return false;
    }

    // The index-th monic polynomial of degree n: T^n plus the index-th
    // polynomial in enumeration order, index < q^n.
    static Poly monic_by_index(PrimeField field, int n, uint64_t index) {
        Poly p = from_index(field, index);
        if (p.degree() >= n) throw std::invalid_argument("monic_by_index: index out of range");
        p.coeffs_.resize(size_t(n) + 1, 0);
        p.coeffs_[size_t(n)] = 1;
        return p;
    }

    // Uniform over the monic polynomials of degree n >= 1, every lower
    // coefficient drawn independently.
    static Poly random_monic(PrimeField field, int n, RandomSource& rng) {
        if (n < 1) throw std::invalid_argument("random_monic requires degree >= 1");
        Poly p(field);
        p.coeffs_.resize(size_t(n) + 1);
        for (int i = 0; i < n; ++i) p.coeffs_[size_t(i)] = uint32_t(rng.below(field.q()));
        p.coeffs_[size_t(n)] = 1;
        return p;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (size_t i = coeffs_.size(); i-- > 0;) {
            uint32_t c = coeffs_[i];
            if (c == 0) continue;
            if (!s.empty()) s += "+";
            if (i == 0) {
                s += std::to_string(c);
            } else {
                if (c != 1) s += std::to_string(c) + "*";
                s += (i == 1) ? "T" : "T^" + std::to_string(i);
            }
        }
        return s;
    }

  private:
    void check_same(const Poly& other) const {
        if (!(field_ == other.field_))
            throw std::logic_error("mixing polynomials over F_" + std::to_string(field_.q()) +
                                   " and F_" + std::to_string(other.field_.q()));
    }

    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    PrimeField field_;
    std::vector<uint32_t> coeffs_;
};

// Number of monic polynomials of degree n, as an exact integer.
inline Int monic_count(const PrimeField& field, int n) {
    return int_pow(Int(field.q()), unsigned(n));
}

// Short interval around monic f0: all f0 + g where g runs over the first
// q^(floor(eps*n)+1) polynomials in enumeration order. epsilon is an exact
// rational so the coefficient cutoff floor(eps*n) is unambiguous.
struct ShortInterval {
    Poly center;
    int coeff_cutoff;  // highest free coefficient index, = floor(eps * n)

    static ShortInterval make(const Poly& f0, const Rat& epsilon) {
        if (!f0.is_monic() || f0.degree() < 1)
            throw std::invalid_argument("short interval needs a monic center of degree >= 1");
        if (epsilon <= 0 || epsilon > 1) throw std::invalid_argument("epsilon must be in (0, 1]");
        Int cut = boost::multiprecision::numerator(epsilon) * f0.degree() /
                  boost::multiprecision::denominator(epsilon);
        return ShortInterval{f0, cut.convert_to<int>()};
    }

    Int size() const { return int_pow(Int(center.field().q()), unsigned(coeff_cutoff) + 1); }

    Poly member(uint64_t index) const {
        Poly offset = Poly::from_index(center.field(), index);
        if (offset.degree() > coeff_cutoff)
            throw std::invalid_argument("short interval index out of range");
        return center + offset;
    }
};

}  // namespace fqcorr
