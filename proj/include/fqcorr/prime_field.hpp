#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fqcorr {

// The coefficient field F_q for an odd prime q, 3 <= q < 2^31. Residues are
// plain uint32_t in [0, q); all operations reduce fully. Composite or even
// moduli are rejected at construction.
class PrimeField {
  public:
    explicit PrimeField(uint32_t q) : q_(q) {
        if (q < 3 || q % 2 == 0 || q > 0x7FFFFFFFu || !is_prime(q))
            throw std::invalid_argument("q must be an odd prime in [3, 2^31), got " +
                                        std::to_string(q));
    }

    uint32_t q() const { return q_; }

    uint32_t add(uint32_t a, uint32_t b) const {
        uint32_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + q_ - b; }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : q_ - a; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>(uint64_t(a) * b % q_);
    }

    uint32_t pow(uint32_t a, uint64_t e) const {
        uint64_t base = a % q_, r = 1;
        while (e) {
            if (e & 1) r = r * base % q_;
            base = base * base % q_;
            e >>= 1;
        }
        return static_cast<uint32_t>(r);
    }

    uint32_t inv(uint32_t a) const {
        if (a % q_ == 0) throw std::domain_error("inverse of 0");
        return pow(a, q_ - 2);
    }

    // Euler criterion: 0 for a = 0, +1 for a nonzero square, -1 otherwise.
    int square_class(uint32_t a) const {
        a %= q_;
        if (a == 0) return 0;
        return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
    }

    bool operator==(const PrimeField& other) const = default;

  private:
    static bool is_prime(uint32_t n) {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (uint32_t d = 3; uint64_t(d) * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

    uint32_t q_;
};

// A field element that carries its modulus, for checked arithmetic across
// API boundaries. Hot loops work on raw residues through PrimeField instead.
class FFElem {
  public:
    FFElem(PrimeField field, uint32_t value) : field_(field), value_(value % field.q()) {}

    uint32_t value() const { return value_; }
    const PrimeField& field() const { return field_; }

    friend FFElem operator+(const FFElem& a, const FFElem& b) {
        a.check_same(b);
        return FFElem(a.field_, a.field_.add(a.value_, b.value_));
    }
    friend FFElem operator-(const FFElem& a, const FFElem& b) {
        a.check_same(b);
        return FFElem(a.field_, a.field_.sub(a.value_, b.value_));
    }
    friend FFElem operator*(const FFElem& a, const FFElem& b) {
        a.check_same(b);
        return FFElem(a.field_, a.field_.mul(a.value_, b.value_));
    }
    FFElem operator-() const { return FFElem(field_, field_.neg(value_)); }

    FFElem inv() const { return FFElem(field_, field_.inv(value_)); }
    int square_class() const { return field_.square_class(value_); }

    bool operator==(const FFElem& other) const = default;

  private:
    void check_same(const FFElem& other) const {
        if (!(field_ == other.field_))
            throw std::logic_error("mixing elements of F_" + std::to_string(field_.q()) +
                                   " and F_" + std::to_string(other.field_.q()));
    }

    PrimeField field_;
    uint32_t value_;
};

}  // namespace fqcorr
