#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fqcorr/bigint.hpp"
#include "fqcorr/poly.hpp"
#include "fqcorr/shifts.hpp"

namespace fqcorr {

struct PolyParseError : std::invalid_argument {
    size_t position;
    PolyParseError(size_t pos, const std::string& msg)
        : std::invalid_argument(msg + " at position " + std::to_string(pos + 1)),
          position(pos) {}
};

// Polynomial literals: terms "c", "T", "T^k", "c*T^k" or "cT^k", joined by
// + and -. Coefficients are nonnegative integers, reduced mod q.
inline Poly parse_poly(std::string_view text, PrimeField field) {
    Poly result = Poly::zero(field);
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto parse_number = [&]() -> uint64_t {
        size_t start = pos;
        uint64_t value = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            uint64_t digit = uint64_t(text[pos] - '0');
            if (value > (UINT64_MAX - digit) / 10) throw PolyParseError(start, "number too large");
            value = value * 10 + digit;
            ++pos;
        }
        if (pos == start) throw PolyParseError(pos, "expected a number");
        return value;
    };

    skip_ws();
    if (pos == text.size()) throw PolyParseError(pos, "empty polynomial literal");
    bool first = true;
    while (true) {
        skip_ws();
        bool negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            negative = text[pos] == '-';
            ++pos;
            skip_ws();
        } else if (!first) {
            if (pos == text.size()) break;
            throw PolyParseError(pos, "expected '+' or '-'");
        }
        if (pos == text.size()) throw PolyParseError(pos, "expected a term");

        uint32_t coeff = 1;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
            coeff = uint32_t(parse_number() % field.q());
            have_coeff = true;
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                skip_ws();
                if (pos == text.size() || text[pos] != 'T')
                    throw PolyParseError(pos, "expected 'T' after '*'");
            }
        }
        uint32_t exponent = 0;
        if (pos < text.size() && text[pos] == 'T') {
            ++pos;
            exponent = 1;
            skip_ws();
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                skip_ws();
                uint64_t e = parse_number();
                if (e > 100000) throw PolyParseError(pos, "exponent too large");
                exponent = uint32_t(e);
            }
        } else if (!have_coeff) {
            throw PolyParseError(pos, "expected a coefficient or 'T'");
        }

        if (negative) coeff = field.neg(coeff);
        Poly term = Poly::constant(field, coeff).times_T_power(int(exponent));
        result = result + term;
        first = false;
        skip_ws();
        if (pos == text.size()) break;
    }
    return result;
}

// Comma-separated shift tuple, e.g. "0,1,T".
inline ShiftTuple parse_shift_tuple(std::string_view text, PrimeField field) {
    std::vector<Poly> shifts;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string_view piece =
            text.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
        shifts.push_back(parse_poly(piece, field));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return ShiftTuple(std::move(shifts));
}

// Exact rational from "p/q", an integer, or a decimal like "0.25".
inline Rat parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    size_t slash = s.find('/');
    try {
        if (slash != std::string::npos)
            return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
        size_t dot = s.find('.');
        if (dot == std::string::npos) return Rat(Int(s));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t places = s.size() - dot - 1;
        return Rat(Int(digits), int_pow(Int(10), unsigned(places)));
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("bad rational literal '" + s + "'");
    }
}

}  // namespace fqcorr
