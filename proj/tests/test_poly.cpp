#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "fqcorr/poly.hpp"
#include "fqcorr/poly_parse.hpp"

using namespace fqcorr;

namespace {
Poly P(uint32_t q, const std::string& text) { return parse_poly(text, PrimeField(q)); }
}  // namespace

TEST_CASE("zero polynomial basics") {
    PrimeField F(3);
    Poly z = Poly::zero(F);
    CHECK(z.degree() == -1);
    CHECK(z.is_zero());
    CHECK((z + z).is_zero());
    CHECK((z * Poly::one(F)).is_zero());
    CHECK(z.str() == "0");
}

TEST_CASE("ring arithmetic examples") {
    CHECK(P(3, "T+1") * P(3, "T+2") == P(3, "T^2+2"));
    CHECK(Poly::gcd(P(5, "T^2+4"), P(5, "T+4")) == P(5, "T+4"));  // T^2-1, T-1 over F_5
    auto [q, r] = Poly::divrem(P(3, "T^3"), P(3, "T"));
    CHECK(q == P(3, "T^2"));
    CHECK(r.is_zero());
    CHECK_THROWS_AS(Poly::divrem(P(3, "T"), Poly::zero(PrimeField(3))), std::domain_error);
}

TEST_CASE("divrem invariant on random pairs") {
    PrimeField F(5);
    RandomSource rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Poly a = Poly::from_index(F, rng.below(5 * 5 * 5 * 5 * 5 * 5));
        Poly b = Poly::from_index(F, 1 + rng.below(5 * 5 * 5 * 5 - 1));
        auto [quot, rem] = Poly::divrem(a, b);
        CHECK(quot * b + rem == a);
        CHECK(rem.degree() < b.degree());
    }
}

TEST_CASE("gcd is monic and divides both") {
    PrimeField F(3);
    RandomSource rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Poly a = Poly::from_index(F, 1 + rng.below(3 * 3 * 3 * 3 * 3 - 1));
        Poly b = Poly::from_index(F, 1 + rng.below(3 * 3 * 3 * 3 * 3 - 1));
        Poly g = Poly::gcd(a, b);
        CHECK(g.is_monic());
        CHECK(Poly::divrem(a, g).second.is_zero());
        CHECK(Poly::divrem(b, g).second.is_zero());
    }
}

TEST_CASE("quadratic character mod T") {
    CHECK(P(3, "T").chi() == 0);
    CHECK(P(3, "T^2+1").chi() == 1);
    CHECK(P(3, "T+2").chi() == -1);
}

TEST_CASE("index enumeration order") {
    PrimeField F(3);
    CHECK(Poly::from_index(F, 0).is_zero());
    CHECK(Poly::from_index(F, 3) == Poly::variable(F));
    CHECK(Poly::from_index(F, 5) == P(3, "T+2"));
    // round trip on all degrees <= 6
    for (uint64_t i = 0; i < 3ull * 3 * 3 * 3 * 3 * 3 * 3; ++i)
        CHECK(Poly::from_index(F, i).to_index() == i);
}

TEST_CASE("monic enumeration counts and order") {
    PrimeField F3(3);
    CHECK(Poly::monic_by_index(F3, 1, 0) == P(3, "T"));
    CHECK(Poly::monic_by_index(F3, 1, 1) == P(3, "T+1"));
    CHECK(Poly::monic_by_index(F3, 1, 2) == P(3, "T+2"));
    CHECK(Poly::monic_by_index(F3, 2, 0) == P(3, "T^2"));
    CHECK(monic_count(F3, 2) == 9);
    CHECK(monic_count(PrimeField(5), 0) == 1);
    CHECK(Poly::monic_by_index(PrimeField(5), 0, 0).is_one());
    CHECK_THROWS_AS(Poly::monic_by_index(F3, 2, 9), std::invalid_argument);
}

TEST_CASE("random monic is uniform (multinomial, 5 sigma)") {
    PrimeField F(3);
    RandomSource rng(42);
    const int draws = 10000;
    std::map<uint64_t, int> freq;
    for (int i = 0; i < draws; ++i) {
        Poly f = Poly::random_monic(F, 2, rng);
        CHECK(f.is_monic());
        CHECK(f.degree() == 2);
        ++freq[f.to_index()];
    }
    CHECK(freq.size() == 9);
    double expected = draws / 9.0;
    double sigma = std::sqrt(draws * (1.0 / 9) * (8.0 / 9));
    for (const auto& [idx, count] : freq)
        CHECK(std::abs(count - expected) <= 5 * sigma);
}

TEST_CASE("fixed seed reproduces the sample sequence") {
    PrimeField F(5);
    RandomSource a(123), b(123);
    for (int i = 0; i < 50; ++i)
        CHECK(Poly::random_monic(F, 8, a) == Poly::random_monic(F, 8, b));
}

TEST_CASE("short interval matches the displayed coefficient set") {
    PrimeField F(3);
    Poly f0 = Poly::monic_by_index(F, 3, 0);  // T^3
    ShortInterval iv = ShortInterval::make(f0, Rat(1, 3));
    CHECK(iv.coeff_cutoff == 1);
    CHECK(iv.size() == 9);
    bool contains_center = false;
    for (uint64_t i = 0; i < 9; ++i) {
        Poly f = iv.member(i);
        CHECK(f - f0 == Poly::from_index(F, i));
        CHECK((f - f0).degree() <= 1);
        if (f == f0) contains_center = true;
    }
    CHECK(contains_center);

    // epsilon = 1 frees all lower coefficients: q^n members.
    ShortInterval full = ShortInterval::make(f0, Rat(1));
    CHECK(full.coeff_cutoff == 3);
    CHECK(full.size() == 81);
    CHECK_THROWS_AS(ShortInterval::make(f0, Rat(2)), std::invalid_argument);
}

TEST_CASE("polynomial literal parser") {
    PrimeField F(5);
    CHECK(parse_poly("T^3+2*T+1", F).str() == "T^3+2*T+1");
    CHECK(parse_poly("2T^2", F) == parse_poly("2*T^2", F));
    CHECK(parse_poly("7", F) == Poly::constant(F, 2));
    CHECK(parse_poly("-T", F) == -Poly::variable(F));
    CHECK(parse_poly(" T + 4 ", F) == parse_poly("T+4", F));
    CHECK(parse_poly("T^2-1", F) == parse_poly("T^2+4", F));
    CHECK_THROWS_AS(parse_poly("", F), PolyParseError);
    CHECK_THROWS_AS(parse_poly("T^", F), PolyParseError);
    CHECK_THROWS_AS(parse_poly("x+1", F), PolyParseError);
    CHECK_THROWS_AS(parse_poly("1++2", F), PolyParseError);

    // positions are 1-based in the message
    try {
        parse_poly("T+x", F);
        FAIL("expected parse error");
    } catch (const PolyParseError& e) {
        CHECK(e.position == 2);
    }
}

TEST_CASE("rational literal parser") {
    CHECK(parse_rational("1/3") == Rat(1, 3));
    CHECK(parse_rational("0.25") == Rat(1, 4));
    CHECK(parse_rational("2") == Rat(2));
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("mixing polynomial fields throws") {
    CHECK_THROWS_AS(P(3, "T") + P(5, "T"), std::logic_error);
}
