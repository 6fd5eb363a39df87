#include <catch2/catch_amalgamated.hpp>

#include "fqcorr/prime_field.hpp"

using namespace fqcorr;

TEST_CASE("construction accepts odd primes only") {
    CHECK_NOTHROW(PrimeField(3));
    CHECK_NOTHROW(PrimeField(5));
    CHECK_NOTHROW(PrimeField(2147483647));  // 2^31 - 1
    CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(2), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(9), std::invalid_argument);
    CHECK_THROWS_AS(PrimeField(15), std::invalid_argument);
}

TEST_CASE("modular arithmetic on small examples") {
    PrimeField f3(3), f5(5), f7(7);
    CHECK(f3.add(2, 2) == 1);
    CHECK(f5.mul(3, 4) == 2);
    CHECK(f7.neg(0) == 0);
    CHECK(f5.inv(2) == 3);
    CHECK(f3.inv(2) == 2);
    CHECK(f7.inv(1) == 1);
    CHECK_THROWS_AS(f5.inv(0), std::domain_error);
}

TEST_CASE("field axioms hold exhaustively for q in {3,5,7}") {
    for (uint32_t q : {3u, 5u, 7u}) {
        PrimeField F(q);
        for (uint32_t a = 0; a < q; ++a) {
            for (uint32_t b = 0; b < q; ++b) {
                CHECK(F.add(a, b) == F.add(b, a));
                CHECK(F.mul(a, b) == F.mul(b, a));
                CHECK(F.sub(F.add(a, b), b) == a);
                if (b != 0) CHECK(F.mul(F.mul(a, b), F.inv(b)) == a);
                for (uint32_t c = 0; c < q; ++c) {
                    CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
                }
            }
            CHECK(F.add(a, 0) == a);
            CHECK(F.mul(a, 1) == a);
            CHECK(F.add(a, F.neg(a)) == 0);
        }
    }
}

TEST_CASE("square classification agrees with exhaustive squaring for q <= 50") {
    for (uint32_t q = 3; q <= 50; ++q) {
        bool prime = true;
        for (uint32_t d = 2; d * d <= q; ++d)
            if (q % d == 0) prime = false;
        if (!prime || q == 2) continue;
        PrimeField F(q);
        std::vector<bool> is_sq(q, false);
        for (uint32_t b = 1; b < q; ++b) is_sq[F.mul(b, b)] = true;
        CHECK(F.square_class(0) == 0);
        for (uint32_t a = 1; a < q; ++a)
            CHECK(F.square_class(a) == (is_sq[a] ? 1 : -1));
    }
}

TEST_CASE("square classification examples") {
    CHECK(PrimeField(3).square_class(1) == 1);
    CHECK(PrimeField(3).square_class(2) == -1);
    CHECK(PrimeField(5).square_class(0) == 0);
}

TEST_CASE("mixing fields is reported as a logic error") {
    FFElem a(PrimeField(3), 2), b(PrimeField(5), 2);
    CHECK_THROWS_AS(a + b, std::logic_error);
    CHECK_THROWS_AS(a * b, std::logic_error);
}

TEST_CASE("FFElem arithmetic wraps the field operations") {
    PrimeField F(7);
    FFElem a(F, 3), b(F, 5);
    CHECK((a + b).value() == 1);
    CHECK((a - b).value() == 5);
    CHECK((a * b).value() == 1);
    CHECK((-FFElem(F, 0)).value() == 0);
    CHECK(a.inv().value() == 5);
    CHECK(FFElem(F, 3).square_class() == -1);
}
