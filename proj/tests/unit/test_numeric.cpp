#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rpqshap/errors.hpp"
#include "rpqshap/numeric.hpp"

using namespace rpqshap;

TEST_CASE("factorial and binomial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(9) == 362880);
    CHECK(factorial(25) == BigInt("15511210043330985984000000"));
    CHECK(binomial(9, 3) == 84);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}

TEST_CASE("shapley weights over one player count sum to one per size class") {
    for (std::size_t n = 1; n <= 12; ++n) {
        Rational total = 0;
        for (std::size_t k = 0; k < n; ++k) total += binomial(n - 1, k) * shapley_weight(k, n);
        CHECK(total == 1);
    }
    CHECK(shapley_weight(0, 1) == 1);
    CHECK(shapley_weight(2, 3) == Rational(1, 3));
}

TEST_CASE("rational text") {
    CHECK(to_string(Rational(7, 12)) == "7/12");
    CHECK(to_string(Rational(2, 4)) == "1/2");
    CHECK(to_string(Rational(0)) == "0");
    CHECK(to_string(Rational(1)) == "1");
    for (const auto& r : {Rational(7, 12), Rational(0), Rational(-3, 5), Rational(1)}) {
        CHECK(parse_rational(to_string(r)) == r);
    }
}
