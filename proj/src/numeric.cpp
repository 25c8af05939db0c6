#include "rpqshap/numeric.hpp"

#include <mutex>
#include <vector>

#include "rpqshap/errors.hpp"

namespace rpqshap {

namespace {

// Factorials are requested repeatedly with small arguments by every exact
// engine, so keep the prefix table around.
BigInt cached_factorial(std::size_t n) {
    static std::mutex mutex;
    static std::vector<BigInt> table{BigInt(1)};
    std::lock_guard lock(mutex);
    while (table.size() <= n) {
        table.push_back(table.back() * BigInt(table.size()));
    }
    return table[n];
}

}  // namespace

BigInt factorial(std::size_t n) { return cached_factorial(n); }

BigInt binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result *= BigInt(n - k + i);
        result /= BigInt(i);
    }
    return result;
}

Rational shapley_weight(std::size_t coalition, std::size_t players) {
    if (players == 0 || coalition >= players) {
        throw Error(ErrorKind::InvalidArgument, "shapley weight needs coalition < players");
    }
    return Rational(factorial(coalition) * factorial(players - coalition - 1), factorial(players));
}

std::string to_string(const Rational& value) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(value) == 1) return numerator(value).str();
    return numerator(value).str() + "/" + denominator(value).str();
}

Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(BigInt(text));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "not a rational: '" + text + "'");
    }
}

}  // namespace rpqshap
