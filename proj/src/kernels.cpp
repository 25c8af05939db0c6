#include "rpqshap/kernels.hpp"

#include <bit>
#include <algorithm>
#include <numeric>

#include "rpqshap/errors.hpp"
#include "rpqshap/rng.hpp"

namespace rpqshap::kernels {

namespace {

constexpr std::size_t kMaxTablePlayers = 30;

void check_table_size(std::size_t n) {
    if (n > kMaxTablePlayers) {
        throw Error(ErrorKind::EnumerationOverflow,
                    "valuation table over " + std::to_string(n) + " players is too large");
    }
}

// Spreads the bits of `rest` around a zero at position `player`.
std::uint64_t insert_zero_bit(std::uint64_t rest, std::size_t player) {
    const std::uint64_t low = (std::uint64_t{1} << player) - 1;
    return (rest & low) | ((rest & ~low) << 1);
}

int marginal(const CoalitionGame& game, std::uint64_t without, std::size_t player, std::size_t n) {
    const std::uint64_t with = without | (std::uint64_t{1} << player);
    const int gain = game.value(PlayerSet::from_mask(with, n)) ? 1 : 0;
    const int base = game.value(PlayerSet::from_mask(without, n)) ? 1 : 0;
    return gain - base;
}

bool trial_succeeds(const CoalitionGame& game, std::size_t player, std::uint64_t trial,
                    std::uint64_t seed, std::vector<std::size_t>& order) {
    const std::size_t n = game.size();
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(seed, player, trial);
    rng.shuffle(std::span<std::size_t>(order));
    PlayerSet prefix(n);
    for (std::size_t p : order) {
        if (p == player) break;
        prefix.insert(p);
    }
    PlayerSet with = prefix;
    with.insert(player);
    // Success needs v(B ∪ {a}) = 1, so a losing extended coalition settles it.
    if (!game.value(with)) return false;
    return !game.value(prefix);
}

}  // namespace

std::vector<std::uint8_t> valuation_table_serial(const CoalitionGame& game) {
    const std::size_t n = game.size();
    check_table_size(n);
    std::vector<std::uint8_t> table(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
        table[mask] = game.value(PlayerSet::from_mask(mask, n));
    }
    return table;
}

std::vector<std::uint8_t> valuation_table(const CoalitionGame& game) {
    const std::size_t n = game.size();
    check_table_size(n);
    std::vector<std::uint8_t> table(std::size_t{1} << n);
    const auto total = static_cast<std::int64_t>(table.size());
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t mask = 0; mask < total; ++mask) {
        table[static_cast<std::size_t>(mask)] =
            game.value(PlayerSet::from_mask(static_cast<std::uint64_t>(mask), n));
    }
    return table;
}

std::vector<std::int64_t> marginal_counts_serial(const CoalitionGame& game, std::size_t player) {
    const std::size_t n = game.size();
    check_table_size(n);
    std::vector<std::int64_t> counts(n, 0);
    const std::uint64_t subsets = std::uint64_t{1} << (n - 1);
    for (std::uint64_t rest = 0; rest < subsets; ++rest) {
        const std::uint64_t without = insert_zero_bit(rest, player);
        counts[static_cast<std::size_t>(std::popcount(rest))] += marginal(game, without, player, n);
    }
    return counts;
}

std::vector<std::int64_t> marginal_counts(const CoalitionGame& game, std::size_t player) {
    const std::size_t n = game.size();
    check_table_size(n);
    std::vector<std::int64_t> counts(n, 0);
    const auto subsets = static_cast<std::int64_t>(std::uint64_t{1} << (n - 1));
#pragma omp parallel
    {
        std::vector<std::int64_t> local(n, 0);
#pragma omp for schedule(dynamic, 256) nowait
        for (std::int64_t rest = 0; rest < subsets; ++rest) {
            const auto bits = static_cast<std::uint64_t>(rest);
            local[static_cast<std::size_t>(std::popcount(bits))] +=
                marginal(game, insert_zero_bit(bits, player), player, n);
        }
#pragma omp critical(rpqshap_marginal_counts)
        for (std::size_t k = 0; k < n; ++k) counts[k] += local[k];
    }
    return counts;
}

std::vector<std::int64_t> marginal_counts_from_table(std::span<const std::uint8_t> table,
                                                     std::size_t players, std::size_t player) {
    std::vector<std::int64_t> counts(players, 0);
    const std::uint64_t bit = std::uint64_t{1} << player;
    for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
        if (mask & bit) continue;
        counts[static_cast<std::size_t>(std::popcount(mask))] +=
            static_cast<int>(table[mask | bit]) - static_cast<int>(table[mask]);
    }
    return counts;
}

std::uint64_t mc_successes_serial(const CoalitionGame& game, std::size_t player,
                                  std::uint64_t samples, std::uint64_t seed) {
    std::vector<std::size_t> order(game.size());
    std::uint64_t successes = 0;
    for (std::uint64_t trial = 0; trial < samples; ++trial) {
        successes += trial_succeeds(game, player, trial, seed, order);
    }
    return successes;
}

std::uint64_t mc_successes(const CoalitionGame& game, std::size_t player, std::uint64_t samples,
                           std::uint64_t seed) {
    std::uint64_t successes = 0;
    const auto total = static_cast<std::int64_t>(samples);
#pragma omp parallel reduction(+ : successes)
    {
        std::vector<std::size_t> order(game.size());
#pragma omp for schedule(static)
        for (std::int64_t trial = 0; trial < total; ++trial) {
            successes += trial_succeeds(game, player, static_cast<std::uint64_t>(trial), seed, order);
        }
    }
    return successes;
}

}  // namespace rpqshap::kernels
