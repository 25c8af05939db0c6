#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rpqshap/game.hpp"

/// Hot loops of the exact and sampled engines. Each parallel kernel has a
/// serial twin with the same contract; tests check they agree bit for bit and
/// the benchmark target compares their speed.
namespace rpqshap::kernels {

/// v(mask) for all 2^n masks; n = game.size() <= 30.
std::vector<std::uint8_t> valuation_table_serial(const CoalitionGame& game);
std::vector<std::uint8_t> valuation_table(const CoalitionGame& game);

/// counts[k] = Σ over B ⊆ players∖{player}, |B| = k, of v(B∪{player}) - v(B).
std::vector<std::int64_t> marginal_counts_serial(const CoalitionGame& game, std::size_t player);
std::vector<std::int64_t> marginal_counts(const CoalitionGame& game, std::size_t player);

/// Same counts read off a precomputed valuation table.
std::vector<std::int64_t> marginal_counts_from_table(std::span<const std::uint8_t> table,
                                                     std::size_t players, std::size_t player);

/// Number of sampled orderings in which `player` turns the prefix coalition
/// from losing to winning. Trial i draws its ordering from
/// CounterRng(seed, player, i).
std::uint64_t mc_successes_serial(const CoalitionGame& game, std::size_t player,
                                  std::uint64_t samples, std::uint64_t seed);
std::uint64_t mc_successes(const CoalitionGame& game, std::size_t player, std::uint64_t samples,
                           std::uint64_t seed);

}  // namespace rpqshap::kernels
