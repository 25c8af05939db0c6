#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpqshap/numeric.hpp"
#include "rpqshap/player_set.hpp"

namespace rpqshap {

/// 0/1 valuation over coalitions. Must be safe to call concurrently.
using Valuation = std::function<bool(const PlayerSet&)>;

/// Cooperative game with a Boolean characteristic function. The
/// instantiating code is responsible for v(∅) = 0.
class CoalitionGame {
public:
    CoalitionGame(std::vector<std::string> players, Valuation valuation);

    std::size_t size() const noexcept { return players_.size(); }
    const std::vector<std::string>& players() const noexcept { return players_; }
    const std::string& player(std::size_t index) const { return players_.at(index); }
    std::optional<std::size_t> index_of(std::string_view id) const;

    bool value(const PlayerSet& coalition) const { return valuation_(coalition); }

    /// Same game with a bounded, thread-safe LRU memo in front of the valuation.
    CoalitionGame with_cache(std::size_t capacity) const;

private:
    std::vector<std::string> players_;
    Valuation valuation_;
};

inline constexpr std::size_t kDefaultSubsetCap = 22;
inline constexpr std::size_t kDefaultPermutationCap = 9;

/// Σ_B |B|!(n-|B|-1)!/n! (v(B∪{a}) - v(B)) over all B ⊆ players∖{a}, exactly.
/// Throws EnumerationOverflow when the game has more than `cap` players.
Rational shapley_exact_subset(const CoalitionGame& game, std::size_t player,
                              std::size_t cap = kDefaultSubsetCap);

/// Subset form for every player from one shared valuation table.
std::vector<Rational> shapley_exact_subset_all(const CoalitionGame& game,
                                               std::size_t cap = kDefaultSubsetCap);

/// Average marginal contribution over all n! orderings. Oracle use only.
Rational shapley_exact_permutation(const CoalitionGame& game, std::size_t player,
                                   std::size_t cap = kDefaultPermutationCap);

struct Estimate {
    double value = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t samples = 0;
    /// Requested tolerance: additive for shapley_mc, relative for the
    /// multiplicative wrapper.
    double eps = 0.0;
    /// Tolerance the sampler actually ran with.
    double additive_eps = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
};

/// ⌈ln(2/δ) / (2ε²)⌉: Hoeffding's sample count for additive error ε with
/// confidence 1-δ on a [0,1] mean.
std::uint64_t hoeffding_samples(double eps, double delta);

/// Permutation-sampling estimate with Pr[|estimate - value| <= eps] >= 1 - delta.
/// Bit-identical for identical (game, player, eps, delta, seed).
Estimate shapley_mc(const CoalitionGame& game, std::size_t player, double eps, double delta,
                    std::uint64_t seed);

/// Returns false from the visitor to stop the enumeration.
using SupportVisitor = std::function<bool(const PlayerSet&)>;
using SupportEnumerator = std::function<void(const SupportVisitor&)>;

/// For a monotone game, the value of `player` is positive iff the player is
/// pivotal in some minimal winning coalition. `supports` must cover every
/// minimal winning coalition.
bool shapley_nonzero(const CoalitionGame& game, std::size_t player,
                     const SupportEnumerator& supports);

}  // namespace rpqshap
