#include "rpqshap/game.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <list>
#include <memory>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "rpqshap/errors.hpp"
#include "rpqshap/kernels.hpp"

namespace rpqshap {

namespace {

class ValuationCache {
public:
    explicit ValuationCache(std::size_t capacity)
        : per_shard_(std::max<std::size_t>(1, capacity / kShards)) {}

    template <class Compute>
    bool get(const PlayerSet& key, Compute&& compute) {
        Shard& shard = shards_[key.hash() % kShards];
        {
            std::lock_guard lock(shard.mutex);
            auto it = shard.index.find(key);
            if (it != shard.index.end()) {
                shard.order.splice(shard.order.begin(), shard.order, it->second);
                return it->second->second;
            }
        }
        const bool value = compute(key);
        std::lock_guard lock(shard.mutex);
        if (shard.index.count(key)) return value;
        shard.order.emplace_front(key, value);
        shard.index.emplace(key, shard.order.begin());
        if (shard.order.size() > per_shard_) {
            shard.index.erase(shard.order.back().first);
            shard.order.pop_back();
        }
        return value;
    }

private:
    static constexpr std::size_t kShards = 16;
    struct Shard {
        std::mutex mutex;
        std::list<std::pair<PlayerSet, bool>> order;
        std::unordered_map<PlayerSet, std::list<std::pair<PlayerSet, bool>>::iterator, PlayerSetHash>
            index;
    };
    std::size_t per_shard_;
    std::array<Shard, kShards> shards_;
};

void check_player(const CoalitionGame& game, std::size_t player) {
    if (game.size() == 0) throw Error(ErrorKind::NoPlayers, "the game has no players");
    if (player >= game.size()) {
        throw Error(ErrorKind::InvalidPlayerSet, "player index " + std::to_string(player) +
                                                     " out of range");
    }
}

void check_cap(const CoalitionGame& game, std::size_t cap, const char* what) {
    if (game.size() > cap) {
        throw Error(ErrorKind::EnumerationOverflow,
                    std::string(what) + " enumeration over " + std::to_string(game.size()) +
                        " players exceeds the cap of " + std::to_string(cap));
    }
}

Rational combine_counts(const std::vector<std::int64_t>& counts, std::size_t players) {
    Rational total = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] != 0) total += Rational(counts[k]) * shapley_weight(k, players);
    }
    return total;
}

}  // namespace

CoalitionGame::CoalitionGame(std::vector<std::string> players, Valuation valuation)
    : players_(std::move(players)), valuation_(std::move(valuation)) {}

std::optional<std::size_t> CoalitionGame::index_of(std::string_view id) const {
    auto it = std::find(players_.begin(), players_.end(), id);
    if (it == players_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - players_.begin());
}

CoalitionGame CoalitionGame::with_cache(std::size_t capacity) const {
    auto cache = std::make_shared<ValuationCache>(capacity);
    Valuation inner = valuation_;
    return CoalitionGame(players_, [cache, inner](const PlayerSet& coalition) {
        return cache->get(coalition, inner);
    });
}

Rational shapley_exact_subset(const CoalitionGame& game, std::size_t player, std::size_t cap) {
    check_player(game, player);
    check_cap(game, cap, "subset");
    return combine_counts(kernels::marginal_counts(game, player), game.size());
}

std::vector<Rational> shapley_exact_subset_all(const CoalitionGame& game, std::size_t cap) {
    if (game.size() == 0) throw Error(ErrorKind::NoPlayers, "the game has no players");
    check_cap(game, cap, "subset");
    const auto table = kernels::valuation_table(game);
    std::vector<Rational> values;
    values.reserve(game.size());
    for (std::size_t p = 0; p < game.size(); ++p) {
        values.push_back(
            combine_counts(kernels::marginal_counts_from_table(table, game.size(), p), game.size()));
    }
    return values;
}

Rational shapley_exact_permutation(const CoalitionGame& game, std::size_t player,
                                   std::size_t cap) {
    check_player(game, player);
    check_cap(game, cap, "permutation");
    const std::size_t n = game.size();
    std::vector<std::int8_t> memo(std::size_t{1} << n, -1);
    auto value = [&](std::uint64_t mask) {
        auto& slot = memo[mask];
        if (slot < 0) slot = game.value(PlayerSet::from_mask(mask, n)) ? 1 : 0;
        return static_cast<std::int64_t>(slot);
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::int64_t total = 0;
    do {
        std::uint64_t prefix = 0;
        for (std::size_t p : order) {
            if (p == player) break;
            prefix |= std::uint64_t{1} << p;
        }
        total += value(prefix | (std::uint64_t{1} << player)) - value(prefix);
    } while (std::next_permutation(order.begin(), order.end()));
    return Rational(BigInt(total), factorial(n));
}

std::uint64_t hoeffding_samples(double eps, double delta) {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "eps and delta must lie in (0, 1)");
    }
    return static_cast<std::uint64_t>(std::ceil(std::log(2.0 / delta) / (2.0 * eps * eps)));
}

Estimate shapley_mc(const CoalitionGame& game, std::size_t player, double eps, double delta,
                    std::uint64_t seed) {
    check_player(game, player);
    Estimate estimate;
    estimate.samples = hoeffding_samples(eps, delta);
    estimate.eps = eps;
    estimate.additive_eps = eps;
    estimate.delta = delta;
    estimate.seed = seed;
    estimate.successes = kernels::mc_successes(game, player, estimate.samples, seed);
    estimate.value = static_cast<double>(estimate.successes) / static_cast<double>(estimate.samples);
    return estimate;
}

bool shapley_nonzero(const CoalitionGame& game, std::size_t player,
                     const SupportEnumerator& supports) {
    check_player(game, player);
    bool found = false;
    supports([&](const PlayerSet& candidate) {
        if (!candidate.contains(player) || !game.value(candidate)) return true;
        PlayerSet without = candidate;
        without.erase(player);
        if (!game.value(without)) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

}  // namespace rpqshap
