#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rpqshap {

/// Fixed-universe bitset over player indices.
class PlayerSet {
public:
    PlayerSet() = default;
    explicit PlayerSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

    static PlayerSet from_mask(std::uint64_t mask, std::size_t universe) {
        PlayerSet set(universe);
        if (!set.words_.empty()) set.words_[0] = mask;
        return set;
    }

    static PlayerSet full(std::size_t universe) {
        PlayerSet set(universe);
        for (std::size_t i = 0; i < universe; ++i) set.insert(i);
        return set;
    }

    std::size_t universe() const noexcept { return universe_; }

    bool contains(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    void insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void erase(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool empty() const { return count() == 0; }

    /// True when every member of this set is in `other`.
    bool subset_of(const PlayerSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & ~other.words_[i]) return false;
        }
        return true;
    }

    PlayerSet& operator|=(const PlayerSet& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    std::size_t hash() const noexcept {
        std::size_t h = universe_;
        for (auto w : words_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ull;
        return h;
    }

    bool operator==(const PlayerSet&) const = default;
    auto operator<=>(const PlayerSet&) const = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct PlayerSetHash {
    std::size_t operator()(const PlayerSet& s) const noexcept { return s.hash(); }
};

}  // namespace rpqshap
