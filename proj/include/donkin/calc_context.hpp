#pragma once

#include "donkin/char_cache.hpp"
#include "donkin/character.hpp"

#include <memory>
#include <shared_mutex>

namespace donkin {

inline constexpr std::uint64_t kDefaultOrbitCap = 10'000'000;
inline constexpr std::uint64_t kMinOrbitCap = 10'000;

// Shared state for character computations: the orbit-expansion cap, the
// in-memory multiplicity memo, and an optional persistent cache. Safe for
// concurrent readers; results are pure functions of their keys.
class CalcContext {
public:
    CalcContext() = default;
    explicit CalcContext(std::uint64_t cap, CharacterCache* disk = nullptr)
        : orbit_cap_(cap), disk_(disk) {
        if (orbit_cap_ < kMinOrbitCap)
            throw InputError("orbit cap must be at least " + std::to_string(kMinOrbitCap));
    }

    std::uint64_t orbit_cap() const { return orbit_cap_; }
    CharacterCache* disk() const { return disk_; }
    void set_disk(CharacterCache* d) { disk_ = d; }

    std::shared_ptr<const DominantCharacter> memo_lookup(const std::string& key) const {
        std::shared_lock lock(mu_);
        auto it = memo_.find(key);
        return it == memo_.end() ? nullptr : it->second;
    }

    std::shared_ptr<const DominantCharacter> memo_store(
        const std::string& key, std::shared_ptr<const DominantCharacter> value) const {
        std::unique_lock lock(mu_);
        auto [it, inserted] = memo_.emplace(key, std::move(value));
        return it->second;
    }

    static std::string memo_key(const RootSystem& rs, const Coords& lam) {
        return rs.spec().to_string() + rs.format_weight(lam);
    }

    std::size_t memo_size() const {
        std::shared_lock lock(mu_);
        return memo_.size();
    }

private:
    std::uint64_t orbit_cap_ = kDefaultOrbitCap;
    CharacterCache* disk_ = nullptr;
    mutable std::shared_mutex mu_;
    mutable std::unordered_map<std::string, std::shared_ptr<const DominantCharacter>> memo_;
};

}  // namespace donkin
