#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "poa/latency.hpp"

namespace poa {

using ResourceId = std::uint32_t;
using PlayerId = std::uint32_t;

inline constexpr std::int32_t kEmptyChoice = -1;

struct GameFlags {
    bool unweighted = false;
    bool symmetric = false;
    bool singleton = false;
    bool identical = false;
};

// Players (weights, strategy sets) over resources with latency functions.
// Strategies are stored as sorted resource-id lists in flat arenas so that
// instances with millions of players stay cache-friendly and allocation-free.
class CongestionGame {
  public:
    ResourceId add_resource(LatencyFunction f) {
        latencies_.push_back(std::move(f));
        return static_cast<ResourceId>(latencies_.size() - 1);
    }

    PlayerId add_player(double weight, const std::vector<std::vector<ResourceId>>& strategies) {
        begin_player(weight);
        for (const auto& s : strategies) add_strategy(s);
        return static_cast<PlayerId>(players_.size() - 1);
    }

    // Streaming construction: begin_player + add_strategy avoid building
    // intermediate vectors when generators emit millions of players.
    PlayerId begin_player(double weight) {
        if (!(weight > 0.0) || !std::isfinite(weight))
            throw std::invalid_argument("add_player: weight must be finite and > 0");
        players_.push_back({weight, static_cast<std::uint32_t>(strategy_refs_.size()), 0});
        return static_cast<PlayerId>(players_.size() - 1);
    }

    void add_strategy(std::span<const ResourceId> resources) {
        if (resources.empty()) throw std::invalid_argument("add_strategy: empty strategy");
        std::uint32_t begin = static_cast<std::uint32_t>(rid_pool_.size());
        rid_pool_.insert(rid_pool_.end(), resources.begin(), resources.end());
        std::sort(rid_pool_.begin() + begin, rid_pool_.end());
        auto dup = std::unique(rid_pool_.begin() + begin, rid_pool_.end());
        rid_pool_.erase(dup, rid_pool_.end());
        strategy_refs_.push_back({begin, static_cast<std::uint32_t>(rid_pool_.size()) - begin});
        players_.back().strat_count += 1;
    }
    void add_strategy(const std::vector<ResourceId>& r) {
        add_strategy(std::span<const ResourceId>(r));
    }
    void add_singleton_strategy(ResourceId r) { add_strategy(std::span<const ResourceId>(&r, 1)); }

    std::size_t num_resources() const { return latencies_.size(); }
    std::size_t num_players() const { return players_.size(); }
    const LatencyFunction& latency(ResourceId e) const { return latencies_[e]; }
    double weight(PlayerId i) const { return players_[i].weight; }
    int strategy_count(PlayerId i) const { return static_cast<int>(players_[i].strat_count); }

    std::span<const ResourceId> strategy(PlayerId i, int s) const {
        const auto& ref = strategy_refs_[players_[i].strat_begin + static_cast<std::uint32_t>(s)];
        return {rid_pool_.data() + ref.begin, ref.size};
    }

    GameFlags flags() const {
        GameFlags fl;
        fl.unweighted = true;
        fl.singleton = true;
        fl.identical = true;
        fl.symmetric = true;
        for (const auto& p : players_)
            if (p.weight != 1.0) { fl.unweighted = false; break; }
        for (const auto& ref : strategy_refs_)
            if (ref.size != 1) { fl.singleton = false; break; }
        for (std::size_t e = 1; e < latencies_.size(); ++e)
            if (latencies_[e] != latencies_[0]) { fl.identical = false; break; }
        for (PlayerId i = 1; i < players_.size(); ++i)
            if (!same_strategy_set(0, i)) { fl.symmetric = false; break; }
        return fl;
    }

    // Invariant check; each violation names the offending player/resource.
    std::vector<std::string> validate() const {
        std::vector<std::string> out;
        if (players_.size() < 2) out.push_back("game requires >= 2 players");
        if (latencies_.empty()) out.push_back("game requires >= 1 resource");
        for (std::size_t e = 0; e < latencies_.size(); ++e)
            if (!latencies_[e].declared_nondecreasing())
                out.push_back("resource " + std::to_string(e) + ": latency not non-decreasing");
        for (PlayerId i = 0; i < players_.size(); ++i) {
            if (players_[i].strat_count == 0)
                out.push_back("player " + std::to_string(i) + ": empty strategy list");
            for (int s = 0; s < strategy_count(i); ++s)
                for (ResourceId e : strategy(i, s))
                    if (e >= latencies_.size())
                        out.push_back("player " + std::to_string(i) + ": strategy " +
                                      std::to_string(s) + " references unknown resource " +
                                      std::to_string(e));
        }
        return out;
    }

    double total_weight() const {
        double w = 0.0;
        for (const auto& p : players_) w += p.weight;
        return w;
    }

    void reserve(std::size_t resources, std::size_t players, std::size_t strategies,
                 std::size_t rids) {
        latencies_.reserve(resources);
        players_.reserve(players);
        strategy_refs_.reserve(strategies);
        rid_pool_.reserve(rids);
    }

  private:
    bool same_strategy_set(PlayerId a, PlayerId b) const {
        if (strategy_count(a) != strategy_count(b)) return false;
        for (int s = 0; s < strategy_count(a); ++s) {
            auto sa = strategy(a, s), sb = strategy(b, s);
            if (!std::equal(sa.begin(), sa.end(), sb.begin(), sb.end())) return false;
        }
        return true;
    }

    struct StrategyRef {
        std::uint32_t begin;
        std::uint32_t size;
    };
    struct PlayerRec {
        double weight;
        std::uint32_t strat_begin;
        std::uint32_t strat_count;
    };

    std::vector<LatencyFunction> latencies_;
    std::vector<ResourceId> rid_pool_;
    std::vector<StrategyRef> strategy_refs_;
    std::vector<PlayerRec> players_;
};

// Total or partial assignment of players to strategy indices, with the
// congestion vector maintained incrementally. Single-writer.
class StrategyProfile {
  public:
    StrategyProfile() = default;  // placeholder; assign a real profile before use

    explicit StrategyProfile(const CongestionGame& game)
        : game_(&game),
          assignment_(game.num_players(), kEmptyChoice),
          congestion_(game.num_resources(), 0.0) {}

    const CongestionGame& game() const { return *game_; }
    std::int32_t choice(PlayerId i) const { return assignment_[i]; }
    bool assigned(PlayerId i) const { return assignment_[i] != kEmptyChoice; }
    double congestion(ResourceId e) const { return congestion_[e]; }
    std::span<const double> congestions() const { return congestion_; }
    std::span<const std::int32_t> assignment() const { return assignment_; }

    bool total() const {
        for (auto a : assignment_)
            if (a == kEmptyChoice) return false;
        return true;
    }

    void set_choice(PlayerId i, std::int32_t s) {
        if (s < 0 || s >= game_->strategy_count(i))
            throw std::invalid_argument("set_choice: strategy index out of range");
        if (assignment_[i] == s) return;
        clear_choice(i);
        for (ResourceId e : game_->strategy(i, s)) congestion_[e] += game_->weight(i);
        assignment_[i] = s;
    }

    void clear_choice(PlayerId i) {
        if (assignment_[i] == kEmptyChoice) return;
        for (ResourceId e : game_->strategy(i, assignment_[i]))
            congestion_[e] -= game_->weight(i);
        assignment_[i] = kEmptyChoice;
    }

    // Rebuilds the congestion cache from the assignment (kills fp drift).
    void recompute_congestion() {
        std::fill(congestion_.begin(), congestion_.end(), 0.0);
        for (PlayerId i = 0; i < assignment_.size(); ++i)
            if (assignment_[i] != kEmptyChoice)
                for (ResourceId e : game_->strategy(i, assignment_[i]))
                    congestion_[e] += game_->weight(i);
    }

    bool operator==(const StrategyProfile& o) const { return assignment_ == o.assignment_; }

  private:
    const CongestionGame* game_ = nullptr;
    std::vector<std::int32_t> assignment_;
    std::vector<double> congestion_;
};

// cost_i(sigma) = sum of latencies at current congestion over i's resources.
inline double player_cost(const CongestionGame& game, const StrategyProfile& p, PlayerId i) {
    if (!p.assigned(i)) throw std::invalid_argument("player_cost: player unassigned");
    double c = 0.0;
    for (ResourceId e : game.strategy(i, p.choice(i))) c += game.latency(e).eval(p.congestion(e));
    return c;
}

// SUM(sigma) via the resource-side formula; empty players contribute 0.
inline double social_cost(const CongestionGame& game, const StrategyProfile& p) {
    double s = 0.0;
    for (ResourceId e = 0; e < game.num_resources(); ++e) {
        double k = p.congestion(e);
        if (k > 0.0) s += k * game.latency(e).eval(k);
    }
    return s;
}

// Player-side cross-check: sum_i w_i cost_i(sigma).
inline double social_cost_player_side(const CongestionGame& game, const StrategyProfile& p) {
    double s = 0.0;
    for (PlayerId i = 0; i < game.num_players(); ++i)
        if (p.assigned(i)) s += game.weight(i) * player_cost(game, p, i);
    return s;
}

}  // namespace poa
