#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poa/caps.hpp"
#include "poa/game.hpp"

namespace poa {

inline constexpr double kEquilibriumRelTol = 1e-9;

struct EquilibriumReport {
    bool is_equilibrium = true;
    double worst_ratio = 1.0;  // max over players of cost_i / best deviation cost
    PlayerId witness_player = 0;
    std::int32_t witness_strategy = 0;
    double epsilon = 0.0;
};

namespace detail {
// cost of player i under deviation to strategy s, with i's weight moved there
inline double deviation_cost(const CongestionGame& g, const StrategyProfile& p, PlayerId i,
                             int s) {
    double w = g.weight(i);
    auto cur = p.choice(i);
    double c = 0.0;
    for (ResourceId e : g.strategy(i, s)) {
        double k = p.congestion(e) + w;
        if (cur != kEmptyChoice) {
            // subtract i's own weight if e is in the current strategy
            for (ResourceId ce : g.strategy(i, cur))
                if (ce == e) {
                    k -= w;
                    break;
                }
        }
        c += g.latency(e).eval(k);
    }
    return c;
}
}  // namespace detail

// Examines every player against every alternative strategy in her list.
inline EquilibriumReport check_equilibrium(const CongestionGame& g, const StrategyProfile& p,
                                           double eps) {
    if (!p.total()) throw std::invalid_argument("check_equilibrium: profile must be total");
    EquilibriumReport rep;
    rep.epsilon = eps;
    for (PlayerId i = 0; i < g.num_players(); ++i) {
        double now = player_cost(g, p, i);
        double best = now;
        std::int32_t best_s = p.choice(i);
        for (int s = 0; s < g.strategy_count(i); ++s) {
            if (s == p.choice(i)) continue;
            double c = detail::deviation_cost(g, p, i, s);
            if (c < best) {
                best = c;
                best_s = s;
            }
        }
        double ratio = best > 0.0 ? now / best
                                  : (now > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.witness_player = i;
            rep.witness_strategy = best_s;
        }
    }
    rep.is_equilibrium = rep.worst_ratio <= (1 + eps) * (1 + kEquilibriumRelTol);
    return rep;
}

// Same check but deviations range over all single resources, regardless of
// the stored strategy lists. This is the symmetric load-balancing view; it
// avoids materializing m strategies per player on large instances.
inline EquilibriumReport check_equilibrium_symmetric_singleton(const CongestionGame& g,
                                                               const StrategyProfile& p,
                                                               double eps) {
    if (!p.total()) throw std::invalid_argument("check_equilibrium: profile must be total");
    EquilibriumReport rep;
    rep.epsilon = eps;
    for (PlayerId i = 0; i < g.num_players(); ++i) {
        auto cur = g.strategy(i, p.choice(i));
        if (cur.size() != 1)
            throw std::invalid_argument("symmetric singleton check requires singleton profile");
        ResourceId mine = cur[0];
        double w = g.weight(i);
        double now = g.latency(mine).eval(p.congestion(mine));
        double best = now;
        for (ResourceId e = 0; e < g.num_resources(); ++e) {
            if (e == mine) continue;
            double c = g.latency(e).eval(p.congestion(e) + w);
            if (c < best) best = c;
        }
        double ratio = best > 0.0 ? now / best
                                  : (now > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.witness_player = i;
        }
    }
    rep.is_equilibrium = rep.worst_ratio <= (1 + eps) * (1 + kEquilibriumRelTol);
    return rep;
}

enum class WalkMode { selfish, cooperative };

inline const char* walk_mode_name(WalkMode m) {
    return m == WalkMode::selfish ? "selfish" : "cooperative";
}

struct WalkStep {
    PlayerId player;
    std::int32_t chosen;
    double greedy_min;
    double chosen_value;
};

struct WalkTrace {
    std::vector<PlayerId> order;
    WalkMode mode = WalkMode::selfish;
    double epsilon = 0.0;
    std::vector<WalkStep> steps;  // empty when recording is disabled
    StrategyProfile final_profile;
    double max_rel_slack = 0.0;  // max over steps of chosen/((1+eps) min) - 1
    // max over steps with >= 2 strategies of |chosen/((1+eps) min) - 1|;
    // measures how tightly the walk realizes the (1+eps) slack
    double max_eq_dev = 0.0;
};

class walk_prescription_error : public std::runtime_error {
  public:
    walk_prescription_error(PlayerId player, int step, double chosen, double bound)
        : std::runtime_error("prescribed choice violates the (1+eps) inequality at step " +
                             std::to_string(step) + " (player " + std::to_string(player) +
                             "): chosen " + std::to_string(chosen) + " > " +
                             std::to_string(bound)),
          player_(player),
          step_(step) {}
    PlayerId player() const { return player_; }
    int step() const { return step_; }

  private:
    PlayerId player_;
    int step_;
};

struct WalkOptions {
    const std::vector<std::int32_t>* prescribed = nullptr;  // per player id
    bool record_steps = true;
};

// One-round walk: players arrive in `order`, each making an irrevocable
// greedy choice. Exact minimization with lowest-index tie-break; a prescribed
// choice list realizes the (1+eps) slack and is validated step by step.
inline WalkTrace run_walk(const CongestionGame& g, const std::vector<PlayerId>& order,
                          WalkMode mode, double eps, const WalkOptions& opt = {}) {
    if (order.size() != g.num_players())
        throw std::invalid_argument("run_walk: order must be a permutation of players");
    std::vector<bool> seen(g.num_players(), false);
    for (PlayerId i : order) {
        if (i >= g.num_players() || seen[i])
            throw std::invalid_argument("run_walk: order is not a permutation");
        seen[i] = true;
    }
    WalkTrace tr{order, mode, eps, {}, StrategyProfile(g), 0.0, 0.0};
    if (opt.record_steps) tr.steps.reserve(order.size());
    StrategyProfile& p = tr.final_profile;
    int step_no = 0;
    for (PlayerId i : order) {
        double w = g.weight(i);
        double minv = std::numeric_limits<double>::infinity();
        std::int32_t argmin = 0;
        int ns = g.strategy_count(i);
        auto value_of = [&](int s) {
            double v = 0.0;
            for (ResourceId e : g.strategy(i, s)) {
                double k = p.congestion(e);
                v += (mode == WalkMode::selfish) ? g.latency(e).eval(k + w)
                                                 : g.latency(e).marginal(k, w);
            }
            return v;
        };
        for (int s = 0; s < ns; ++s) {
            double v = value_of(s);
            if (v < minv) {
                minv = v;
                argmin = s;
            }
        }
        std::int32_t chosen = argmin;
        double chosen_value = minv;
        if (opt.prescribed != nullptr) {
            chosen = (*opt.prescribed)[i];
            if (chosen < 0 || chosen >= ns)
                throw std::invalid_argument("run_walk: prescribed strategy out of range");
            chosen_value = value_of(chosen);
            double bound = (1 + eps) * minv;
            if (chosen_value > bound + kEquilibriumRelTol * std::max(1.0, bound))
                throw walk_prescription_error(i, step_no, chosen_value, bound);
        }
        if (minv > 0.0) {
            double rel = chosen_value / ((1 + eps) * minv) - 1.0;
            tr.max_rel_slack = std::max(tr.max_rel_slack, rel);
            if (ns >= 2) tr.max_eq_dev = std::max(tr.max_eq_dev, std::abs(rel));
        }
        p.set_choice(i, chosen);
        if (opt.record_steps) tr.steps.push_back({i, chosen, minv, chosen_value});
        ++step_no;
    }
    return tr;
}

namespace detail {

inline std::int64_t profile_space(const CongestionGame& g) {
    std::int64_t total = 1;
    for (PlayerId i = 0; i < g.num_players(); ++i) {
        int ns = g.strategy_count(i);
        if (total > (std::numeric_limits<std::int64_t>::max)() / ns) return -1;
        total *= ns;
    }
    return total;
}

// Odometer enumeration; visit(profile) is called for every total profile.
template <typename Visit>
inline void enumerate_profiles(const CongestionGame& g, Visit&& visit) {
    StrategyProfile p(g);
    const auto n = static_cast<PlayerId>(g.num_players());
    for (PlayerId i = 0; i < n; ++i) p.set_choice(i, 0);
    while (true) {
        visit(p);
        PlayerId i = 0;
        while (i < n) {
            std::int32_t next = p.choice(i) + 1;
            if (next < g.strategy_count(i)) {
                p.set_choice(i, next);
                break;
            }
            p.set_choice(i, 0);
            ++i;
        }
        if (i == n) break;
    }
}

}  // namespace detail

struct OptimumResult {
    StrategyProfile profile;
    double value = 0.0;
};

// Exact social optimum by exhaustive enumeration, lexicographic tie-break.
inline OptimumResult brute_force_optimum(const CongestionGame& g,
                                         const Caps& caps = Caps::from_env()) {
    std::int64_t space = detail::profile_space(g);
    if (space < 0 || space > caps.max_profiles)
        throw cap_exceeded("brute_force_optimum: profile space exceeds cap");
    OptimumResult best{StrategyProfile(g), std::numeric_limits<double>::infinity()};
    detail::enumerate_profiles(g, [&](const StrategyProfile& p) {
        double v = social_cost(g, p);
        if (v < best.value) {  // first-found minimum wins ties (odometer order)
            best.value = v;
            best.profile = p;
        }
    });
    return best;
}

struct WorstEquilibriumResult {
    bool found = false;  // weighted games may have no eps-equilibrium
    StrategyProfile profile;
    double poa = 0.0;
    double optimum_value = 0.0;
};

// Enumerates all profiles, filters by check_equilibrium, returns the max-SUM
// equilibrium divided by the optimum value.
inline WorstEquilibriumResult worst_equilibrium(const CongestionGame& g, double eps,
                                                const Caps& caps = Caps::from_env()) {
    std::int64_t space = detail::profile_space(g);
    if (space < 0 || space > caps.max_profiles)
        throw cap_exceeded("worst_equilibrium: profile space exceeds cap");
    WorstEquilibriumResult out{false, StrategyProfile(g), 0.0,
                               std::numeric_limits<double>::infinity()};
    double worst_sum = -1.0;
    detail::enumerate_profiles(g, [&](const StrategyProfile& p) {
        double v = social_cost(g, p);
        out.optimum_value = std::min(out.optimum_value, v);
        if (v > worst_sum && check_equilibrium(g, p, eps).is_equilibrium) {
            worst_sum = v;
            out.profile = p;
            out.found = true;
        }
    });
    if (out.found) out.poa = worst_sum / out.optimum_value;
    return out;
}

inline double ratio(const CongestionGame& g, const StrategyProfile& p, double optimum_value) {
    if (!(optimum_value > 0.0)) throw std::invalid_argument("ratio: optimum must be > 0");
    return social_cost(g, p) / optimum_value;
}

struct WorstOrderResult {
    std::vector<PlayerId> order;
    double ratio = 0.0;
    double optimum_value = 0.0;
};

// Exact-greedy walk outcome maximized over all arrival orders (small n
// only). There is no canonical order quantifier for instance-level CR;
// this reports the worst over the orders tried and nothing stronger.
inline WorstOrderResult worst_order_walk(const CongestionGame& g, WalkMode mode, double eps,
                                         const Caps& caps = Caps::from_env()) {
    auto n = g.num_players();
    double perms = 1.0;
    for (PlayerId i = 2; i <= n; ++i) perms *= i;
    if (perms > static_cast<double>(caps.max_profiles))
        throw cap_exceeded("worst_order_walk: n! exceeds cap");
    auto opt = brute_force_optimum(g, caps);
    std::vector<PlayerId> order(n);
    std::iota(order.begin(), order.end(), 0u);
    WorstOrderResult out;
    out.optimum_value = opt.value;
    do {
        WalkOptions wo;
        wo.record_steps = false;
        auto tr = run_walk(g, order, mode, eps, wo);
        double r = social_cost(g, tr.final_profile) / opt.value;
        if (r > out.ratio) {
            out.ratio = r;
            out.order = order;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

}  // namespace poa
