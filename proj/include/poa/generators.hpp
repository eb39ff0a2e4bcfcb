#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poa/bounds.hpp"
#include "poa/caps.hpp"
#include "poa/dynamics.hpp"
#include "poa/game.hpp"
#include "poa/identical.hpp"

namespace poa {

enum class Family {
    weighted_tree,
    weighted_walk_tree,
    unweighted_multipartite,
    unweighted_walk_multipartite,
    identical_weighted,
    identical_unweighted_walk,
};

inline const char* family_name(Family f) {
    switch (f) {
        case Family::weighted_tree: return "weighted-tree";
        case Family::weighted_walk_tree: return "weighted-walk-tree";
        case Family::unweighted_multipartite: return "unweighted-multipartite";
        case Family::unweighted_walk_multipartite: return "unweighted-walk-multipartite";
        case Family::identical_weighted: return "identical-weighted";
        case Family::identical_unweighted_walk: return "identical-unweighted-walk";
    }
    return "?";
}

struct ClosedFormRatio {
    double finite = std::numeric_limits<double>::quiet_NaN();  // dominant-term formula
    double limit = std::numeric_limits<double>::quiet_NaN();   // s -> inf (and n -> inf)
};

struct GeneratorChecks {
    std::optional<bool> equilibrium;       // families claiming an eps-equilibrium
    double equilibrium_worst_ratio = 0.0;
    std::optional<bool> walk_valid;        // walk families: prescribed walk accepted
    std::optional<bool> walk_reproduces;   // final profile == canonical, bit for bit
    double max_step_eq_dev = 0.0;          // max |chosen/((1+eps) min) - 1| over real steps
    double sim_sum_sigma = 0.0;
    double sim_sum_opt = 0.0;
    bool closed_form_match = false;        // sims agree with exact closed forms (1e-6 rel)
};

struct GeneratedInstance {
    Family family = Family::weighted_tree;
    double epsilon = 0.0;
    std::optional<WalkMode> mode;
    std::shared_ptr<const CongestionGame> game;
    StrategyProfile canonical_profile;   // sigma
    StrategyProfile optimal_profile;     // sigma*
    std::optional<std::vector<PlayerId>> walk_order;
    std::optional<std::vector<std::int32_t>> prescribed_choices;
    double cf_sum_sigma = 0.0;  // exact closed form incl. boundary terms
    double cf_sum_opt = 0.0;
    ClosedFormRatio closed_form_ratio;
    GeneratorChecks checks;

    const CongestionGame& g() const { return *game; }
};

namespace gendetail {

inline double geom_sum(double q, int m) {  // sum_{i=0}^{m-1} q^i
    if (m <= 0) return 0.0;
    if (std::abs(q - 1.0) < 1e-13) return static_cast<double>(m);
    return (std::pow(q, m) - 1.0) / (q - 1.0);
}

// Closed forms shared by the tree and multipartite families. P1/P12/P2 are
// the per-level growth factors, K_j = k_j f_j(k_j), O_j = o_j f_j(o_j),
// B = (k2+o2) f2(k2+o2); C is the level-size prefactor.
struct FamilySums {
    double sum_sigma;
    double sum_opt;
    double ratio_dominant;
};

inline FamilySums family_sums(int s, double C, double P1, double P12, double P2, double K1,
                              double K2, double O1, double O2, double B) {
    double g1 = geom_sum(P1, s), g2 = geom_sum(P2, s);
    double lead = std::pow(P1, s - 1) * P12;
    FamilySums out;
    out.sum_sigma = C * (K1 * g1 + lead * K2 * g2);
    out.sum_opt = C * (O1 * (g1 - 1.0) + lead * (O2 * geom_sum(P2, s - 1) +
                                                 std::pow(P2, s - 1) * B));
    out.ratio_dominant = (K1 * g1 + lead * K2 * g2) / (O1 * g1 + lead * O2 * g2);
    return out;
}

// s -> inf limit of the exact instance ratio. P1 > 1 with P2 < 1 is the
// Case-2 regime; P1 = 1 the beta = 0 witness; P1 < 1 a Case-1 witness with
// beta > 0 (where the boundary term of SUM(sigma*) survives the limit).
// P2 >= 1 alongside P1 > 1 means the deeper block dominates outright;
// remaining sign patterns have no meaningful limit (witness/metric mismatch).
inline double family_limit(double P1, double P12, double P2, double K1, double K2, double O1,
                           double O2) {
    const double tol = 1e-9;
    if (P1 > 1.0 + tol) {
        if (P2 < 1.0 - tol) {
            double a = P1 / (P1 - 1.0), b = P12 / (1.0 - P2);
            return (K1 * a + K2 * b) / (O1 * a + O2 * b);
        }
        return K2 / O2;
    }
    if (std::abs(P1 - 1.0) <= tol) {
        if (P2 > 1.0 + tol) return K2 / O2;
        return K1 / O1;
    }
    if (P2 >= 1.0 - tol) return std::numeric_limits<double>::quiet_NaN();
    return K1 / (P1 * O1);
}

struct WeightedWitness {
    double k1, k2;
    LatencyFunction f1, f2;
    bool case2;
};

inline WeightedWitness weighted_params(const WitnessTuple& w) {
    auto near1 = [](double o) { return std::abs(o - 1.0) <= 1e-9; };
    if (!near1(w.o1) || (w.case2 && !near1(w.o2)))
        throw std::invalid_argument("generator witness must be normalized to o = 1");
    if (!w.case2) return {w.k1, w.k1, w.f1, w.f1, false};
    return {w.k1, w.k2, w.f1, w.f2, true};
}

struct UnweightedWitness {
    int k1, k2, o1, o2;
    LatencyFunction f1, f2;
};

inline UnweightedWitness unweighted_params(const WitnessTuple& w) {
    auto as_int = [](double v, const char* what) {
        if (std::abs(v - std::round(v)) > 1e-9)
            throw std::invalid_argument(std::string("generator witness: ") + what +
                                        " must be integer");
        return static_cast<int>(std::llround(v));
    };
    UnweightedWitness u{as_int(w.k1, "k1"), 0, as_int(w.o1, "o1"), 0, w.f1, w.f1};
    if (w.case2) {
        u.k2 = as_int(w.k2, "k2");
        u.o2 = as_int(w.o2, "o2");
        u.f2 = w.f2;
    } else {
        u.k2 = u.k1;
        u.o2 = u.o1;
    }
    if (u.k1 < 1 || u.k2 < 1 || u.o1 < 1 || u.o2 < 1)
        throw std::invalid_argument("generator witness: k, o must be >= 1");
    return u;
}

inline void check_sums(GeneratedInstance& inst) {
    inst.checks.sim_sum_sigma = social_cost(inst.g(), inst.canonical_profile);
    inst.checks.sim_sum_opt = social_cost(inst.g(), inst.optimal_profile);
    auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
    };
    inst.checks.closed_form_match = rel(inst.checks.sim_sum_sigma, inst.cf_sum_sigma) <= 1e-6 &&
                                    rel(inst.checks.sim_sum_opt, inst.cf_sum_opt) <= 1e-6;
}

// Replays the prescribed walk and records validity / reproduction / tightness.
inline void check_walk(GeneratedInstance& inst) {
    WalkOptions wo;
    wo.prescribed = &*inst.prescribed_choices;
    wo.record_steps = false;
    try {
        auto tr = run_walk(inst.g(), *inst.walk_order, *inst.mode, inst.epsilon, wo);
        inst.checks.walk_valid = true;
        inst.checks.walk_reproduces = tr.final_profile == inst.canonical_profile;
        inst.checks.max_step_eq_dev = tr.max_eq_dev;
    } catch (const walk_prescription_error&) {
        inst.checks.walk_valid = false;
        inst.checks.walk_reproduces = false;
    }
}

}  // namespace gendetail

// Closed forms without materializing the instance (the trees grow as n^{2s}).
inline ClosedFormRatio weighted_tree_closed_form(int s, const WitnessTuple& witness,
                                                 double eps) {
    auto wp = gendetail::weighted_params(witness);
    const double k1 = wp.k1, k2 = wp.k2;
    const double th1 = wp.f1.eval(k1) / ((1 + eps) * wp.f1.eval(k1 + 1));
    const double th12 = wp.f1.eval(k1) / ((1 + eps) * wp.f2.eval(k2 + 1));
    const double th2 = wp.f2.eval(k2) / ((1 + eps) * wp.f2.eval(k2 + 1));
    const double K1 = k1 * wp.f1.eval(k1), K2 = k2 * wp.f2.eval(k2);
    const double O1 = wp.f1.eval(1), O2 = wp.f2.eval(1);
    const double B = (k2 + 1) * wp.f2.eval(k2 + 1);
    auto sums = gendetail::family_sums(s, 1.0, k1 * th1, k1 * th12, k2 * th2, K1, K2, O1, O2, B);
    return {sums.ratio_dominant,
            gendetail::family_limit(k1 * th1, k1 * th12, k2 * th2, K1, K2, O1, O2)};
}

inline ClosedFormRatio weighted_walk_tree_closed_form(int s, int n, const WitnessTuple& witness,
                                                      double eps, WalkMode mode) {
    auto wp = gendetail::weighted_params(witness);
    const double k1 = wp.k1, k2 = wp.k2;
    const LatencyFunction &f1 = wp.f1, &f2 = wp.f2;
    double S1 = 0.0, S12 = 0.0, S2 = 0.0;
    for (int h = 1; h <= n; ++h) {
        if (mode == WalkMode::selfish) {
            S1 += f1.eval(h * k1 / n) / ((1 + eps) * f1.eval(k1 + 1));
            S12 += f1.eval(h * k1 / n) / ((1 + eps) * f2.eval(k2 + 1));
            S2 += f2.eval(h * k2 / n) / ((1 + eps) * f2.eval(k2 + 1));
        } else {
            double m1 = (k1 + 1) * f1.eval(k1 + 1) - k1 * f1.eval(k1);
            double m2 = (k2 + 1) * f2.eval(k2 + 1) - k2 * f2.eval(k2);
            S1 += f1.eval(k1) / ((1 + eps) * m1);
            S12 += f1.eval(k1) / ((1 + eps) * m2);
            S2 += f2.eval(k2) / ((1 + eps) * m2);
        }
    }
    const double P1 = k1 / n * S1, P12 = k1 / n * S12, P2 = k2 / n * S2;
    const double K1 = k1 * f1.eval(k1), K2 = k2 * f2.eval(k2);
    const double O1 = f1.eval(1), O2 = f2.eval(1);
    const double B = (k2 + 1) * f2.eval(k2 + 1);
    auto sums = gendetail::family_sums(s, 1.0, P1, P12, P2, K1, K2, O1, O2, B);
    double limit;
    if (mode == WalkMode::selfish) {
        double xi1 = f1.integral(k1) / ((1 + eps) * f1.eval(k1 + 1));
        double xi12 = f1.integral(k1) / ((1 + eps) * f2.eval(k2 + 1));
        double xi2 = f2.integral(k2) / ((1 + eps) * f2.eval(k2 + 1));
        limit = gendetail::family_limit(xi1, xi12, xi2, K1, K2, O1, O2);
    } else {
        limit = gendetail::family_limit(P1, P12, P2, K1, K2, O1, O2);
    }
    return {sums.ratio_dominant, limit};
}

// ---------------------------------------------------------------------------
// Weighted tree family: an n-ary tree with self-loops at the last level.
// Players are edges (first strategy = tail, second = head); sigma = all-first
// is an eps-approximate equilibrium, sigma* = all-second.
inline GeneratedInstance gen_weighted_tree(int s, int n, const WitnessTuple& witness, double eps,
                                           bool symmetric = false,
                                           const Caps& caps = Caps::from_env()) {
    if (s < 2) throw std::invalid_argument("gen_weighted_tree: s >= 2");
    if (n < 1) throw std::invalid_argument("gen_weighted_tree: n >= 1");
    auto wp = gendetail::weighted_params(witness);
    const double k1 = wp.k1, k2 = wp.k2;
    const LatencyFunction &f1 = wp.f1, &f2 = wp.f2;

    const int levels = 2 * s;
    std::vector<std::int64_t> count(levels + 1), base(levels + 1);
    std::int64_t resources = 0;
    for (int i = 1; i <= levels; ++i) {
        count[i] = (i == 1) ? 1 : count[i - 1] * n;
        base[i] = resources;
        resources += count[i];
        if (resources > caps.max_resources)
            throw cap_exceeded("gen_weighted_tree: resource count exceeds cap");
    }
    std::int64_t players = resources * n;
    if (players > caps.max_players)
        throw cap_exceeded("gen_weighted_tree: player count exceeds cap");

    const double th1 = f1.eval(k1) / ((1 + eps) * f1.eval(k1 + 1));
    const double th12 = f1.eval(k1) / ((1 + eps) * f2.eval(k2 + 1));
    const double th2 = f2.eval(k2) / ((1 + eps) * f2.eval(k2 + 1));

    auto game = std::make_shared<CongestionGame>();
    // per-level latency g_i
    std::vector<double> w(levels + 1);
    {
        double ord = 1.0, absc = 1.0;
        double wgt = 1.0;
        for (int i = 1; i <= levels; ++i) {
            const LatencyFunction& fbase = (i <= s) ? f1 : f2;
            LatencyFunction gi = fbase.scale_abscissa(absc).scale_ordinate(ord);
            for (std::int64_t j = 0; j < count[i]; ++j) game->add_resource(gi);
            wgt *= (i <= s ? k1 : k2) / n;
            w[i] = wgt;
            ord *= (i < s) ? th1 : (i == s ? th12 : th2);
            absc *= static_cast<double>(n) / ((i < s) ? k1 : (i == s ? k1 : k2));
            // note: abscissa factor for level i+1 is (n/k1)^min(i,s) (n/k2)^max(0,i-s)
        }
    }

    if (symmetric) {
        std::int64_t arena = players * resources;
        if (arena > 50'000'000)
            throw cap_exceeded("gen_weighted_tree: symmetric strategy arena exceeds cap");
    }
    game->reserve(static_cast<std::size_t>(resources), static_cast<std::size_t>(players),
                  static_cast<std::size_t>(symmetric ? players * resources : 2 * players),
                  static_cast<std::size_t>(symmetric ? players * resources : 2 * players));

    std::vector<ResourceId> all_singles;
    if (symmetric) {
        all_singles.resize(static_cast<std::size_t>(resources));
        std::iota(all_singles.begin(), all_singles.end(), 0u);
    }

    GeneratedInstance inst;
    inst.family = Family::weighted_tree;
    inst.epsilon = eps;

    std::vector<std::int32_t> canon, opt;
    canon.reserve(static_cast<std::size_t>(players));
    opt.reserve(static_cast<std::size_t>(players));
    for (int i = 1; i <= levels; ++i) {
        for (std::int64_t j = 0; j < count[i]; ++j) {
            ResourceId tail = static_cast<ResourceId>(base[i] + j);
            for (int c = 0; c < n; ++c) {
                bool self = (i == levels);
                ResourceId head =
                    self ? tail : static_cast<ResourceId>(base[i + 1] + j * n + c);
                game->begin_player(w[i]);
                if (symmetric) {
                    for (ResourceId e = 0; e < static_cast<ResourceId>(resources); ++e)
                        game->add_singleton_strategy(e);
                    canon.push_back(static_cast<std::int32_t>(tail));
                    opt.push_back(static_cast<std::int32_t>(head));
                } else if (self) {
                    game->add_singleton_strategy(tail);
                    canon.push_back(0);
                    opt.push_back(0);
                } else {
                    game->add_singleton_strategy(tail);
                    game->add_singleton_strategy(head);
                    canon.push_back(0);
                    opt.push_back(1);
                }
            }
        }
    }

    inst.game = game;
    inst.canonical_profile = StrategyProfile(*game);
    inst.optimal_profile = StrategyProfile(*game);
    for (PlayerId i = 0; i < game->num_players(); ++i) {
        inst.canonical_profile.set_choice(i, canon[i]);
        inst.optimal_profile.set_choice(i, opt[i]);
    }

    const double K1 = k1 * f1.eval(k1), K2 = k2 * f2.eval(k2);
    const double O1 = f1.eval(1), O2 = f2.eval(1);
    const double B = (k2 + 1) * f2.eval(k2 + 1);
    auto sums = gendetail::family_sums(s, 1.0, k1 * th1, k1 * th12, k2 * th2, K1, K2, O1, O2, B);
    inst.cf_sum_sigma = sums.sum_sigma;
    inst.cf_sum_opt = sums.sum_opt;
    inst.closed_form_ratio.finite = sums.ratio_dominant;
    inst.closed_form_ratio.limit =
        gendetail::family_limit(k1 * th1, k1 * th12, k2 * th2, K1, K2, O1, O2);

    gendetail::check_sums(inst);
    auto rep = symmetric
                   ? check_equilibrium_symmetric_singleton(*game, inst.canonical_profile, eps)
                   : check_equilibrium(*game, inst.canonical_profile, eps);
    inst.checks.equilibrium = rep.is_equilibrium;
    inst.checks.equilibrium_worst_ratio = rep.worst_ratio;
    return inst;
}

// Doubles n until the all-first profile of the symmetric tree passes the
// equilibrium check (the threshold arity is existential, so concrete n is tested).
inline int find_symmetric_tree_n(int s, const WitnessTuple& witness, double eps, int n_cap = 256,
                                 const Caps& caps = Caps::from_env()) {
    for (int n = 1; n <= n_cap; n *= 2) {
        auto inst = gen_weighted_tree(s, n, witness, eps, /*symmetric=*/false, caps);
        auto rep =
            check_equilibrium_symmetric_singleton(inst.g(), inst.canonical_profile, eps);
        if (rep.is_equilibrium) return n;
    }
    throw cap_exceeded("find_symmetric_tree_n: no n <= cap passes the symmetric check");
}

// ---------------------------------------------------------------------------
// Labeled walk-tree family. Latencies follow the A_v product
// recursion over edge labels; players enter by non-increasing level of their
// first strategy, labels ascending, and each step is exactly (1+eps)-tight.
inline GeneratedInstance gen_weighted_walk_tree(int s, int n, const WitnessTuple& witness,
                                                double eps, WalkMode mode,
                                                const Caps& caps = Caps::from_env()) {
    if (s < 2) throw std::invalid_argument("gen_weighted_walk_tree: s >= 2");
    if (n < 1) throw std::invalid_argument("gen_weighted_walk_tree: n >= 1");
    if (mode == WalkMode::cooperative && n != 1)
        throw std::invalid_argument("gen_weighted_walk_tree: cooperative variant requires n = 1");
    auto wp = gendetail::weighted_params(witness);
    const double k1 = wp.k1, k2 = wp.k2;
    const LatencyFunction &f1 = wp.f1, &f2 = wp.f2;

    // per-label multipliers
    auto theta = [&](int which, int h) {  // which: 0 -> th1, 1 -> th12, 2 -> th2
        if (mode == WalkMode::selfish) {
            double arg1 = h * k1 / n, arg2 = h * k2 / n;
            switch (which) {
                case 0: return f1.eval(arg1) / ((1 + eps) * f1.eval(k1 + 1));
                case 1: return f1.eval(arg1) / ((1 + eps) * f2.eval(k2 + 1));
                default: return f2.eval(arg2) / ((1 + eps) * f2.eval(k2 + 1));
            }
        }
        double m1 = (k1 + 1) * f1.eval(k1 + 1) - k1 * f1.eval(k1);
        double m2 = (k2 + 1) * f2.eval(k2 + 1) - k2 * f2.eval(k2);
        switch (which) {
            case 0: return f1.eval(k1) / ((1 + eps) * m1);
            case 1: return f1.eval(k1) / ((1 + eps) * m2);
            default: return f2.eval(k2) / ((1 + eps) * m2);
        }
    };

    const int levels = 2 * s;
    std::vector<std::int64_t> count(levels + 1), base(levels + 1);
    std::int64_t resources = 0;
    for (int i = 1; i <= levels; ++i) {
        count[i] = (i == 1) ? 1 : count[i - 1] * n;
        base[i] = resources;
        resources += count[i];
        if (resources > caps.max_resources)
            throw cap_exceeded("gen_weighted_walk_tree: resource count exceeds cap");
    }
    std::int64_t players = resources * n;
    if (players > caps.max_players)
        throw cap_exceeded("gen_weighted_walk_tree: player count exceeds cap");

    auto game = std::make_shared<CongestionGame>();
    game->reserve(static_cast<std::size_t>(resources), static_cast<std::size_t>(players),
                  static_cast<std::size_t>(2 * players), static_cast<std::size_t>(2 * players));

    // A_v per node, level by level
    std::vector<double> w(levels + 1);
    {
        std::vector<double> A_prev{1.0}, A_cur;
        double absc = 1.0, wgt = 1.0;
        for (int i = 1; i <= levels; ++i) {
            const LatencyFunction& fbase = (i <= s) ? f1 : f2;
            LatencyFunction scaled = fbase.scale_abscissa(absc);
            for (std::int64_t j = 0; j < count[i]; ++j)
                game->add_resource(scaled.scale_ordinate(A_prev[static_cast<std::size_t>(j)]));
            wgt *= (i <= s ? k1 : k2) / n;
            w[i] = wgt;
            absc *= static_cast<double>(n) / ((i < s) ? k1 : (i == s ? k1 : k2));
            if (i < levels) {
                int which = (i + 1 <= s) ? 0 : (i + 1 == s + 1 ? 1 : 2);
                A_cur.resize(static_cast<std::size_t>(count[i + 1]));
                for (std::int64_t j = 0; j < count[i]; ++j)
                    for (int c = 0; c < n; ++c)
                        A_cur[static_cast<std::size_t>(j * n + c)] =
                            theta(which, c + 1) * A_prev[static_cast<std::size_t>(j)];
                A_prev.swap(A_cur);
            }
        }
    }

    GeneratedInstance inst;
    inst.family = Family::weighted_walk_tree;
    inst.epsilon = eps;
    inst.mode = mode;

    std::vector<std::int32_t> canon, opt;
    canon.reserve(static_cast<std::size_t>(players));
    opt.reserve(static_cast<std::size_t>(players));
    for (int i = 1; i <= levels; ++i) {
        for (std::int64_t j = 0; j < count[i]; ++j) {
            ResourceId tail = static_cast<ResourceId>(base[i] + j);
            for (int c = 0; c < n; ++c) {
                bool self = (i == levels);
                game->begin_player(w[i]);
                if (self) {
                    game->add_singleton_strategy(tail);
                    canon.push_back(0);
                    opt.push_back(0);
                } else {
                    game->add_singleton_strategy(tail);
                    game->add_singleton_strategy(
                        static_cast<ResourceId>(base[i + 1] + j * n + c));
                    canon.push_back(0);
                    opt.push_back(1);
                }
            }
        }
    }

    inst.game = game;
    inst.canonical_profile = StrategyProfile(*game);
    inst.optimal_profile = StrategyProfile(*game);
    for (PlayerId i = 0; i < game->num_players(); ++i) {
        inst.canonical_profile.set_choice(i, canon[i]);
        inst.optimal_profile.set_choice(i, opt[i]);
    }

    // players with first strategy at deeper levels enter first; within a
    // level, ascending edge label, then tail index
    auto order = std::make_optional<std::vector<PlayerId>>();
    order->reserve(static_cast<std::size_t>(players));
    std::vector<std::int64_t> player_base(levels + 1);
    {
        std::int64_t acc = 0;
        for (int i = 1; i <= levels; ++i) {
            player_base[i] = acc;
            acc += count[i] * n;
        }
    }
    for (int i = levels; i >= 1; --i)
        for (int c = 0; c < n; ++c)
            for (std::int64_t j = 0; j < count[i]; ++j)
                order->push_back(static_cast<PlayerId>(player_base[i] + j * n + c));
    inst.walk_order = std::move(order);
    inst.prescribed_choices = canon;

    // finite-n growth factors and their n -> inf limits
    double S1 = 0.0, S12 = 0.0, S2 = 0.0;
    for (int h = 1; h <= n; ++h) {
        S1 += theta(0, h);
        S12 += theta(1, h);
        S2 += theta(2, h);
    }
    const double P1 = k1 / n * S1, P12 = k1 / n * S12, P2 = k2 / n * S2;
    const double K1 = k1 * f1.eval(k1), K2 = k2 * f2.eval(k2);
    const double O1 = f1.eval(1), O2 = f2.eval(1);
    const double B = (k2 + 1) * f2.eval(k2 + 1);
    auto sums = gendetail::family_sums(s, 1.0, P1, P12, P2, K1, K2, O1, O2, B);
    inst.cf_sum_sigma = sums.sum_sigma;
    inst.cf_sum_opt = sums.sum_opt;
    inst.closed_form_ratio.finite = sums.ratio_dominant;
    if (mode == WalkMode::selfish) {
        double xi1 = f1.integral(k1) / ((1 + eps) * f1.eval(k1 + 1));
        double xi12 = f1.integral(k1) / ((1 + eps) * f2.eval(k2 + 1));
        double xi2 = f2.integral(k2) / ((1 + eps) * f2.eval(k2 + 1));
        inst.closed_form_ratio.limit = gendetail::family_limit(xi1, xi12, xi2, K1, K2, O1, O2);
    } else {
        inst.closed_form_ratio.limit = gendetail::family_limit(P1, P12, P2, K1, K2, O1, O2);
    }

    gendetail::check_sums(inst);
    gendetail::check_walk(inst);
    return inst;
}

// ---------------------------------------------------------------------------
// Unweighted multipartite constructions. The recursive
// group/subgroup partition fixes both the wiring and (for the walk variant)
// the per-node labels; A_v is constant on each group, which realizes the
// proof's claim that A is independent of the chosen incoming edge.
namespace gendetail {

struct MultiGraph {
    int s, k1, k2, o1, o2;
    std::vector<std::int64_t> N, base;        // per level 1..2s
    std::vector<std::int64_t> mgroups;        // #groups per level
    std::vector<std::vector<int>> label;      // per level, per group (1-based label)
    std::vector<std::vector<double>> A;       // per level, per group
    std::int64_t resources = 0, players = 0;

    int out_deg(int i) const { return (i <= s) ? k1 : k2; }
    int in_deg(int i) const { return (i <= s) ? o1 : o2; }  // of level i (i >= 2)
};

// theta kinds: plain (equilibrium variant), selfish / cooperative labels (walk variants)
enum class MultiKind { plain, walk_selfish, walk_cooperative };

inline MultiGraph build_multipartite(int s, const UnweightedWitness& uw, double eps,
                                     MultiKind kind, const Caps& caps) {
    if (s < 1) throw std::invalid_argument("multipartite: s >= 1");
    MultiGraph g;
    g.s = s;
    g.k1 = uw.k1;
    g.k2 = uw.k2;
    g.o1 = uw.o1;
    g.o2 = uw.o2;
    const int levels = 2 * s;
    g.N.assign(levels + 1, 0);
    g.base.assign(levels + 1, 0);
    for (int i = 1; i <= levels; ++i) {
        double logN = (i <= s) ? (s - i) * std::log((double)uw.o1) +
                                     (i - 1) * std::log((double)uw.k1) +
                                     s * std::log((double)uw.o2)
                               : (2 * s - i) * std::log((double)uw.o2) +
                                     (i - s - 1) * std::log((double)uw.k2) +
                                     s * std::log((double)uw.k1);
        if (logN > std::log(2.0) * 62)
            throw cap_exceeded("multipartite: level size overflows");
        std::int64_t sz = 1;
        if (i <= s) {
            for (int t = 0; t < s - i; ++t) sz *= uw.o1;
            for (int t = 0; t < i - 1; ++t) sz *= uw.k1;
            for (int t = 0; t < s; ++t) sz *= uw.o2;
        } else {
            for (int t = 0; t < 2 * s - i; ++t) sz *= uw.o2;
            for (int t = 0; t < i - s - 1; ++t) sz *= uw.k2;
            for (int t = 0; t < s; ++t) sz *= uw.k1;
        }
        g.N[i] = sz;
        g.base[i] = g.resources;
        g.resources += sz;
        if (g.resources > caps.max_resources)
            throw cap_exceeded("multipartite: resource count exceeds cap");
    }
    g.players = 0;
    for (int i = 1; i <= levels; ++i) g.players += g.N[i] * g.out_deg(i);
    if (g.players > caps.max_players)
        throw cap_exceeded("multipartite: player count exceeds cap");

    // group structure with per-group labels and A values
    const LatencyFunction &f1 = uw.f1, &f2 = uw.f2;
    auto theta = [&](int a, int b, int h) {
        const LatencyFunction& fa = (a == 1) ? f1 : f2;
        const LatencyFunction& fb = (b == 1) ? f1 : f2;
        double kb = (b == 1) ? uw.k1 : uw.k2;
        if (kind == MultiKind::walk_cooperative) {
            double num = h * fa.eval(h) - (h - 1) * fa.eval(h - 1);
            double den = (kb + 1) * fb.eval(kb + 1) - kb * fb.eval(kb);
            return num / ((1 + eps) * den);
        }
        double arg = (kind == MultiKind::plain) ? ((a == 1) ? uw.k1 : uw.k2)
                                                : static_cast<double>(h);
        return fa.eval(arg) / ((1 + eps) * fb.eval(kb + 1));
    };
    g.mgroups.assign(levels + 1, 1);
    g.label.assign(levels + 1, {});
    g.A.assign(levels + 1, {});
    g.label[1] = {0};
    g.A[1] = {1.0};
    for (int i = 1; i < levels; ++i) {
        int kprime = g.out_deg(i);
        g.mgroups[i + 1] = g.mgroups[i] * kprime;
        int a = (i <= s) ? 1 : 2;             // function index of the label level
        int b = (i + 1 <= s) ? 1 : 2;         // deviation-target function index
        g.label[i + 1].resize(static_cast<std::size_t>(g.mgroups[i + 1]));
        g.A[i + 1].resize(static_cast<std::size_t>(g.mgroups[i + 1]));
        for (std::int64_t gr = 0; gr < g.mgroups[i]; ++gr)
            for (int c = 0; c < kprime; ++c) {
                g.label[i + 1][static_cast<std::size_t>(gr * kprime + c)] = c + 1;
                g.A[i + 1][static_cast<std::size_t>(gr * kprime + c)] =
                    theta(a, b, c + 1) * g.A[i][static_cast<std::size_t>(gr)];
            }
    }
    return g;
}

}  // namespace gendetail

inline GeneratedInstance gen_unweighted_multipartite_impl(int s, const WitnessTuple& witness,
                                                          double eps,
                                                          gendetail::MultiKind kind,
                                                          const Caps& caps) {
    auto uw = gendetail::unweighted_params(witness);
    auto mg = gendetail::build_multipartite(s, uw, eps, kind, caps);
    const int levels = 2 * s;
    const LatencyFunction &f1 = uw.f1, &f2 = uw.f2;
    const double th1 = f1.eval(uw.k1) / ((1 + eps) * f1.eval(uw.k1 + 1));
    const double th12 = f1.eval(uw.k1) / ((1 + eps) * f2.eval(uw.k2 + 1));
    const double th2 = f2.eval(uw.k2) / ((1 + eps) * f2.eval(uw.k2 + 1));

    auto game = std::make_shared<CongestionGame>();
    game->reserve(static_cast<std::size_t>(mg.resources), static_cast<std::size_t>(mg.players),
                  static_cast<std::size_t>(2 * mg.players),
                  static_cast<std::size_t>(2 * mg.players));
    for (int i = 1; i <= levels; ++i) {
        const LatencyFunction& fbase = (i <= s) ? f1 : f2;
        std::int64_t gsz = mg.N[i] / mg.mgroups[i];
        for (std::int64_t gr = 0; gr < mg.mgroups[i]; ++gr) {
            LatencyFunction gl = fbase.scale_ordinate(mg.A[i][static_cast<std::size_t>(gr)]);
            for (std::int64_t p = 0; p < gsz; ++p) game->add_resource(gl);
        }
    }

    GeneratedInstance inst;
    inst.family = (kind == gendetail::MultiKind::plain)
                      ? Family::unweighted_multipartite
                      : Family::unweighted_walk_multipartite;
    inst.epsilon = eps;
    if (kind == gendetail::MultiKind::walk_selfish) inst.mode = WalkMode::selfish;
    if (kind == gendetail::MultiKind::walk_cooperative) inst.mode = WalkMode::cooperative;

    // players, level-major; per tail, edge c goes into head subgroup c
    std::vector<std::int64_t> player_base(levels + 1);
    std::vector<std::int32_t> canon, opt;
    canon.reserve(static_cast<std::size_t>(mg.players));
    opt.reserve(static_cast<std::size_t>(mg.players));
    {
        std::int64_t acc = 0;
        for (int i = 1; i <= levels; ++i) {
            player_base[i] = acc;
            acc += mg.N[i] * mg.out_deg(i);
        }
    }
    for (int i = 1; i <= levels; ++i) {
        int kprime = mg.out_deg(i);
        if (i == levels) {  // self-loops
            for (std::int64_t v = 0; v < mg.N[i]; ++v) {
                ResourceId node = static_cast<ResourceId>(mg.base[i] + v);
                for (int c = 0; c < kprime; ++c) {
                    game->begin_player(1.0);
                    game->add_singleton_strategy(node);
                    canon.push_back(0);
                    opt.push_back(0);
                }
            }
            break;
        }
        int oprime = mg.in_deg(i + 1);
        std::int64_t gsz = mg.N[i] / mg.mgroups[i];
        std::int64_t g2 = mg.N[i + 1] / mg.mgroups[i];  // temporary group size
        std::int64_t ssz = gsz / oprime, hsz = g2 / kprime;
        if (ssz != hsz) throw std::logic_error("multipartite wiring: subgroup size mismatch");
        for (std::int64_t gr = 0; gr < mg.mgroups[i]; ++gr)
            for (std::int64_t p = 0; p < gsz; ++p) {
                ResourceId tail = static_cast<ResourceId>(mg.base[i] + gr * gsz + p);
                std::int64_t q = p % ssz;
                for (int c = 0; c < kprime; ++c) {
                    ResourceId head =
                        static_cast<ResourceId>(mg.base[i + 1] + gr * g2 + c * hsz + q);
                    game->begin_player(1.0);
                    game->add_singleton_strategy(tail);
                    game->add_singleton_strategy(head);
                    canon.push_back(0);
                    opt.push_back(1);
                }
            }
    }

    inst.game = game;
    inst.canonical_profile = StrategyProfile(*game);
    inst.optimal_profile = StrategyProfile(*game);
    for (PlayerId i = 0; i < game->num_players(); ++i) {
        inst.canonical_profile.set_choice(i, canon[i]);
        inst.optimal_profile.set_choice(i, opt[i]);
    }

    // growth factors: plain uses theta at k, walks use the label sums
    double P1, P12, P2;
    if (kind == gendetail::MultiKind::plain) {
        P1 = uw.k1 * th1 / uw.o1;
        P12 = uw.k1 * th12 / uw.o2;
        P2 = uw.k2 * th2 / uw.o2;
    } else {
        auto theta_sum = [&](int a, int b, int kk) {
            const LatencyFunction& fa = (a == 1) ? f1 : f2;
            const LatencyFunction& fb = (b == 1) ? f1 : f2;
            double kb = (b == 1) ? uw.k1 : uw.k2;
            double ssum = 0.0;
            for (int h = 1; h <= kk; ++h) {
                if (kind == gendetail::MultiKind::walk_cooperative) {
                    double num = h * fa.eval(h) - (h - 1) * fa.eval(h - 1);
                    double den = (kb + 1) * fb.eval(kb + 1) - kb * fb.eval(kb);
                    ssum += num / ((1 + eps) * den);
                } else {
                    ssum += fa.eval(h) / ((1 + eps) * fb.eval(kb + 1));
                }
            }
            return ssum;
        };
        P1 = theta_sum(1, 1, uw.k1) / uw.o1;
        P12 = theta_sum(1, 2, uw.k1) / uw.o2;
        P2 = theta_sum(2, 2, uw.k2) / uw.o2;
    }
    double C = 1.0;
    for (int t = 0; t < s - 1; ++t) C *= uw.o1;
    for (int t = 0; t < s; ++t) C *= uw.o2;
    const double K1 = uw.k1 * f1.eval(uw.k1), K2 = uw.k2 * f2.eval(uw.k2);
    const double O1 = uw.o1 * f1.eval(uw.o1), O2 = uw.o2 * f2.eval(uw.o2);
    const double B = (uw.k2 + uw.o2) * f2.eval(uw.k2 + uw.o2);
    auto sums = gendetail::family_sums(s, C, P1, P12, P2, K1, K2, O1, O2, B);
    inst.cf_sum_sigma = sums.sum_sigma;
    inst.cf_sum_opt = sums.sum_opt;
    inst.closed_form_ratio.finite = sums.ratio_dominant;
    inst.closed_form_ratio.limit = gendetail::family_limit(P1, P12, P2, K1, K2, O1, O2);

    gendetail::check_sums(inst);
    if (kind == gendetail::MultiKind::plain) {
        auto rep = check_equilibrium(*game, inst.canonical_profile, eps);
        inst.checks.equilibrium = rep.is_equilibrium;
        inst.checks.equilibrium_worst_ratio = rep.worst_ratio;
    } else {
        auto order = std::make_optional<std::vector<PlayerId>>();
        order->reserve(static_cast<std::size_t>(mg.players));
        for (int i = levels; i >= 1; --i) {
            int kprime = mg.out_deg(i);
            for (int c = 0; c < kprime; ++c)
                for (std::int64_t v = 0; v < mg.N[i]; ++v)
                    order->push_back(
                        static_cast<PlayerId>(player_base[i] + v * kprime + c));
        }
        inst.walk_order = std::move(order);
        inst.prescribed_choices = canon;
        gendetail::check_walk(inst);
    }
    return inst;
}

inline GeneratedInstance gen_unweighted_multipartite(int s, const WitnessTuple& witness,
                                                     double eps,
                                                     const Caps& caps = Caps::from_env()) {
    return gen_unweighted_multipartite_impl(s, witness, eps, gendetail::MultiKind::plain, caps);
}

inline GeneratedInstance gen_unweighted_walk_multipartite(int s, const WitnessTuple& witness,
                                                          double eps, WalkMode mode,
                                                          const Caps& caps = Caps::from_env()) {
    return gen_unweighted_multipartite_impl(s, witness, eps,
                                            mode == WalkMode::selfish
                                                ? gendetail::MultiKind::walk_selfish
                                                : gendetail::MultiKind::walk_cooperative,
                                            caps);
}

// ---------------------------------------------------------------------------
// Identical-resources two-group family: m identical resources, 2h red
// players of weight x/2 and
// blue players cut from two overlapping subdivisions of a common weight
// segment. sigma packs reds in pairs and blues to congestion [x]; sigma*
// levels every resource at lambda x + (1-lambda)[x].
inline GeneratedInstance gen_identical_weighted(double x, int m, double eps,
                                                const LatencyFunction& f,
                                                std::optional<double> lambda_override = {},
                                                const Caps& caps = Caps::from_env()) {
    if (!(x > 0.0)) throw std::invalid_argument("gen_identical_weighted: x > 0");
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("gen_identical_weighted: m even >= 2");
    detail::require_semi_convex(f, 2 * x);
    auto [lam_star, gstar] = identical_lambda_star(eps, f, x);
    (void)gstar;
    double lam_target = lambda_override.value_or(lam_star);
    int h = static_cast<int>(std::ceil(lam_target * m - 1e-12));
    if (h < 1) h = 1;
    double bx = bracket_threshold(f, eps, x);
    double lam = static_cast<double>(h) / m;
    double opt = lam * x + (1 - lam) * bx;
    if (h > m / 2)
        throw std::invalid_argument("gen_identical_weighted: h(m) > m/2 (lambda too large)");
    if (opt - x / 2 < -1e-12)
        throw std::invalid_argument("gen_identical_weighted: eps-condition fails (opt < x/2)");
    double dark_w = std::max(0.0, opt - x / 2);

    // Subdivision 1: m-h intervals of [x]; Subdivision 2: 2h of (opt - x/2)
    // then m-2h of opt. Their overlap defines the blue players.
    double L = (m - h) * bx;
    double L2 = 2 * h * dark_w + (m - 2 * h) * opt;
    if (std::abs(L - L2) > 1e-9 * std::max(1.0, L))
        throw std::logic_error("gen_identical_weighted: subdivision weight mismatch");
    struct Blue {
        double w;
        int idx1, idx2;
    };
    std::vector<Blue> blues;
    {
        std::vector<double> cuts;
        for (int j = 1; j < m - h; ++j) cuts.push_back(j * bx);
        double acc = 0.0;
        for (int j = 0; j < 2 * h; ++j) {
            acc += dark_w;
            cuts.push_back(acc);
        }
        for (int j = 0; j < m - 2 * h - 1; ++j) {
            acc += opt;
            cuts.push_back(acc);
        }
        cuts.push_back(L);
        std::sort(cuts.begin(), cuts.end());
        double prev = 0.0;
        double tol = 1e-12 * std::max(1.0, L);
        for (double c : cuts) {
            if (c - prev > tol) {
                double mid = 0.5 * (prev + c);
                int i1 = std::min(m - h - 1, static_cast<int>(mid / bx));
                int i2;
                if (mid < 2 * h * dark_w)
                    i2 = dark_w > 0 ? static_cast<int>(mid / dark_w) : 0;
                else
                    i2 = 2 * h + static_cast<int>((mid - 2 * h * dark_w) / opt);
                i2 = std::min(m - 1, i2);
                blues.push_back({c - prev, i1, i2});
            }
            prev = std::max(prev, c);
        }
    }

    auto game = std::make_shared<CongestionGame>();
    for (int e = 0; e < m; ++e) game->add_resource(f);
    std::int64_t nplayers = 2 * h + static_cast<std::int64_t>(blues.size());
    if (nplayers * m > caps.max_players)
        throw cap_exceeded("gen_identical_weighted: strategy arena exceeds cap");
    std::vector<std::int32_t> canon, opt_choice;
    auto add_symmetric_player = [&](double weight) {
        game->begin_player(weight);
        for (int e = 0; e < m; ++e)
            game->add_singleton_strategy(static_cast<ResourceId>(e));
    };
    for (int r = 0; r < 2 * h; ++r) {
        add_symmetric_player(x / 2);
        canon.push_back(r / 2);     // reds in pairs on the first h resources
        opt_choice.push_back(r);    // one red on each of the first 2h resources
    }
    for (const auto& b : blues) {
        add_symmetric_player(b.w);
        canon.push_back(h + b.idx1);
        opt_choice.push_back(b.idx2);
    }

    GeneratedInstance inst;
    inst.family = Family::identical_weighted;
    inst.epsilon = eps;
    inst.game = game;
    inst.canonical_profile = StrategyProfile(*game);
    inst.optimal_profile = StrategyProfile(*game);
    for (PlayerId i = 0; i < game->num_players(); ++i) {
        inst.canonical_profile.set_choice(i, canon[i]);
        inst.optimal_profile.set_choice(i, opt_choice[i]);
    }

    // congestion targets are exact by construction
    for (int e = 0; e < m; ++e) {
        double want = (e < h) ? x : bx;
        if (std::abs(inst.canonical_profile.congestion(static_cast<ResourceId>(e)) - want) >
            1e-9 * std::max(1.0, want))
            throw std::logic_error("gen_identical_weighted: sigma congestion mismatch");
        if (std::abs(inst.optimal_profile.congestion(static_cast<ResourceId>(e)) - opt) >
            1e-9 * std::max(1.0, opt))
            throw std::logic_error("gen_identical_weighted: sigma* congestion mismatch");
    }

    inst.cf_sum_sigma = h * x * f.eval(x) + (m - h) * bx * f.eval(bx);
    inst.cf_sum_opt = m * opt * f.eval(opt);
    inst.closed_form_ratio.finite = gamma_identical(eps, f, x, lam);
    inst.closed_form_ratio.limit = gamma_identical(eps, f, x, lam_star);
    gendetail::check_sums(inst);
    auto rep = check_equilibrium(*game, inst.canonical_profile, eps);
    inst.checks.equilibrium = rep.is_equilibrium;
    inst.checks.equilibrium_worst_ratio = rep.worst_ratio;
    return inst;
}

// ---------------------------------------------------------------------------
// Nested-set identical-resources walk family: E_0 > E_1 > ... with
// (|E_{i-1}| - |E_i|) o_i = |E_i|; type-i players choose within E_{i-1}.

// The family's equilibrium-to-reference ratio by direct summation over
// relative set sizes (e_0 = 1).
struct IdenticalWalkRatio {
    double ratio;
    double numerator;
    double denominator;
};

inline IdenticalWalkRatio identical_walk_ratio_analytic(
    std::int64_t n, const std::function<std::int64_t(std::int64_t)>& o_of,
    const LatencyFunction& f) {
    if (n < 1) throw std::invalid_argument("identical_walk_ratio_analytic: n >= 1");
    double e = 1.0;
    double num = 0.0, den = 0.0, cnum = 0.0, cden = 0.0;  // Kahan-compensated
    double f_prev = f.eval(0.0);
    std::int64_t o_prev = -1;
    double fo = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) {
        std::int64_t o = o_of(i);
        if (o < 1 || (i == 1 && o != 1) || o < o_prev)
            throw std::invalid_argument("identical_walk_ratio_analytic: o_i must be "
                                        "non-decreasing with o_1 = 1");
        if (o != o_prev) {
            fo = f.eval(static_cast<double>(o));
            o_prev = o;
        }
        double e_next = e * o / (o + 1);
        double dterm = (e - e_next) * o * fo;
        double y = dterm - cden, t = den + y;
        cden = (t - den) - y;
        den = t;
        double fi = f.eval(static_cast<double>(i));
        // Abel form: sum_i e_i (i f(i) - (i-1) f(i-1)) with |E_{n+1}| = 0
        double nterm = e_next * (i * fi - (i - 1) * f_prev);
        y = nterm - cnum;
        t = num + y;
        cnum = (t - num) - y;
        num = t;
        f_prev = fi;
        e = e_next;
    }
    return {num / den, num, den};
}

// Drifting integer sequence behind the 4.0009 benchmark bound.
inline std::int64_t benchmark_o_sequence(std::int64_t i) {
    return static_cast<std::int64_t>(std::floor(
        44411e-5 * static_cast<double>(i) + 1.0 + std::floor(std::sqrt(static_cast<double>(i)) / 7.0)));
}

inline GeneratedInstance gen_identical_unweighted_walk(int n, const std::vector<int>& o_seq,
                                                       const LatencyFunction& f,
                                                       const Caps& caps = Caps::from_env()) {
    if (n < 1 || static_cast<int>(o_seq.size()) != n)
        throw std::invalid_argument("gen_identical_unweighted_walk: need o_1..o_n");
    if (o_seq[0] != 1) throw std::invalid_argument("o_1 must be 1");
    for (int i = 1; i < n; ++i)
        if (o_seq[i] < o_seq[i - 1])
            throw std::invalid_argument("o sequence must be non-decreasing");

    // minimal |E_0| making every |E_i| integral
    std::int64_t num = 1, den = 1, lcm = 1;
    for (int i = 0; i < n; ++i) {
        num *= o_seq[i];
        den *= o_seq[i] + 1;
        std::int64_t g = std::gcd(num, den);
        num /= g;
        den /= g;
        lcm = std::lcm(lcm, den);
        if (lcm > caps.max_e0)
            throw cap_exceeded("gen_identical_unweighted_walk: |E_0| scale exceeds cap; "
                               "use the analytic representation");
    }
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(n) + 1);
    sizes[0] = lcm;
    for (int i = 1; i <= n; ++i) {
        std::int64_t t = sizes[static_cast<std::size_t>(i - 1)] * o_seq[i - 1];
        if (t % (o_seq[i - 1] + 1) != 0)
            throw std::logic_error("gen_identical_unweighted_walk: size not integral");
        sizes[static_cast<std::size_t>(i)] = t / (o_seq[i - 1] + 1);
    }

    auto game = std::make_shared<CongestionGame>();
    for (std::int64_t e = 0; e < sizes[0]; ++e) game->add_resource(f);
    std::vector<std::int32_t> canon, opt_choice;
    for (int i = 1; i <= n; ++i) {
        std::int64_t ei = sizes[static_cast<std::size_t>(i)];
        std::int64_t eprev = sizes[static_cast<std::size_t>(i - 1)];
        for (std::int64_t j = 0; j < ei; ++j) {
            game->begin_player(1.0);
            for (std::int64_t e = 0; e < eprev; ++e)
                game->add_singleton_strategy(static_cast<ResourceId>(e));
            canon.push_back(static_cast<std::int32_t>(j));  // distinct resources of E_i
            opt_choice.push_back(static_cast<std::int32_t>(ei + j / o_seq[i - 1]));
        }
    }

    GeneratedInstance inst;
    inst.family = Family::identical_unweighted_walk;
    inst.epsilon = 0.0;
    inst.mode = WalkMode::selfish;
    inst.game = game;
    inst.canonical_profile = StrategyProfile(*game);
    inst.optimal_profile = StrategyProfile(*game);
    for (PlayerId i = 0; i < game->num_players(); ++i) {
        inst.canonical_profile.set_choice(i, canon[i]);
        inst.optimal_profile.set_choice(i, opt_choice[i]);
    }
    auto order = std::make_optional<std::vector<PlayerId>>(game->num_players());
    std::iota(order->begin(), order->end(), 0u);  // types in non-decreasing order
    inst.walk_order = std::move(order);
    inst.prescribed_choices = canon;

    auto analytic = identical_walk_ratio_analytic(
        n, [&](std::int64_t i) { return static_cast<std::int64_t>(o_seq[static_cast<std::size_t>(i - 1)]); }, f);
    inst.cf_sum_sigma = analytic.numerator * sizes[0];
    inst.cf_sum_opt = analytic.denominator * sizes[0];
    inst.closed_form_ratio.finite = analytic.ratio;
    gendetail::check_sums(inst);
    // valid as an exact one-round walk for selfish and cooperative players
    gendetail::check_walk(inst);
    if (inst.checks.walk_valid.value_or(false)) {
        auto saved = inst.mode;
        inst.mode = WalkMode::cooperative;
        auto keep = inst.checks;
        gendetail::check_walk(inst);
        inst.checks.walk_valid = keep.walk_valid.value_or(false) &&
                                 inst.checks.walk_valid.value_or(false);
        inst.checks.walk_reproduces = keep.walk_reproduces.value_or(false) &&
                                      inst.checks.walk_reproduces.value_or(false);
        inst.checks.max_step_eq_dev =
            std::max(keep.max_step_eq_dev, inst.checks.max_step_eq_dev);
        inst.mode = saved;
    }
    return inst;
}

}  // namespace poa
