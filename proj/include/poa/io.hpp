#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "poa/dynamics.hpp"
#include "poa/game.hpp"
#include "poa/generators.hpp"

namespace poa {

using nlohmann::json;

// {"kind":"poly","coeffs":[...]} or
// {"kind":"custom","name":...,"ordinate_scale":...,"abscissa_scale":...}
inline json to_json(const LatencyFunction& f) {
    if (f.is_polynomial()) return json{{"kind", "poly"}, {"coeffs", f.coefficients()}};
    json j{{"kind", "custom"}, {"name", f.custom_name()}};
    if (f.ordinate_scale() != 1.0) j["ordinate_scale"] = f.ordinate_scale();
    if (f.abscissa_scale() != 1.0) j["abscissa_scale"] = f.abscissa_scale();
    return j;
}

inline LatencyFunction latency_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "poly")
        return LatencyFunction::polynomial(j.at("coeffs").get<std::vector<double>>());
    if (kind != "custom") throw std::invalid_argument("latency json: unknown kind " + kind);
    auto f = LatencyFunction::custom(j.at("name").get<std::string>());
    if (j.contains("abscissa_scale")) f = f.scale_abscissa(j["abscissa_scale"].get<double>());
    if (j.contains("ordinate_scale")) f = f.scale_ordinate(j["ordinate_scale"].get<double>());
    return f;
}

inline json to_json(const CongestionGame& g) {
    json resources = json::array();
    for (ResourceId e = 0; e < g.num_resources(); ++e)
        resources.push_back({{"id", e}, {"latency", to_json(g.latency(e))}});
    json players = json::array();
    for (PlayerId i = 0; i < g.num_players(); ++i) {
        json strategies = json::array();
        for (int s = 0; s < g.strategy_count(i); ++s) {
            auto span = g.strategy(i, s);
            strategies.push_back(std::vector<ResourceId>(span.begin(), span.end()));
        }
        players.push_back({{"id", i}, {"weight", g.weight(i)}, {"strategies", strategies}});
    }
    return json{{"resources", resources}, {"players", players}};
}

inline CongestionGame game_from_json(const json& j) {
    CongestionGame g;
    const auto& res = j.at("resources");
    std::vector<LatencyFunction> lats(res.size(), LatencyFunction::monomial(1));
    for (const auto& r : res) {
        auto id = r.at("id").get<std::size_t>();
        if (id >= lats.size()) throw std::invalid_argument("game json: resource ids not dense");
        lats[id] = latency_from_json(r.at("latency"));
    }
    for (auto& f : lats) g.add_resource(std::move(f));
    const auto& pls = j.at("players");
    std::vector<const json*> ordered(pls.size(), nullptr);
    for (const auto& p : pls) {
        auto id = p.at("id").get<std::size_t>();
        if (id >= ordered.size() || ordered[id] != nullptr)
            throw std::invalid_argument("game json: player ids not dense");
        ordered[id] = &p;
    }
    for (const json* p : ordered) {
        g.begin_player(p->at("weight").get<double>());
        for (const auto& s : p->at("strategies"))
            g.add_strategy(s.get<std::vector<ResourceId>>());
    }
    return g;
}

// {"assignment":{"<pid>":index|null,...}}
inline json to_json(const StrategyProfile& p) {
    json a = json::object();
    for (PlayerId i = 0; i < p.game().num_players(); ++i) {
        if (p.assigned(i)) a[std::to_string(i)] = p.choice(i);
        else a[std::to_string(i)] = nullptr;
    }
    return json{{"assignment", a}};
}

inline StrategyProfile profile_from_json(const CongestionGame& g, const json& j) {
    StrategyProfile p(g);
    for (const auto& [key, val] : j.at("assignment").items()) {
        PlayerId i = static_cast<PlayerId>(std::stoul(key));
        if (i >= g.num_players()) throw std::invalid_argument("profile json: unknown player");
        if (!val.is_null()) p.set_choice(i, val.get<std::int32_t>());
    }
    return p;
}

inline json to_json(const WalkTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"player", s.player},
                         {"chosen", s.chosen},
                         {"greedy_min", s.greedy_min},
                         {"chosen_value", s.chosen_value}});
    return json{{"order", t.order},
                {"mode", walk_mode_name(t.mode)},
                {"epsilon", t.epsilon},
                {"steps", steps},
                {"max_rel_slack", t.max_rel_slack},
                {"final", to_json(t.final_profile)}};
}

inline json to_json(const WitnessTuple& w) {
    json j{{"case", w.case2 ? 2 : 1},
           {"k1", w.k1},
           {"o1", w.o1},
           {"f1", to_json(w.f1)}};
    if (w.case2) {
        j["k2"] = w.k2;
        j["o2"] = w.o2;
        j["f2"] = to_json(w.f2);
        j["alpha1"] = w.alpha1;
        j["alpha2"] = w.alpha2;
    }
    return j;
}

inline WitnessTuple witness_from_json(const json& j) {
    int c = j.at("case").get<int>();
    if (c == 1)
        return WitnessTuple::case_1(j.at("k1").get<double>(), j.at("o1").get<double>(),
                                    latency_from_json(j.at("f1")));
    return WitnessTuple::case_2(j.at("k1").get<double>(), j.at("k2").get<double>(),
                                j.at("o1").get<double>(), j.at("o2").get<double>(),
                                latency_from_json(j.at("f1")), latency_from_json(j.at("f2")),
                                j.value("alpha1", 0.0), j.value("alpha2", 0.0));
}

// Sidecar manifest: everything needed to re-derive the generator checks.
inline json manifest_to_json(const GeneratedInstance& inst) {
    json j{{"family", family_name(inst.family)},
           {"epsilon", inst.epsilon},
           {"canonical_profile", to_json(inst.canonical_profile)},
           {"optimal_profile", to_json(inst.optimal_profile)},
           {"closed_form",
            {{"sum_sigma", inst.cf_sum_sigma},
             {"sum_opt", inst.cf_sum_opt},
             {"ratio_finite", inst.closed_form_ratio.finite}}},
           {"checks",
            {{"sim_sum_sigma", inst.checks.sim_sum_sigma},
             {"sim_sum_opt", inst.checks.sim_sum_opt},
             {"closed_form_match", inst.checks.closed_form_match},
             {"max_step_eq_dev", inst.checks.max_step_eq_dev}}}};
    if (std::isfinite(inst.closed_form_ratio.limit))
        j["closed_form"]["ratio_limit"] = inst.closed_form_ratio.limit;
    if (inst.mode) j["mode"] = walk_mode_name(*inst.mode);
    if (inst.checks.equilibrium) {
        j["checks"]["equilibrium"] = *inst.checks.equilibrium;
        j["checks"]["equilibrium_worst_ratio"] = inst.checks.equilibrium_worst_ratio;
    }
    if (inst.checks.walk_valid) j["checks"]["walk_valid"] = *inst.checks.walk_valid;
    if (inst.checks.walk_reproduces)
        j["checks"]["walk_reproduces"] = *inst.checks.walk_reproduces;
    if (inst.walk_order) j["walk_order"] = *inst.walk_order;
    if (inst.prescribed_choices) j["prescribed_choices"] = *inst.prescribed_choices;
    return j;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(1, '\t') << "\n";
}

// Re-derives every manifest check against the instance file; returns a list
// of disagreements (empty = verified).
inline std::vector<std::string> verify_manifest(const CongestionGame& g, const json& manifest) {
    std::vector<std::string> issues;
    auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
    };
    auto canonical = profile_from_json(g, manifest.at("canonical_profile"));
    auto optimal = profile_from_json(g, manifest.at("optimal_profile"));
    double eps = manifest.at("epsilon").get<double>();
    double sum_sigma = social_cost(g, canonical);
    double sum_opt = social_cost(g, optimal);
    const auto& cf = manifest.at("closed_form");
    if (rel(sum_sigma, cf.at("sum_sigma").get<double>()) > 1e-6)
        issues.push_back("SUM(sigma) disagrees with closed form");
    if (rel(sum_opt, cf.at("sum_opt").get<double>()) > 1e-6)
        issues.push_back("SUM(sigma*) disagrees with closed form");
    const auto& checks = manifest.at("checks");
    if (checks.contains("equilibrium")) {
        auto rep = check_equilibrium(g, canonical, eps);
        if (rep.is_equilibrium != checks.at("equilibrium").get<bool>())
            issues.push_back("equilibrium check disagrees with manifest");
    }
    if (manifest.contains("walk_order")) {
        auto order = manifest.at("walk_order").get<std::vector<PlayerId>>();
        auto prescribed =
            manifest.at("prescribed_choices").get<std::vector<std::int32_t>>();
        WalkMode mode = manifest.value("mode", std::string("selfish")) == "cooperative"
                            ? WalkMode::cooperative
                            : WalkMode::selfish;
        WalkOptions wo;
        wo.prescribed = &prescribed;
        wo.record_steps = false;
        bool valid = true, reproduces = false;
        try {
            auto tr = run_walk(g, order, mode, eps, wo);
            reproduces = tr.final_profile == canonical;
        } catch (const walk_prescription_error&) {
            valid = false;
        }
        if (checks.contains("walk_valid") && valid != checks.at("walk_valid").get<bool>())
            issues.push_back("walk validity disagrees with manifest");
        if (checks.contains("walk_reproduces") &&
            reproduces != checks.at("walk_reproduces").get<bool>())
            issues.push_back("walk reproduction disagrees with manifest");
    }
    return issues;
}

}  // namespace poa
