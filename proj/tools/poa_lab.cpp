// poa-lab: reproduce the efficiency-bound tables, generate lower-bound
// instances, verify them, and run walks / brute-force baselines.
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "poa/bounds.hpp"
#include "poa/caps.hpp"
#include "poa/dynamics.hpp"
#include "poa/generators.hpp"
#include "poa/identical.hpp"
#include "poa/io.hpp"
#include "poa/reproduce.hpp"

namespace {

using namespace poa;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 2;
constexpr int kExitInputError = 3;

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

LatencyFunction parse_latency(const std::string& poly_coeffs, int monomial_d) {
    if (!poly_coeffs.empty()) {
        std::vector<double> c;
        std::stringstream ss(poly_coeffs);
        std::string item;
        while (std::getline(ss, item, ',')) c.push_back(std::stod(item));
        return LatencyFunction::polynomial(c);
    }
    return LatencyFunction::monomial(monomial_d);
}

WitnessTuple auto_witness(Mode mode, MetricKind kind, double eps, int d) {
    if (mode == Mode::weighted)
        return WitnessTuple::case_1(poly_phi(kind, eps, d), 1.0, LatencyFunction::monomial(d));
    return unweighted_closed_form(kind, eps, d).witness;
}

int cmd_reproduce(const std::string& table, bool as_json) {
    ReproResult r;
    if (table == "weighted") r = reproduce_weighted();
    else if (table == "unweighted") r = reproduce_unweighted();
    else if (table == "identical") r = reproduce_identical();
    else {
        std::cerr << "unknown table: " << table << "\n";
        return kExitInputError;
    }
    if (as_json) {
        json rows = json::array();
        for (const auto& row : r.rows) {
            json cells = json::array();
            for (const auto& c : row.cells)
                cells.push_back({{"printed", c.printed},
                                 {"computed", c.computed},
                                 {"match", c.match},
                                 {"lower_bound", c.lower_bound}});
            rows.push_back({{"d", row.d}, {"cells", cells}, {"extra", row.extra}});
        }
        std::cout << json{{"table", r.table}, {"rows", rows}, {"all_match", r.all_match}}.dump(1)
                  << "\n";
    } else {
        std::cout << to_csv(r);
    }
    return r.all_match ? kExitOk : kExitMismatch;
}

int cmd_bounds(const std::string& mode_s, const std::string& metric_s, double eps, int dlo,
               int dhi, const std::string& witness_out, bool as_json) {
    Mode mode = (mode_s == "weighted") ? Mode::weighted : Mode::unweighted;
    MetricKind kind = metric_from_name(metric_s);
    json jrows = json::array();
    if (!as_json) std::cout << "metric,eps,d,value,witness\n";
    for (int d = dlo; d <= dhi; ++d) {
        auto gb = gamma_bound(mode, {kind, eps}, LatencyClass::poly(d));
        json w = to_json(gb.witness);
        if (as_json) {
            jrows.push_back({{"metric", metric_s},
                             {"eps", eps},
                             {"d", d},
                             {"value", gb.value},
                             {"x", gb.x},
                             {"witness", w},
                             {"witness_value", gb.witness_value},
                             {"witness_is_lower_bound_only", gb.lower_bound_only}});
        } else {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10g", gb.value);
            std::cout << metric_s << "," << eps << "," << d << "," << buf << ",\""
                      << w.dump() << "\"\n";
        }
        if (!witness_out.empty() && d == dhi) write_json_file(witness_out, w);
    }
    if (as_json) std::cout << jrows.dump(1) << "\n";
    return kExitOk;
}

struct GenArgs {
    std::string family, out, witness_file, poly;
    std::string metric = "poa";
    std::string mode = "selfish";
    int s = 2, n = 2, d = 1, m = 16;
    double eps = 0.0, x = 2.0;
    double lambda = -1.0;
    bool symmetric = false;
    std::string oseq;
    int walk_n = 3;
};

int cmd_gen(const GenArgs& a) {
    MetricKind kind = metric_from_name(a.metric);
    WalkMode wmode = (a.mode == "cooperative") ? WalkMode::cooperative : WalkMode::selfish;
    std::optional<GeneratedInstance> inst;
    if (a.family == "weighted-tree" || a.family == "weighted-walk-tree") {
        WitnessTuple w = a.witness_file.empty()
                             ? auto_witness(Mode::weighted, kind, a.eps, a.d)
                             : witness_from_json(read_json_file(a.witness_file));
        inst = (a.family == "weighted-tree")
                   ? gen_weighted_tree(a.s, a.n, w, a.eps, a.symmetric)
                   : gen_weighted_walk_tree(a.s, a.n, w, a.eps, wmode);
    } else if (a.family == "unweighted-multipartite" ||
               a.family == "unweighted-walk-multipartite") {
        WitnessTuple w = a.witness_file.empty()
                             ? auto_witness(Mode::unweighted, kind, a.eps, a.d)
                             : witness_from_json(read_json_file(a.witness_file));
        inst = (a.family == "unweighted-multipartite")
                   ? gen_unweighted_multipartite(a.s, w, a.eps)
                   : gen_unweighted_walk_multipartite(a.s, w, a.eps, wmode);
    } else if (a.family == "identical-weighted") {
        auto f = parse_latency(a.poly, a.d);
        std::optional<double> lam;
        if (a.lambda >= 0.0) lam = a.lambda;
        inst = gen_identical_weighted(a.x, a.m, a.eps, f, lam);
    } else if (a.family == "identical-unweighted-walk") {
        auto f = parse_latency(a.poly, a.d);
        std::vector<int> o =
            a.oseq.empty() ? std::vector<int>{1, 1, 2} : parse_int_list(a.oseq);
        inst = gen_identical_unweighted_walk(static_cast<int>(o.size()), o, f);
    } else {
        std::cerr << "unknown family: " << a.family << "\n";
        return kExitInputError;
    }
    write_json_file(a.out, to_json(inst->g()));
    write_json_file(a.out + ".manifest.json", manifest_to_json(*inst));
    std::cerr << "wrote " << a.out << " (+ manifest); players=" << inst->g().num_players()
              << " resources=" << inst->g().num_resources() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& manifest_path, double eps) {
    auto game = game_from_json(read_json_file(instance_path));
    auto violations = game.validate();
    for (const auto& v : violations) std::cout << "invalid: " << v << "\n";
    if (!violations.empty()) return kExitMismatch;
    std::string mpath =
        manifest_path.empty() ? instance_path + ".manifest.json" : manifest_path;
    std::ifstream probe(mpath);
    if (!probe) {
        std::cout << "instance valid; no manifest found at " << mpath << "\n";
        (void)eps;
        return kExitOk;
    }
    auto issues = verify_manifest(game, read_json_file(mpath));
    for (const auto& i : issues) std::cout << "disagrees: " << i << "\n";
    std::cout << (issues.empty() ? "verified: all manifest checks re-derived\n"
                                 : "verification failed\n");
    return issues.empty() ? kExitOk : kExitMismatch;
}

int cmd_walk(const std::string& instance_path, const std::string& mode_s, double eps,
             const std::string& order_s, const std::string& prescribed_s,
             const std::string& tiebreak, const std::string& out, bool enumerate_orders) {
    auto game = game_from_json(read_json_file(instance_path));
    WalkMode mode = (mode_s == "cooperative") ? WalkMode::cooperative : WalkMode::selfish;
    if (enumerate_orders) {
        auto w = worst_order_walk(game, mode, eps);
        json jo{{"worst_ratio", w.ratio}, {"order", w.order}, {"optimum", w.optimum_value}};
        std::cout << jo.dump(1) << "\n";
        return kExitOk;
    }
    std::vector<PlayerId> order(game.num_players());
    std::iota(order.begin(), order.end(), 0u);
    if (!order_s.empty()) {
        auto v = parse_int_list(order_s);
        order.assign(v.begin(), v.end());
    }
    std::vector<std::int32_t> prescribed;
    WalkOptions wo;
    if (!prescribed_s.empty()) {
        if (tiebreak != "prescribed")
            std::cerr << "note: --prescribed implies --tiebreak prescribed\n";
        auto v = parse_int_list(prescribed_s);
        prescribed.assign(v.begin(), v.end());
        wo.prescribed = &prescribed;
    }
    try {
        auto tr = run_walk(game, order, mode, eps, wo);
        json jt = to_json(tr);
        jt["sum"] = social_cost(game, tr.final_profile);
        if (out.empty()) std::cout << jt.dump(1) << "\n";
        else write_json_file(out, jt);
        return kExitOk;
    } catch (const walk_prescription_error& e) {
        std::cerr << e.what() << "\n";
        return kExitMismatch;
    }
}

int cmd_poa_brute(const std::string& instance_path, double eps) {
    auto game = game_from_json(read_json_file(instance_path));
    auto we = worst_equilibrium(game, eps);
    json j{{"epsilon", eps}, {"optimum", we.optimum_value}};
    if (we.found) {
        j["poa"] = we.poa;
        j["worst_equilibrium"] = to_json(we.profile);
    } else {
        j["outcome"] = "no eps-approximate equilibrium exists";
    }
    std::cout << j.dump(1) << "\n";
    return kExitOk;
}

int cmd_converge(const std::string& family, const std::string& metric_s, int d, double eps,
                 const std::string& s_list, const std::string& n_list, bool long_run,
                 const std::string& witness_file) {
    MetricKind kind = metric_from_name(metric_s);
    std::optional<WitnessTuple> wfile;
    if (!witness_file.empty()) wfile = witness_from_json(read_json_file(witness_file));
    auto witness_for = [&](Mode mode) {
        return wfile ? *wfile : auto_witness(mode, kind, eps, d);
    };
    std::cout << "family,s,n,simulated_ratio,closed_form_ratio,limit\n";
    char buf[160];
    auto emit = [&](int s, long long n, double sim, double cf, double lim) {
        std::snprintf(buf, sizeof buf, "%s,%d,%lld,%.10g,%.10g,%.10g\n", family.c_str(), s, n,
                      sim, cf, lim);
        std::cout << buf;
    };
    if (family == "identical-unweighted-walk") {
        auto f = LatencyFunction::monomial(d);
        for (int n : parse_int_list(n_list.empty() ? "1000,10000,100000" : n_list)) {
            auto r = identical_walk_ratio_analytic(n, benchmark_o_sequence, f);
            emit(0, n, std::numeric_limits<double>::quiet_NaN(), r.ratio,
                 std::numeric_limits<double>::quiet_NaN());
        }
        if (long_run) {
            auto r = identical_walk_ratio_analytic(10'000'000'000'000LL, benchmark_o_sequence, f);
            emit(0, 10'000'000'000'000LL, std::numeric_limits<double>::quiet_NaN(), r.ratio,
                 std::numeric_limits<double>::quiet_NaN());
        }
        return kExitOk;
    }
    auto ss = parse_int_list(s_list.empty() ? "2,3,4" : s_list);
    auto ns = parse_int_list(n_list.empty() ? "2,4,8" : n_list);
    for (int s : ss) {
        for (int n : ns) {
            std::optional<GeneratedInstance> inst;
            if (family == "weighted-tree")
                inst = gen_weighted_tree(s, n, witness_for(Mode::weighted), eps);
            else if (family == "weighted-walk-tree")
                inst = gen_weighted_walk_tree(s, n, witness_for(Mode::weighted), eps,
                                              WalkMode::selfish);
            else if (family == "unweighted-multipartite")
                inst = gen_unweighted_multipartite(s, witness_for(Mode::unweighted), eps);
            else if (family == "unweighted-walk-multipartite")
                inst = gen_unweighted_walk_multipartite(s, witness_for(Mode::unweighted), eps,
                                                        WalkMode::selfish);
            else {
                std::cerr << "unknown family for converge: " << family << "\n";
                return kExitInputError;
            }
            double sim = inst->checks.sim_sum_sigma / inst->checks.sim_sum_opt;
            emit(s, n, sim, inst->closed_form_ratio.finite, inst->closed_form_ratio.limit);
            if (family == "unweighted-multipartite" ||
                family == "unweighted-walk-multipartite")
                break;  // no n parameter for the multipartite families
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"congestion/load-balancing game efficiency-bound laboratory"};
    app.require_subcommand(1);

    // reproduce
    std::string table;
    bool as_json = false;
    auto* rep = app.add_subcommand("reproduce", "reproduce a published table");
    rep->add_option("table", table, "weighted | unweighted | identical")->required();
    rep->add_flag("--json", as_json, "emit JSON instead of CSV");

    // bounds
    std::string mode_s = "weighted", metric_s = "poa", witness_out;
    double eps = 0.0;
    int dlo = 1, dhi = 1;
    auto* bnd = app.add_subcommand("bounds", "gamma bounds for polynomial classes");
    bnd->add_option("--mode", mode_s, "weighted | unweighted");
    bnd->add_option("--metric", metric_s, "poa | crs | crc");
    bnd->add_option("--eps", eps, "approximation level");
    bnd->add_option("--d", dlo, "degree (lower end)");
    bnd->add_option("--dmax", dhi, "degree (upper end; defaults to --d)");
    bnd->add_option("--witness-json", witness_out, "write the last witness here");
    bnd->add_flag("--json", as_json, "emit JSON rows");

    // gen
    GenArgs ga;
    auto* gen = app.add_subcommand("gen", "generate a lower-bound instance + manifest");
    gen->add_option("--family", ga.family,
                    "weighted-tree | weighted-walk-tree | unweighted-multipartite | "
                    "unweighted-walk-multipartite | identical-weighted | "
                    "identical-unweighted-walk")
        ->required();
    gen->add_option("--out", ga.out, "output instance path")->required();
    gen->add_option("--s", ga.s, "levels parameter");
    gen->add_option("--n", ga.n, "arity parameter");
    gen->add_option("--d", ga.d, "polynomial degree for auto witness / monomial latency");
    gen->add_option("--m", ga.m, "resource count (identical-weighted)");
    gen->add_option("--x", ga.x, "equilibrium congestion (identical-weighted)");
    gen->add_option("--lambda", ga.lambda, "lambda override (identical-weighted)");
    gen->add_option("--eps", ga.eps, "approximation level");
    gen->add_option("--metric", ga.metric, "metric for auto witness");
    gen->add_option("--mode", ga.mode, "selfish | cooperative (walk families)");
    gen->add_option("--witness", ga.witness_file, "witness JSON file");
    gen->add_option("--poly", ga.poly, "latency coefficients a0,a1,...");
    gen->add_option("--o-seq", ga.oseq, "o_1,o_2,... (identical-unweighted-walk)");
    gen->add_flag("--symmetric", ga.symmetric, "symmetric variant (weighted-tree)");

    // verify
    std::string instance_path, manifest_path;
    auto* ver = app.add_subcommand("verify", "re-derive the manifest checks of an instance");
    ver->add_option("instance", instance_path, "instance JSON")->required();
    ver->add_option("--manifest", manifest_path, "manifest path (default <instance>.manifest.json)");
    ver->add_option("--eps", eps, "approximation level (manifest value wins)");

    // walk
    std::string order_s, prescribed_s, tiebreak = "lowest-index", walk_out, wmode_s = "selfish";
    bool enumerate_orders = false;
    auto* wlk = app.add_subcommand("walk", "run a one-round walk on an instance");
    wlk->add_option("instance", instance_path, "instance JSON")->required();
    wlk->add_option("--mode", wmode_s, "selfish | cooperative");
    wlk->add_option("--eps", eps, "approximation level");
    wlk->add_option("--order", order_s, "comma-separated player order (default: by id)");
    wlk->add_option("--prescribed", prescribed_s, "per-player strategy indices");
    wlk->add_option("--tiebreak", tiebreak, "lowest-index | prescribed");
    wlk->add_option("--out", walk_out, "trace output path (default: stdout)");
    wlk->add_flag("--enumerate-orders", enumerate_orders, "worst ratio over all orders");

    // poa-brute
    auto* brute = app.add_subcommand("poa-brute", "exact PoA by enumeration");
    brute->add_option("instance", instance_path, "instance JSON")->required();
    brute->add_option("--eps", eps, "approximation level");

    // converge
    std::string family, s_list, n_list, witness_file;
    int conv_d = 1;
    bool long_run = false;
    auto* conv = app.add_subcommand("converge", "ratio convergence sweep for a family");
    conv->add_option("--family", family, "generator family")->required();
    conv->add_option("--metric", metric_s, "poa | crs | crc");
    conv->add_option("--d", conv_d, "polynomial degree");
    conv->add_option("--eps", eps, "approximation level");
    conv->add_option("--s-range", s_list, "comma-separated s values");
    conv->add_option("--n-range", n_list, "comma-separated n values");
    conv->add_option("--witness", witness_file, "witness JSON file (default: auto from metric/d)");
    conv->add_flag("--long", long_run,
                   "include the n = 10^13 run of the identical-walk family (hours)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rep->parsed()) return cmd_reproduce(table, as_json);
        if (bnd->parsed()) return cmd_bounds(mode_s, metric_s, eps, dlo, std::max(dlo, dhi),
                                             witness_out, as_json);
        if (gen->parsed()) return cmd_gen(ga);
        if (ver->parsed()) return cmd_verify(instance_path, manifest_path, eps);
        if (wlk->parsed())
            return cmd_walk(instance_path, wmode_s, eps, order_s, prescribed_s, tiebreak,
                            walk_out, enumerate_orders);
        if (brute->parsed()) return cmd_poa_brute(instance_path, eps);
        if (conv->parsed())
            return cmd_converge(family, metric_s, conv_d, eps, s_list, n_list, long_run,
                                witness_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
