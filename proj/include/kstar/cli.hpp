// cli.hpp
// Command-line front end. run_cli is a pure function of its arguments and the
// two output streams so the whole surface is testable in-process. Structured
// output uses sorted keys and floats rounded to 12 significant digits, making
// repeated runs byte-identical; human output is key: value lines with the
// resolved configuration echoed as '#' comments. A search witness in human
// format is therefore itself a valid point-set file.

#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kstar/bounds.hpp"
#include "kstar/common.hpp"
#include "kstar/detector.hpp"
#include "kstar/field_space.hpp"
#include "kstar/io.hpp"
#include "kstar/search.hpp"
#include "kstar/systems.hpp"

namespace kstar {
namespace cli {

using nlohmann::json;

inline std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline json jnum(double x) { return round_sig(x, 12); }

// "a/b" resolved as an exact rational before the division; plain floats pass
// through stod.
inline double parse_rational(const std::string& s, const std::string& field) {
    try {
        std::size_t used = 0;
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing characters");
            return v;
        }
        long long num = std::stoll(s.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument("bad numerator");
        std::string den_str = s.substr(slash + 1);
        long long den = std::stoll(den_str, &used);
        if (used != den_str.size()) throw std::invalid_argument("bad denominator");
        if (den == 0) throw std::invalid_argument("zero denominator");
        return static_cast<double>(num) / static_cast<double>(den);
    } catch (const std::exception&) {
        throw std::invalid_argument(field + ": cannot parse '" + s + "' as a/b or float");
    }
}

struct Options {
    std::uint32_t p = 3;
    int n = 1;
    int k = 1;
    std::string family = "star";
    std::string system_file;
    std::string set_file;
    std::string rows_file;
    std::string format = "human";
    std::string output;
    int threads = 1;
    std::string alpha_raw = "1/3";
    int m = 1;
    int h = 2;
    int pos_i = 1;
    int pos_j = 3;
    std::optional<std::uint64_t> target;
    bool heuristic = false;
    std::uint64_t seed = 1;
    std::uint64_t iterations = 200;
    std::uint64_t node_limit = 50'000'000;
    double time_limit = 60.0;
};

inline ShapeSystem build_system(const Options& opt) {
    if (!opt.system_file.empty()) return io::read_system_file(opt.system_file, opt.p);
    if (opt.family == "star") return ShapeSystem::star(opt.k, opt.p);
    if (opt.family == "relaxed-star") return ShapeSystem::relaxed_star(opt.k, opt.p);
    if (opt.family == "w") return ShapeSystem::w_shape(opt.p);
    if (opt.family == "mixed") return ShapeSystem::mixed_star(opt.p);
    throw std::invalid_argument("family: unknown system family '" + opt.family + "'");
}

inline void config_common(const Options& opt, json& cfg, std::string& human) {
    cfg["format"] = opt.format;
    cfg["threads"] = opt.threads;
    if (!opt.output.empty()) cfg["output"] = opt.output;
    human += "# threads: " + std::to_string(opt.threads) + "\n";
}

inline void config_space(const Options& opt, json& cfg, std::string& human) {
    cfg["p"] = opt.p;
    cfg["n"] = opt.n;
    human += "# p: " + std::to_string(opt.p) + "\n# n: " + std::to_string(opt.n) + "\n";
}

inline void config_system(const Options& opt, const ShapeSystem& sys, json& cfg,
                          std::string& human) {
    if (!opt.system_file.empty()) {
        cfg["system_file"] = opt.system_file;
        human += "# system: " + opt.system_file + "\n";
    } else {
        cfg["family"] = opt.family;
        human += "# family: " + opt.family + "\n";
        if (sys.is_star_family()) {
            cfg["k"] = opt.k;
            human += "# k: " + std::to_string(opt.k) + "\n";
        }
    }
    cfg["system_name"] = sys.name();
}

inline std::string coords_str(const FieldSpace& space, Point x) {
    auto coords = space.decode(x);
    std::string s;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(coords[i]);
    }
    return s;
}

inline json point_json(const FieldSpace& space, Point x) {
    json arr = json::array();
    for (auto c : space.decode(x)) arr.push_back(c);
    return arr;
}

inline json tuple_json(const FieldSpace& space, std::span<const Point> tuple) {
    json arr = json::array();
    for (Point x : tuple) arr.push_back(point_json(space, x));
    return arr;
}

inline std::string tuple_str(const FieldSpace& space, std::span<const Point> tuple) {
    std::string s;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) s += ' ';
        s += coords_str(space, tuple[i]);
    }
    return s;
}

inline void deliver(const Options& opt, const json& doc, const std::string& human,
                    std::ostream& out) {
    std::string text = opt.format == "json" ? doc.dump(2) + "\n" : human;
    if (!opt.output.empty()) {
        std::ofstream f(opt.output);
        if (!f) throw std::invalid_argument("output: cannot open '" + opt.output + "'");
        f << text;
    } else {
        out << text;
    }
}

inline int cmd_lambda(const Options& opt, std::ostream& out) {
    const double alpha = parse_rational(opt.alpha_raw, "alpha");
    const LambdaResult res = lambda({opt.m, alpha, opt.h});
    json doc;
    std::string human = "# kstar lambda\n";
    doc["command"] = "lambda";
    json cfg;
    cfg["m"] = opt.m;
    cfg["alpha"] = jnum(alpha);
    cfg["alpha_raw"] = opt.alpha_raw;
    cfg["h"] = opt.h;
    human += "# m: " + std::to_string(opt.m) + "\n# alpha: " + opt.alpha_raw + " = " +
             fmt_g(alpha) + "\n# h: " + std::to_string(opt.h) + "\n";
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    doc["result"] = {{"u_star", jnum(res.u_star)}, {"value", jnum(res.value)},
                     {"interior", res.interior}};
    human += "u_star: " + fmt_g(res.u_star) + "\nvalue: " + fmt_g(res.value) +
             "\ninterior: " + (res.interior ? "true" : "false") + "\n";
    deliver(opt, doc, human, out);
    return 0;
}

inline int cmd_bound(const Options& opt, std::ostream& out) {
    require_odd_prime(opt.p, "p");
    if (opt.n < 1) throw std::invalid_argument("n: must be >= 1");
    if (opt.k < 1) throw std::invalid_argument("k: must be >= 1");
    const LambdaResult lam = lambda({1, 1.0 / 3.0, static_cast<int>(opt.p) - 1});
    const double spade = std::pow(lam.value, opt.n);
    const double club = static_cast<double>(opt.k) * static_cast<double>(opt.k) * spade;
    const WBoundResult w = w_constant(opt.p);
    const double wb = w.bound(opt.n);
    json doc;
    std::string human = "# kstar bound\n";
    doc["command"] = "bound";
    json cfg;
    config_space(opt, cfg, human);
    cfg["k"] = opt.k;
    human += "# k: " + std::to_string(opt.k) + "\n";
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    doc["result"] = {{"lambda", jnum(lam.value)},   {"u_star", jnum(lam.u_star)},
                     {"interior", lam.interior},    {"spade", jnum(spade)},
                     {"club", jnum(club)},          {"w_constant", jnum(w.value)},
                     {"w_alpha", jnum(w.alpha_star)}, {"w_beta", jnum(w.beta_star)},
                     {"w_bound", jnum(wb)}};
    human += "lambda: " + fmt_g(lam.value) + "\nu_star: " + fmt_g(lam.u_star) + "\nspade: " +
             fmt_g(spade) + "\nclub: " + fmt_g(club) + "\nw_constant: " + fmt_g(w.value) +
             "\nw_bound: " + fmt_g(wb) + "\n";
    deliver(opt, doc, human, out);
    return 0;
}

inline int cmd_check(const Options& opt, std::ostream& out) {
    FieldSpace space(opt.p, opt.n);
    ShapeSystem sys = build_system(opt);
    PointSet A = io::read_point_set_file(opt.set_file, space);
    auto shape = find_shape(space, A, sys);
    json doc;
    std::string human = "# kstar check\n";
    doc["command"] = "check";
    json cfg;
    config_space(opt, cfg, human);
    config_system(opt, sys, cfg, human);
    cfg["set"] = opt.set_file;
    human += "# set: " + opt.set_file + "\n";
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    json result;
    result["set_size"] = A.count();
    result["shape_free"] = !shape.has_value();
    human += "set_size: " + std::to_string(A.count()) + "\n";
    human += std::string("shape-free: ") + (shape ? "false" : "true") + "\n";
    if (shape) {
        result["shape"] = tuple_json(space, *shape);
        human += "shape: " + tuple_str(space, *shape) + "\n";
    }
    doc["result"] = result;
    deliver(opt, doc, human, out);
    return 0;
}

inline int cmd_enumerate(const Options& opt, std::ostream& out) {
    FieldSpace space(opt.p, opt.n);
    ShapeSystem sys = build_system(opt);
    const bool full = opt.set_file.empty();
    PointSet A = full ? PointSet::full(space) : io::read_point_set_file(opt.set_file, space);
    const std::uint64_t count = count_semishapes(space, A, sys, EnumBudget{opt.node_limit});
    json doc;
    std::string human = "# kstar enumerate\n";
    doc["command"] = "enumerate";
    json cfg;
    config_space(opt, cfg, human);
    config_system(opt, sys, cfg, human);
    if (!full) {
        cfg["set"] = opt.set_file;
        human += "# set: " + opt.set_file + "\n";
    }
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    json result;
    result["set_size"] = A.count();
    result["full_space"] = full;
    result["semishape_count"] = count;
    human += "set_size: " + std::to_string(A.count()) + "\nsemishape_count: " +
             std::to_string(count) + "\n";
    if (full) {
        const std::uint64_t oracle = full_space_semishape_count(space, sys);
        result["rank_nullity_count"] = oracle;
        human += "rank_nullity_count: " + std::to_string(oracle) + "\n";
        if (oracle != count)
            throw InvariantViolation("full-space count disagrees with rank-nullity value");
    }
    doc["result"] = result;
    deliver(opt, doc, human, out);
    return 0;
}

inline int cmd_pack(const Options& opt, std::ostream& out) {
    FieldSpace space(opt.p, opt.n);
    ShapeSystem sys = build_system(opt);
    PointSet A = io::read_point_set_file(opt.set_file, space);
    DisjointFamily fam =
        greedy_disjoint_pack(space, A, sys, opt.target, EnumBudget{opt.node_limit});
    json doc;
    std::string human = "# kstar pack\n";
    doc["command"] = "pack";
    json cfg;
    config_space(opt, cfg, human);
    config_system(opt, sys, cfg, human);
    cfg["set"] = opt.set_file;
    human += "# set: " + opt.set_file + "\n";
    if (opt.target) {
        cfg["target"] = *opt.target;
        human += "# target: " + std::to_string(*opt.target) + "\n";
    }
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    json result;
    result["family_size"] = fam.shapes.size();
    result["maximal"] = fam.maximal;
    result["covered_size"] = fam.covered.count();
    json shapes = json::array();
    for (const auto& s : fam.shapes) shapes.push_back(tuple_json(space, s));
    result["shapes"] = shapes;
    human += "family_size: " + std::to_string(fam.shapes.size()) + "\nmaximal: " +
             (fam.maximal ? "true" : "false") + "\ncovered_size: " +
             std::to_string(fam.covered.count()) + "\n";
    for (std::size_t i = 0; i < fam.shapes.size(); ++i)
        human += "shape_" + std::to_string(i + 1) + ": " + tuple_str(space, fam.shapes[i]) + "\n";
    doc["result"] = result;
    deliver(opt, doc, human, out);
    return 0;
}

inline int cmd_extend(const Options& opt, std::ostream& out) {
    FieldSpace space(opt.p, opt.n);
    ShapeSystem sys = build_system(opt);
    MulticoloredFamily M;
    M.num_vars = sys.num_vars();
    M.rows = io::read_tuples_file(opt.rows_file, space, sys.num_vars());
    ExtendabilityRelation rel = extendable_pairs(space, sys, M, opt.pos_i, opt.pos_j,
                                                 EnumBudget{opt.node_limit});
    json doc;
    std::string human = "# kstar extend\n";
    doc["command"] = "extend";
    json cfg;
    config_space(opt, cfg, human);
    config_system(opt, sys, cfg, human);
    cfg["rows"] = opt.rows_file;
    cfg["i"] = opt.pos_i;
    cfg["j"] = opt.pos_j;
    human += "# rows: " + opt.rows_file + "\n# i: " + std::to_string(opt.pos_i) +
             "\n# j: " + std::to_string(opt.pos_j) + "\n";
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    json result;
    result["pair_count"] = rel.pairs.size();
    json pairs = json::array();
    for (const auto& [x, y] : rel.pairs)
        pairs.push_back(json::array({point_json(space, x), point_json(space, y)}));
    result["pairs"] = pairs;
    human += "pair_count: " + std::to_string(rel.pairs.size()) + "\n";
    for (std::size_t i = 0; i < rel.pairs.size(); ++i)
        human += "pair_" + std::to_string(i + 1) + ": " +
                 coords_str(space, rel.pairs[i].first) + " " +
                 coords_str(space, rel.pairs[i].second) + "\n";
    if (opt.pos_i == 1 && opt.pos_j == sys.num_vars()) {
        const bool inj = lemma_injectivity_check(rel);
        result["injectivity"] = inj;
        human += std::string("injectivity: ") + (inj ? "true" : "false") + "\n";
    }
    doc["result"] = result;
    deliver(opt, doc, human, out);
    return 0;
}

inline int cmd_multicolor(const Options& opt, std::ostream& out) {
    FieldSpace space(opt.p, opt.n);
    ShapeSystem sys = build_system(opt);
    MulticoloredFamily M;
    M.num_vars = sys.num_vars();
    M.rows = io::read_tuples_file(opt.rows_file, space, sys.num_vars());
    const bool ok = multicolor_check(space, sys, M, EnumBudget{opt.node_limit});
    json doc;
    std::string human = "# kstar multicolor\n";
    doc["command"] = "multicolor";
    json cfg;
    config_space(opt, cfg, human);
    config_system(opt, sys, cfg, human);
    cfg["rows"] = opt.rows_file;
    human += "# rows: " + opt.rows_file + "\n";
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    doc["result"] = {{"rows", M.rows.size()}, {"multicolored", ok}};
    human += "rows: " + std::to_string(M.rows.size()) + "\nmulticolored: " +
             (ok ? "true" : "false") + "\n";
    deliver(opt, doc, human, out);
    return 0;
}

inline int cmd_replay(const Options& opt, std::ostream& out) {
    FieldSpace space(opt.p, opt.n);
    PointSet A = io::read_point_set_file(opt.set_file, space);
    CaseTrace trace = replay_induction_step(space, A, opt.k, EnumBudget{opt.node_limit});
    json doc;
    std::string human = "# kstar replay\n";
    doc["command"] = "replay";
    json cfg;
    config_space(opt, cfg, human);
    cfg["k"] = opt.k;
    cfg["set"] = opt.set_file;
    human += "# k: " + std::to_string(opt.k) + "\n# set: " + opt.set_file + "\n";
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    json result;
    result["case"] = trace.case_taken;
    result["t"] = trace.t;
    result["set_size"] = trace.set_size;
    result["family_size"] = trace.family.shapes.size();
    json family = json::array();
    for (const auto& s : trace.family.shapes) family.push_back(tuple_json(space, s));
    result["family"] = family;
    if (trace.case_taken == 1) {
        result["residual_size"] = trace.residual.count();
    } else {
        json rows = json::array();
        for (const auto& r : trace.M.rows) rows.push_back(tuple_json(space, r));
        result["m_rows"] = rows;
        result["b_size"] = trace.B.pairs.size();
    }
    json checks;
    for (const auto& [label, ok] : trace.checks) checks[label] = ok;
    result["checks"] = checks;
    json ineqs = json::array();
    for (const auto& q : trace.inequalities)
        ineqs.push_back({{"label", q.label}, {"lhs", jnum(q.lhs)}, {"rel", q.rel},
                         {"rhs", jnum(q.rhs)}, {"holds", q.holds}});
    result["inequalities"] = ineqs;
    result["valid"] = trace.valid();
    doc["result"] = result;
    human += trace.to_text(space);
    deliver(opt, doc, human, out);
    return trace.valid() ? 0 : 3;
}

inline int cmd_search(const Options& opt, std::ostream& out) {
    FieldSpace space(opt.p, opt.n);
    ShapeSystem sys = build_system(opt);
    SearchResult res;
    if (opt.heuristic) {
        res = heuristic_max(space, sys, opt.seed, opt.iterations);
    } else {
        SearchBudget budget{opt.node_limit, opt.time_limit};
        res = exact_max_shape_free(space, sys, budget);
    }
    std::optional<BoundValidation> bv;
    if (sys.is_star_family()) bv = validate_against_bounds(res);
    json doc;
    std::string human = "# kstar search\n";
    doc["command"] = "search";
    json cfg;
    config_space(opt, cfg, human);
    config_system(opt, sys, cfg, human);
    cfg["mode"] = opt.heuristic ? "heuristic" : "exact";
    human += std::string("# mode: ") + (opt.heuristic ? "heuristic" : "exact") + "\n";
    if (opt.heuristic) {
        cfg["seed"] = opt.seed;
        cfg["iterations"] = opt.iterations;
        human += "# seed: " + std::to_string(opt.seed) + "\n# iterations: " +
                 std::to_string(opt.iterations) + "\n";
    } else {
        cfg["node_limit"] = opt.node_limit;
        cfg["time_limit"] = jnum(opt.time_limit);
        human += "# node_limit: " + std::to_string(opt.node_limit) + "\n# time_limit: " +
                 fmt_g(opt.time_limit) + "\n";
    }
    config_common(opt, cfg, human);
    doc["config"] = cfg;
    json result;
    result["size"] = res.size;
    result["optimal"] = res.optimal;
    result["nodes"] = res.nodes;
    result["verified"] = res.witness_verified;
    json witness = json::array();
    res.best.for_each([&](Point x) { witness.push_back(point_json(space, x)); });
    result["witness"] = witness;
    human += "# size: " + std::to_string(res.size) + "\n# optimal: " +
             (res.optimal ? "true" : "false") + "\n# nodes: " + std::to_string(res.nodes) +
             "\n# verified: " + (res.witness_verified ? "true" : "false") + "\n";
    if (bv) {
        result["club_bound"] = jnum(bv->bound);
        result["slack"] = jnum(bv->slack);
        human += "# club_bound: " + fmt_g(bv->bound) + "\n# slack: " + fmt_g(bv->slack) + "\n";
    }
    doc["result"] = result;
    // the human payload is the witness itself, one point per line
    res.best.for_each([&](Point x) { human += coords_str(space, x) + "\n"; });
    deliver(opt, doc, human, out);
    return 0;
}

inline int dispatch(const std::string& sub, const Options& opt, std::ostream& out) {
    if (sub == "lambda") return cmd_lambda(opt, out);
    if (sub == "bound") return cmd_bound(opt, out);
    if (sub == "check") return cmd_check(opt, out);
    if (sub == "enumerate") return cmd_enumerate(opt, out);
    if (sub == "pack") return cmd_pack(opt, out);
    if (sub == "extend") return cmd_extend(opt, out);
    if (sub == "multicolor") return cmd_multicolor(opt, out);
    if (sub == "replay") return cmd_replay(opt, out);
    if (sub == "search") return cmd_search(opt, out);
    throw std::invalid_argument("unknown subcommand: " + sub);
}

}  // namespace cli

// Exit codes: 0 success, 1 input error, 2 resource exhaustion, 3 falsified
// invariant.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    cli::Options opt;
    CLI::App app{"shape systems, bounds and searches over F_p^n"};
    app.require_subcommand(1);
    // --help only: a bare -h must stay free for the lambda exponent scale --h
    app.set_help_flag("--help", "print this help message and exit");
    auto subcommand = [&](const std::string& name, const std::string& desc) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        cmd->set_help_flag("--help", "print this help message and exit");
        return cmd;
    };

    auto add_space = [&](CLI::App* cmd) {
        cmd->add_option("--p", opt.p, "odd prime modulus")->capture_default_str();
        cmd->add_option("--n", opt.n, "dimension")->capture_default_str();
    };
    auto add_system = [&](CLI::App* cmd) {
        cmd->add_option("--family", opt.family, "built-in system family")
            ->check(CLI::IsMember({"star", "relaxed-star", "w", "mixed"}))
            ->capture_default_str();
        cmd->add_option("--k", opt.k, "number of arms for star families")
            ->capture_default_str();
        cmd->add_option("--system", opt.system_file, "custom system file (overrides --family)");
    };
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"human", "json"}))
            ->capture_default_str();
        cmd->add_option("--output", opt.output, "write the report to this path");
        cmd->add_option("--threads", opt.threads, "worker thread cap")
            ->check(CLI::Range(1, 1024))
            ->capture_default_str();
    };

    CLI::App* c_lambda = subcommand("lambda", "minimize G(u) = u^{-ah}(1+...+u^{mh})");
    c_lambda->add_option("--m", opt.m, "polynomial degree factor")->capture_default_str();
    c_lambda->add_option("--alpha", opt.alpha_raw, "exponent, a/b or float")
        ->capture_default_str();
    c_lambda->add_option("--h", opt.h, "exponent scale")->capture_default_str();
    add_common(c_lambda);

    CLI::App* c_bound = subcommand("bound", "Lambda and the derived set-size bounds");
    add_space(c_bound);
    c_bound->add_option("--k", opt.k, "number of arms")->capture_default_str();
    add_common(c_bound);

    CLI::App* c_check = subcommand("check", "test a point set for shape-freeness");
    add_space(c_check);
    add_system(c_check);
    c_check->add_option("--set", opt.set_file, "point set file")->required();
    add_common(c_check);

    CLI::App* c_enum = subcommand("enumerate", "count semishapes in a set");
    add_space(c_enum);
    add_system(c_enum);
    c_enum->add_option("--set", opt.set_file, "point set file (default: whole space)");
    c_enum->add_option("--node-limit", opt.node_limit, "enumeration budget")
        ->capture_default_str();
    add_common(c_enum);

    CLI::App* c_pack = subcommand("pack", "greedy maximal disjoint shape family");
    add_space(c_pack);
    add_system(c_pack);
    c_pack->add_option("--set", opt.set_file, "point set file")->required();
    std::uint64_t target_val = 0;
    CLI::Option* target_opt =
        c_pack->add_option("--target", target_val, "stop once this many shapes are packed");
    add_common(c_pack);

    CLI::App* c_extend = subcommand("extend", "extendable pairs at positions (i, j)");
    add_space(c_extend);
    add_system(c_extend);
    c_extend->add_option("--rows", opt.rows_file, "family rows file")->required();
    c_extend->add_option("--i", opt.pos_i, "first position, 1-based")->required();
    c_extend->add_option("--j", opt.pos_j, "second position, 1-based")->required();
    add_common(c_extend);

    CLI::App* c_multi = subcommand("multicolor", "multicolored condition for a family");
    add_space(c_multi);
    add_system(c_multi);
    c_multi->add_option("--rows", opt.rows_file, "family rows file")->required();
    c_multi->add_option("--node-limit", opt.node_limit, "enumeration budget")
        ->capture_default_str();
    add_common(c_multi);

    CLI::App* c_replay = subcommand("replay", "replay one induction step on a set");
    add_space(c_replay);
    c_replay->add_option("--k", opt.k, "number of arms, >= 2")->required();
    c_replay->add_option("--set", opt.set_file, "point set file")->required();
    add_common(c_replay);

    CLI::App* c_search = subcommand("search", "maximum shape-free subset");
    add_space(c_search);
    add_system(c_search);
    CLI::Option* heur = c_search->add_flag("--heuristic", opt.heuristic,
                                           "randomized greedy plus local moves");
    c_search->add_flag("--exact", "branch and bound (default)")->excludes(heur);
    c_search->add_option("--seed", opt.seed, "heuristic RNG seed")->capture_default_str();
    c_search->add_option("--iterations", opt.iterations, "heuristic local-move rounds")
        ->capture_default_str();
    c_search->add_option("--node-limit", opt.node_limit, "exact search node budget")
        ->capture_default_str();
    c_search->add_option("--time-limit", opt.time_limit, "exact search seconds budget")
        ->capture_default_str();
    add_common(c_search);

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("kstar");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*target_opt) opt.target = target_val;
        for (CLI::App* sub :
             {c_lambda, c_bound, c_check, c_enum, c_pack, c_extend, c_multi, c_replay, c_search})
            if (sub->parsed()) return cli::dispatch(sub->get_name(), opt, out);
        return 1;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace kstar
