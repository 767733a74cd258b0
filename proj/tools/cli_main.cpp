// SPDX-License-Identifier: Apache-2.0

// Command-line front end: reads one JSON problem description from stdin or a
// file, runs the named operation, prints a JSON report on stdout.  Human
// progress notes go to stderr so stdout stays machine-readable and
// byte-deterministic for a fixed seed.
//
// Exit codes: 0 success; 2 a verified search ran out of budget (or an oracle
// broke its contract); 3 the input failed validation.

#include "compacta/ast.hpp"
#include "compacta/compact.hpp"
#include "compacta/errors.hpp"
#include "compacta/modulus.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using json = nlohmann::json;
using namespace compacta;

namespace {

struct Options {
    std::string input_file;  // empty = stdin
    int digits = 12;
    int budget = 64;
    int check_soundness = 0;
    unsigned long long seed = 0;
    bool trace = false;
};

// ---- JSON loading with pointer-carrying errors ----------------------------

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError("at " + (where.empty() ? "/" : where) + ": " + what);
}

const json& field(const json& j, const std::string& where, const std::string& key) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, "missing field \"" + key + "\"");
    return *it;
}

Rat load_rat(const json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Rat(j.get<long long>());
        if (j.is_string()) return rat_from_string(j.get<std::string>());
    } catch (const std::exception&) {
        fail(where, "not a rational: " + j.dump());
    }
    fail(where, "expected a rational as \"p/q\" string or integer");
}

SpacePtr load_space(const json& j, const std::string& where) {
    if (j.is_string() && j.get<std::string>() == "R") return real_line();
    if (j.is_object() && j.contains("Rn")) {
        const json& d = j["Rn"];
        if (!d.is_number_integer() || d.get<int>() < 1)
            fail(where + "/Rn", "dimension must be a positive integer");
        return real_box_space(d.get<int>());
    }
    fail(where, "expected \"R\" or {\"Rn\": d}");
}

Point load_point(const json& j, const std::string& where, const SpacePtr& space) {
    if (!j.is_array() || static_cast<int>(j.size()) != space->dim())
        fail(where, "expected an array of " + std::to_string(space->dim()) + " rationals");
    std::vector<Rat> coords;
    for (size_t i = 0; i < j.size(); ++i)
        coords.push_back(load_rat(j[i], where + "/" + std::to_string(i)));
    return rational_point(coords);
}

Compact load_compact(const json& j, const std::string& where, const SpacePtr& space) {
    if (!j.is_object()) fail(where, "expected a compact constructor object");
    if (j.contains("points")) {
        const json& pts = j["points"];
        if (!pts.is_array() || pts.empty()) fail(where + "/points", "expected a nonempty array");
        std::vector<Point> points;
        for (size_t i = 0; i < pts.size(); ++i)
            points.push_back(load_point(pts[i], where + "/points/" + std::to_string(i), space));
        return compact_of_list(FiniteList(space, std::move(points)));
    }
    if (j.contains("net_of_box")) {
        const json& nb = j["net_of_box"];
        std::string here = where + "/net_of_box";
        const json& boxj = field(nb, here, "box");
        if (!boxj.is_array() || static_cast<int>(boxj.size()) != space->dim())
            fail(here + "/box", "expected one [lo, hi] pair per dimension");
        std::vector<std::pair<Rat, Rat>> box;
        for (size_t i = 0; i < boxj.size(); ++i) {
            std::string axis = here + "/box/" + std::to_string(i);
            if (!boxj[i].is_array() || boxj[i].size() != 2) fail(axis, "expected [lo, hi]");
            Rat lo = load_rat(boxj[i][0], axis + "/0");
            Rat hi = load_rat(boxj[i][1], axis + "/1");
            if (hi < lo) fail(axis, "box interval is reversed");
            box.emplace_back(std::move(lo), std::move(hi));
        }
        Rat spacing = load_rat(field(nb, here, "spacing"), here + "/spacing");
        if (spacing <= 0) fail(here + "/spacing", "spacing must be positive");
        return grid_compact(space, box, spacing);
    }
    if (j.contains("union")) {
        const json& parts = j["union"];
        if (!parts.is_array() || parts.empty()) fail(where + "/union", "expected a nonempty array");
        std::vector<Compact> loaded;
        for (size_t i = 0; i < parts.size(); ++i)
            loaded.push_back(load_compact(parts[i], where + "/union/" + std::to_string(i), space));
        return compact_thin_union(space, std::move(loaded));
    }
    fail(where, "expected one of \"points\", \"net_of_box\", \"union\"");
}

AstPtr load_ast(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected a function AST node");
    std::string op = field(j, where, "op").is_string() ? j["op"].get<std::string>() : "";
    auto arg = [&](size_t i) {
        const json& args = field(j, where, "args");
        if (!args.is_array() || args.size() <= i)
            fail(where + "/args", "not enough arguments for \"" + op + "\"");
        return load_ast(args[i], where + "/args/" + std::to_string(i));
    };
    if (op == "var") {
        size_t index = j.contains("index") ? j["index"].get<size_t>() : 0;
        return ast_var(index);
    }
    if (op == "const") return ast_const(load_rat(field(j, where, "value"), where + "/value"));
    if (op == "add") return ast_add(arg(0), arg(1));
    if (op == "sub") return ast_sub(arg(0), arg(1));
    if (op == "abs") return ast_abs(arg(0));
    if (op == "min") return ast_min(arg(0), arg(1));
    if (op == "max") return ast_max(arg(0), arg(1));
    if (op == "scale")
        return ast_scale(load_rat(field(j, where, "factor"), where + "/factor"), arg(0));
    if (op == "dist_to") {
        const json& anchor = field(j, where, "anchor");
        if (!anchor.is_array()) fail(where + "/anchor", "expected an array of rationals");
        std::vector<Rat> coords;
        for (size_t i = 0; i < anchor.size(); ++i)
            coords.push_back(load_rat(anchor[i], where + "/anchor/" + std::to_string(i)));
        return ast_dist_to(std::move(coords));
    }
    fail(where + "/op", "unknown op \"" + op + "\"");
}

std::vector<AstPtr> load_function(const json& j, const std::string& where) {
    if (j.is_array()) {
        if (j.empty()) fail(where, "expected at least one coordinate expression");
        std::vector<AstPtr> coords;
        for (size_t i = 0; i < j.size(); ++i)
            coords.push_back(load_ast(j[i], where + "/" + std::to_string(i)));
        return coords;
    }
    return {load_ast(j, where)};
}

// ---- Report rendering -----------------------------------------------------

// Decimal rendering of a CReal with an explicit error bound: the approximant
// carries 2^-bits, the decimal cut another 10^-digits.
json render_real(const CReal& x, int digits) {
    int bits = static_cast<int>(std::ceil(digits * 3.322)) + 2;
    Rat a = x.approx(bits);
    Rat bound = pow2(-bits) + Rat(1, Int(pow(Int(10), digits)));
    return json{{"decimal", rat_to_decimal(a, digits)}, {"error_bound", rat_to_string(bound)}};
}

json render_net(const Compact& k, int n, int digits) {
    const FiniteList& net = k.net(n);
    json pts = json::array();
    for (const auto& p : net.points) {
        json coords = json::array();
        for (const auto& c : p.coords) coords.push_back(render_real(c, digits));
        pts.push_back(std::move(coords));
    }
    return json{{"precision", n},
                {"net_error_bound", rat_to_string(pow2(-n))},
                {"points", std::move(pts)}};
}

// ---- Soundness sampling ---------------------------------------------------

// Samples member pairs certified closer than delta and checks that their
// f-values stay within eps (up to the 2^-20 evaluation slack).  Pairs are
// manufactured from a net fine enough that the gap verdict is forced, so
// every sample counts.  Deterministic for a fixed seed.
json sample_soundness(const EffectiveMap& f, const Compact& k, const Rat& eps, const Rat& delta,
                      int samples, unsigned long long seed) {
    int q = std::max(0, min_n_pow2_leq(delta) + 4);
    const FiniteList& net = k.net(q);
    const SpacePtr& space = k.space();
    std::mt19937_64 rng(seed);
    int violations = 0;
    Rat slack = eps + pow2(-20) + pow2(-21);
    for (int s = 0; s < samples; ++s) {
        size_t i = static_cast<size_t>(rng() % net.size());
        // neighbors within delta/4 on the net; i itself always qualifies
        std::vector<size_t> close;
        for (size_t j = 0; j < net.size(); ++j)
            if (space->dist_approx(net.points[i], net.points[j], q + 4) < delta / 4)
                close.push_back(j);
        size_t j = close[static_cast<size_t>(rng() % close.size())];
        Point x = select_net_point(k, q, i);
        Point xp = select_net_point(k, q, j);
        CReal df = f.codomain->dist(f.apply(x), f.apply(xp));
        if (df.approx(21) > slack) ++violations;
    }
    return json{{"samples", samples}, {"seed", seed}, {"violations", violations}};
}

// ---- Command dispatch -----------------------------------------------------

int run(const json& spec, const Options& opt) {
    std::string cmd = field(spec, "", "command").is_string()
                          ? spec["command"].get<std::string>()
                          : "";
    SpacePtr space = load_space(field(spec, "", "space"), "/space");
    int budget = spec.contains("budget") ? spec["budget"].get<int>() : opt.budget;
    if (budget < 1) fail("/budget", "budget must be >= 1");

    json report{{"command", cmd}, {"space", space->name()}};
    auto t0 = std::chrono::steady_clock::now();

    if (cmd == "dist") {
        Compact a = load_compact(field(spec, "", "compact"), "/compact", space);
        Compact b = load_compact(field(spec, "", "compact2"), "/compact2", space);
        report["distance"] = render_real(compact_dist(a, b), opt.digits);
    } else if (cmd == "sup" || cmd == "inf") {
        Compact k = load_compact(field(spec, "", "compact"), "/compact", space);
        auto [sup, inf] = sup_inf(k);
        report[cmd] = render_real(cmd == "sup" ? sup : inf, opt.digits);
    } else if (cmd == "union") {
        Compact a = load_compact(field(spec, "", "compact"), "/compact", space);
        Compact b = load_compact(field(spec, "", "compact2"), "/compact2", space);
        int n = spec.contains("net_precision") ? spec["net_precision"].get<int>() : 4;
        report["union"] = render_net(compact_thin_union(space, {a, b}), n, opt.digits);
    } else if (cmd == "split") {
        Compact k = load_compact(field(spec, "", "compact"), "/compact", space);
        Point x = load_point(field(spec, "", "point"), "/point", space);
        Rat eps = load_rat(field(spec, "", "epsilon"), "/epsilon");
        auto split = ball_split(k, x, eps);
        if (split.tag == SplitResult::Tag::Miss) {
            report["split"] = json{{"tag", "miss"}};
        } else {
            int n = spec.contains("net_precision") ? spec["net_precision"].get<int>() : 4;
            report["split"] =
                json{{"tag", "piece"}, {"piece", render_net(*split.piece, n, opt.digits)}};
        }
    } else if (cmd == "image") {
        Compact k = load_compact(field(spec, "", "compact"), "/compact", space);
        auto coords = load_function(field(spec, "", "function"), "/function");
        EffectiveMap f = ast_map(space, coords);
        UniformModulus mu = synthesize_reference_modulus(coords);
        int n = spec.contains("net_precision") ? spec["net_precision"].get<int>() : 4;
        report["image"] = render_net(image_compact(f, mu, k), n, opt.digits);
    } else if (cmd == "member") {
        Compact k = load_compact(field(spec, "", "compact"), "/compact", space);
        Point x = load_point(field(spec, "", "point"), "/point", space);
        Rat tol = load_rat(field(spec, "", "tolerance"), "/tolerance");
        if (tol <= 0) fail("/tolerance", "tolerance must be positive");
        Verdict v = is_member(x, k, tol);
        report["member"] = (v == Verdict::LessThanB) ? "within_tolerance" : "refuted";
    } else if (cmd == "modulus" || cmd == "check") {
        Compact k = load_compact(field(spec, "", "compact"), "/compact", space);
        auto coords = load_function(field(spec, "", "function"), "/function");
        EffectiveMap f = ast_map(space, coords);
        Rat eps = load_rat(field(spec, "", "epsilon"), "/epsilon");
        // The synthesized reference modulus exists only to manufacture the
        // image oracle; the extractor sees the oracle and nothing else.
        ImageOracle pi_f = make_image_oracle(f, synthesize_reference_modulus(coords));
        json trace_out = json::array();
        TraceSink sink = nullptr;
        if (opt.trace)
            sink = [&trace_out](const TraceNode& node) {
                trace_out.push_back(json{{"depth", node.depth},
                                         {"level", node.level},
                                         {"pieces", node.pieces},
                                         {"recursed", node.recursed},
                                         {"kappa", rat_to_string(node.kappa)}});
            };
        Rat delta = uniform_modulus(f, pi_f, k, eps, budget, sink);
        report["delta"] = rat_to_string(delta);
        report["epsilon"] = rat_to_string(eps);
        report["budget"] = budget;
        if (opt.trace) report["trace"] = std::move(trace_out);
        int samples = 0;
        if (cmd == "check")
            samples = spec.contains("samples") ? spec["samples"].get<int>() : 1000;
        if (opt.check_soundness > 0) samples = opt.check_soundness;
        if (samples > 0) {
            unsigned long long seed =
                spec.contains("seed") ? spec["seed"].get<unsigned long long>() : opt.seed;
            report["soundness"] = sample_soundness(f, k, eps, delta, samples, seed);
        }
    } else {
        fail("/command", "unknown command \"" + cmd + "\"");
    }

    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cerr << cmd << " finished in " << ms << " ms" << std::endl;
    std::cout << report.dump(2) << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact compact-set calculator and uniform-continuity modulus extractor"};
    Options opt;
    app.add_option("-i,--input", opt.input_file, "Problem JSON file (default: stdin)");
    app.add_option("--precision", opt.digits, "Decimal digits in rendered reals")
        ->check(CLI::Range(1, 1000));
    app.add_option("--budget", opt.budget, "Search budget for every bounded search")
        ->check(CLI::PositiveNumber);
    app.add_option("--check-soundness", opt.check_soundness,
                   "Sample this many member pairs against the extracted modulus");
    app.add_option("--seed", opt.seed, "Seed for soundness sampling");
    app.add_flag("--trace", opt.trace, "Include the recursion trace in modulus reports");
    CLI11_PARSE(app, argc, argv);

    json spec;
    try {
        if (opt.input_file.empty()) {
            spec = json::parse(std::cin);
        } else {
            std::ifstream in(opt.input_file);
            if (!in) {
                std::cerr << "error: cannot open " << opt.input_file << std::endl;
                return 3;
            }
            spec = json::parse(in);
        }
    } catch (const json::parse_error& e) {
        std::cerr << "error: malformed JSON: " << e.what() << std::endl;
        return 3;
    }

    try {
        return run(spec, opt);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: budget exceeded: " << e.what() << std::endl;
        return 2;
    } catch (const ClassViolation& e) {
        std::cerr << "error: oracle contract violated: " << e.what() << std::endl;
        return 2;
    } catch (const EmptyPiece& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    } catch (const SpaceMismatch& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
}
