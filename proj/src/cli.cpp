#include "treetop/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "treetop/compactification.hpp"
#include "treetop/determinacy.hpp"
#include "treetop/embeddings.hpp"
#include "treetop/errors.hpp"
#include "treetop/expansions.hpp"
#include "treetop/renorming.hpp"
#include "treetop/set_family.hpp"

#ifndef TREETOP_VERSION
#define TREETOP_VERSION "0.0.0"
#endif

namespace treetop {

namespace {

constexpr std::size_t kMaxListed = 64;

/// Parses args with CLI11 and runs body, mapping failures onto the exit-code contract.
int run_command(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                const std::function<int()>& body) {
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    }
    try {
        return body();
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return exit_code::schema;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::construction;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::construction;
    }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// TREETOP_SEED wins over the flag. Throws BadParams on a malformed value.
std::uint64_t resolve_seed(std::uint64_t flag) {
    const char* env = std::getenv("TREETOP_SEED");
    if (env == nullptr || *env == '\0') return flag;
    try {
        std::size_t used = 0;
        const std::string s(env);
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw BadParams(std::string("TREETOP_SEED is not a natural number: ") + env);
    }
}

Json report_header(const std::string& command, const RunConfig& cfg) {
    return {{"command", command}, {"version", version()}, {"config", cfg.to_json()}};
}

Json members_json(const std::vector<NodeId>& m, bool infinity) {
    Json j(m);
    if (infinity) j.push_back("inf");
    return j;
}

/// Label from --labels (a label object, or a map holding --label-name), else the named tree label.
std::optional<OrderLabel> explicit_label(const Tree& t, const std::string& labels_path, const std::string& name) {
    if (!labels_path.empty()) {
        const Json j = read_json_file(labels_path);
        if (j.contains("values")) return label_from_json(j);
        if (j.contains(name)) return label_from_json(j.at(name));
        throw SchemaError(labels_path + " holds no label \"" + name + "\"");
    }
    if (t.labels().contains(name)) return t.label(name);
    return std::nullopt;
}

OrderLabel phi_label(const Tree& t) {
    OrderLabel h;
    h.codomain = Codomain::R;
    for (NodeId n = 0; n < t.size(); ++n) h.set(n, phi(woset_of(t, n)));
    return h;
}

OrderLabel constant_label(const Tree& t, const Rational& v) {
    OrderLabel h;
    for (NodeId n = 0; n < t.size(); ++n) h.set(n, v);
    return h;
}

Json separation_json(const SeparationReport& r) {
    Json witnesses = Json::array();
    for (const auto& w : r.witness_intersections)
        witnesses.push_back({{"at", w.at}, {"members", members_json(w.members, w.infinity)}});
    Json failures = Json::array();
    for (std::size_t i = 0; i < r.failures.size() && i < kMaxListed; ++i) failures.push_back(r.failures[i]);
    return {{"name", "separation"},
            {"ok", r.ok()},
            {"max_intersection_size", r.max_intersection_size},
            {"failure_count", r.failures.size()},
            {"failures", failures},
            {"witnesses", witnesses}};
}

Json label_check_json(const std::string& name, const LabelCheck& c) {
    Json j{{"name", name}, {"ok", c.ok()}};
    if (c.violation) j["violation"] = {c.violation->first, c.violation->second};
    return j;
}

Json verdicts_json(const std::vector<GoodnessVerdict>& vs) {
    Json out = Json::array();
    for (const auto& v : vs) {
        if (const auto* g = std::get_if<Good>(&v.verdict))
            out.push_back({{"node", v.node}, {"verdict", "good"}, {"eps", to_json(g->eps)}, {"removed", g->removed}});
        else {
            const auto& b = std::get<Bad>(v.verdict);
            out.push_back({{"node", v.node},
                           {"verdict", "bad"},
                           {"family", b.family},
                           {"interval", to_json(b.offending.interval)},
                           {"inf", to_json(b.inf)}});
        }
    }
    return out;
}

Json rho_json(const RhoReport& r) {
    Json bad = Json::array();
    for (const auto& u : r.upsets)
        if (!u.chain || (u.bad_count && *u.bad_count > 1)) {
            Json e{{"node", u.node}, {"up_set", u.equal_up_set}, {"chain", u.chain}};
            if (u.bad_count) e["bad_points"] = *u.bad_count;
            if (bad.size() < kMaxListed) bad.push_back(e);
        }
    Json cantor = r.cantor_constant ? Json{{"depth", r.cantor_constant->depth}, {"nodes", r.cantor_constant->nodes}}
                                    : Json(nullptr);
    return {{"violations", r.violations()}, {"offending", bad}, {"cantor_constant", cantor}, {"refutation_only", r.refutation_only}};
}

}  // namespace

Json RunConfig::to_json() const {
    return {{"seed", seed}, {"tolerance", treetop::to_json(tolerance)}, {"truncation", truncation}, {"out", out}};
}

std::string version() { return TREETOP_VERSION; }

int cmd_gen(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generate a tree truncation", "gen"};
    std::string kind;
    GenParams p;
    std::size_t s_depth = 2;
    std::string out_path;
    std::string family_out;
    app.add_option("--kind", kind)->required()->check(CLI::IsMember({"sigma-q", "wq", "gamma", "t1", "t2", "upsilon"}));
    app.add_option("--depth", p.depth);
    app.add_option("--branching", p.branching);
    app.add_option("--grid", p.grid);
    app.add_option("--omega-run", p.omega_run);
    app.add_option("--s-depth", s_depth);
    app.add_option("--out", out_path);
    app.add_option("--family-out", family_out);
    return run_command(app, args, out, err, [&] {
        std::optional<SetFamily> family;
        Tree t;
        if (kind == "sigma-q") t = gen_tree(TreeKind::SigmaQ, p);
        else if (kind == "wq") t = gen_tree(TreeKind::WQ, p);
        else if (kind == "gamma") t = gen_tree(TreeKind::Gamma, p);
        else if (kind == "upsilon") t = build_upsilon(p);
        else {
            ExpandedTree e = kind == "t1" ? build_T1(p) : build_T2(p, s_depth);
            t = e.tree;
            family = std::move(e.family);
        }
        write_output(out_path, dump(to_json(t)), out);
        if (family) {
            std::string path = family_out;
            if (path.empty() && !out_path.empty()) {
                const auto dot = out_path.rfind(".json");
                path = (dot == std::string::npos ? out_path : out_path.substr(0, dot)) + ".family.json";
            }
            if (!path.empty()) write_output(path, dump(to_json(*family)), out);
        }
        return exit_code::ok;
    });
}

int cmd_certify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Run a certification suite on a tree", "certify"};
    std::string suite;
    std::string in;
    std::string labels;
    std::string label_name;
    std::string cert_path;
    std::string family_path;
    std::size_t samples = 1000;
    std::size_t cantor_depth = 4;
    std::uint64_t seed = 0;
    std::string tolerance = "0";
    RunConfig cfg;
    app.add_option("--suite", suite)->required()->check(CLI::IsMember({"2det", "3det", "tree-of-sets", "bad-points", "rho"}));
    app.add_option("--in", in)->required();
    app.add_option("--labels", labels);
    app.add_option("--label-name", label_name);
    app.add_option("--cert", cert_path);
    app.add_option("--family", family_path);
    app.add_option("--samples", samples);
    app.add_option("--cantor-depth", cantor_depth);
    app.add_option("--seed", seed);
    app.add_option("--tolerance", tolerance);
    app.add_option("--out", cfg.out);
    return run_command(app, args, out, err, [&] {
        cfg.seed = resolve_seed(seed);
        cfg.tolerance = Rational::parse(tolerance);
        cfg.truncation = {{"samples", std::to_string(samples)}, {"cantor_depth", std::to_string(cantor_depth)}};
        const Tree t = tree_from_json(read_json_file(in));
        Json report = report_header("certify", cfg);
        report["suite"] = suite;
        Json checks = Json::array();

        if (suite == "2det") {
            if (!cert_path.empty()) {
                checks.push_back(separation_json(verify_separation(t, certificate_from_json(read_json_file(cert_path)))));
            } else {
                const auto given = explicit_label(t, labels, label_name.empty() ? "h" : label_name);
                const OrderLabel h = given ? *given : phi_label(t);
                const Certificate c = build_2det_network(t, h);
                checks.push_back(separation_json(verify_separation(t, c)));
                checks.back()["sets"] = c.sets.size();
                const OrderLabel h2 = signature_label(t, c);
                checks.push_back(label_check_json("signature-label", verify_order_label(t, h2, true)));
                checks.push_back({{"name", "round-trip"}, {"ok", verify_separation(t, build_2det_network(t, h2)).ok()}});
            }
        } else if (suite == "3det") {
            Certificate c;
            OrderLabel g;
            if (!cert_path.empty()) {
                c = certificate_from_json(read_json_file(cert_path));
            } else {
                const auto given = explicit_label(t, labels, label_name.empty() ? "g" : label_name);
                g = given ? *given : lex_label(t, order_type_label(t));
                c = build_3det_family(t, g);
            }
            const SeparationReport r = verify_separation(t, c);
            checks.push_back(separation_json(r));
            checks.back()["sets"] = c.sets.size();
            if (cert_path.empty()) {
                Json bad = Json::array();
                for (const auto& w : r.witness_intersections) {
                    if (w.members.size() != 2) continue;
                    const NodeId s = w.members[0];
                    const NodeId u = w.members[1];
                    const bool same = std::get<LexPair>(g.at(s)).first == std::get<LexPair>(g.at(u)).first;
                    if (!same || !t.comparable(s, u)) bad.push_back(members_json(w.members, w.infinity));
                }
                checks.push_back({{"name", "witness-shape"}, {"ok", bad.empty()}, {"offending", bad}});
            }
        } else if (suite == "tree-of-sets") {
            const SetFamily f = family_path.empty() ? canonical_set_family(t) : set_family_from_json(t, read_json_file(family_path));
            const TreeOfSetsReport r = tree_of_sets_check(f, samples, cfg.seed);
            for (const auto& c : r.conditions) {
                Json ex = Json::array();
                for (std::size_t i = 0; i < c.counterexamples.size() && i < kMaxListed; ++i) ex.push_back(c.counterexamples[i]);
                checks.push_back({{"name", c.name}, {"ok", c.ok()}, {"checked", c.checked}, {"counterexamples", ex}});
            }
        } else if (suite == "bad-points") {
            const auto given = explicit_label(t, labels, label_name.empty() ? "h" : label_name);
            const OrderLabel f = given ? *given : constant_label(t, Rational(0));
            const auto vs = bad_points(t, f);
            Json bad = Json::array();
            Json thin = Json::array();
            Json uncertified = Json::array();
            for (const auto& v : vs) {
                if (!v.good()) {
                    bad.push_back(v.node);
                    continue;
                }
                const Good& g = std::get<Good>(v.verdict);
                if (g.eps < cfg.tolerance) thin.push_back(v.node);
                if (!certifies(t, f, v.node, g)) uncertified.push_back(v.node);
            }
            checks.push_back({{"name", "no-bad-points"}, {"ok", bad.empty()}, {"bad", bad}, {"verdicts", verdicts_json(vs)}});
            checks.push_back({{"name", "eps-tolerance"}, {"ok", thin.empty()}, {"below", thin}});
            checks.push_back({{"name", "self-certifying"}, {"ok", uncertified.empty()}, {"offending", uncertified}});
        } else {
            const auto given = explicit_label(t, labels, label_name.empty() ? "rho" : label_name);
            const OrderLabel rho = given ? *given : t2_rho(t);
            const RhoReport r = rho_check(t, rho, cantor_depth);
            Json j = rho_json(r);
            j["name"] = "rho";
            j["ok"] = r.violations() == 0 && !r.cantor_constant;
            checks.push_back(j);
        }

        bool ok = true;
        for (const auto& c : checks) ok = ok && c.at("ok").get<bool>();
        report["checks"] = checks;
        report["ok"] = ok;
        write_output(cfg.out, dump(report), out);
        return ok ? exit_code::ok : exit_code::failure;
    });
}

int cmd_export(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Export a tree", "export"};
    std::string in;
    std::string format = "dot";
    std::string out_path;
    app.add_option("--in", in)->required();
    app.add_option("--format", format)->check(CLI::IsMember({"dot"}));
    app.add_option("--out", out_path);
    return run_command(app, args, out, err, [&] {
        write_output(out_path, to_dot(tree_from_json(read_json_file(in))), out);
        return exit_code::ok;
    });
}

int cmd_analyze(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analyze a labeled tree", "analyze"};
    std::string op;
    std::string in;
    std::string labels;
    std::string label_name;
    std::size_t cantor_depth = 4;
    RunConfig cfg;
    app.add_option("--op", op)->required()->check(CLI::IsMember({"bad-points", "kadec", "rho"}));
    app.add_option("--in", in)->required();
    app.add_option("--labels", labels);
    app.add_option("--label-name", label_name);
    app.add_option("--cantor-depth", cantor_depth);
    app.add_option("--out", cfg.out);
    return run_command(app, args, out, err, [&] {
        cfg.seed = resolve_seed(0);
        cfg.truncation = {{"cantor_depth", std::to_string(cantor_depth)}};
        const Tree t = tree_from_json(read_json_file(in));
        Json report = report_header("analyze", cfg);
        report["op"] = op;
        if (op == "bad-points") {
            const auto given = explicit_label(t, labels, label_name.empty() ? "h" : label_name);
            report["verdicts"] = verdicts_json(bad_points(t, given ? *given : constant_label(t, Rational(0))));
        } else if (op == "kadec") {
            const auto given = explicit_label(t, labels, label_name.empty() ? "f" : label_name);
            if (!given) throw SchemaError("kadec needs a rational label");
            report["label"] = to_json(kadec_witness(t, *given));
        } else {
            const auto given = explicit_label(t, labels, label_name.empty() ? "rho" : label_name);
            report["rho"] = rho_json(rho_check(t, given ? *given : t2_rho(t), cantor_depth));
        }
        write_output(cfg.out, dump(report), out);
        return exit_code::ok;
    });
}

int cmd_compactify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Audit the compactification glued along a tree's coordinates", "compactify"};
    std::string in;
    std::string coords_path;
    std::size_t pairs = 100;
    std::uint64_t seed = 0;
    RunConfig cfg;
    app.add_option("--in", in)->required();
    app.add_option("--coords", coords_path)->required();
    app.add_option("--pairs", pairs);
    app.add_option("--seed", seed);
    app.add_option("--out", cfg.out);
    return run_command(app, args, out, err, [&] {
        cfg.seed = resolve_seed(seed);
        cfg.truncation = {{"pairs", std::to_string(pairs)}};
        const Tree t = tree_from_json(read_json_file(in));
        const Json cj = read_json_file(coords_path);
        std::vector<Rational> coords;
        for (const auto& q : cj.at("coords")) coords.push_back(rational_from_json(q));
        CompactificationInstance inst = tree_instance(t, coords);
        if (cj.contains("radii"))
            for (const auto& r : cj.at("radii")) inst.radii.push_back(rational_from_json(r));
        check_instance(inst);

        const auto fibers = retraction_fibers(inst);
        std::size_t max_fiber = 0;
        Json fj = Json::object();
        for (const auto& [y, n] : fibers) {
            fj[std::to_string(y)] = n;
            max_fiber = std::max(max_fiber, n);
        }
        const bool injective = std::all_of(fibers.begin(), fibers.end(), [](const auto& e) { return e.second <= 2; });

        std::mt19937_64 rng(cfg.seed);
        const std::size_t total = inst.points_of_x() + inst.points_of_k();
        auto pick = [&] {
            const std::size_t i = rng() % total;
            return i < inst.points_of_x() ? SpacePoint::in_x(i) : SpacePoint::in_k(i - inst.points_of_x());
        };
        std::vector<std::pair<SpacePoint, SpacePoint>> ps;
        for (std::size_t i = 0; i < pairs; ++i) {
            const SpacePoint a = pick();
            ps.emplace_back(a, pick());
        }
        const HausdorffReport h = hausdorff_check(inst, ps);
        Json missing = Json::array();
        for (const auto& s : h.pairs)
            if (!s.skipped && !s.found() && missing.size() < kMaxListed) missing.push_back({to_string(s.a), to_string(s.b)});

        Json report = report_header("compactify", cfg);
        report["k_points"] = inst.points_of_k();
        report["x_points"] = inst.points_of_x();
        report["fibers"] = fj;
        report["max_fiber"] = max_fiber;
        report["f_injective"] = injective;
        report["hausdorff"] = {{"checked", h.checked()}, {"separated", h.separated()}, {"missing", missing}};
        report["ok"] = h.ok();
        write_output(cfg.out, dump(report), out);
        return h.ok() ? exit_code::ok : exit_code::failure;
    });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    static const std::map<std::string, int (*)(const std::vector<std::string>&, std::ostream&, std::ostream&)> commands{
        {"gen", cmd_gen}, {"certify", cmd_certify}, {"export", cmd_export}, {"analyze", cmd_analyze}, {"compactify", cmd_compactify}};
    if (!args.empty() && (args[0] == "--version" || args[0] == "version")) {
        out << "treetop " << version() << "\n";
        return exit_code::ok;
    }
    const auto it = args.empty() ? commands.end() : commands.find(args[0]);
    if (it == commands.end()) {
        err << "usage: treetop <gen|certify|export|analyze|compactify> [options]\n";
        return exit_code::usage;
    }
    return it->second(std::vector<std::string>(args.begin() + 1, args.end()), out, err);
}

}  // namespace treetop
