#include "teamlog/cli.hpp"

#include "teamlog/errors.hpp"
#include "teamlog/modelcheck.hpp"
#include "teamlog/reductions.hpp"
#include "teamlog/sat.hpp"
#include "teamlog/semantics.hpp"
#include "teamlog/structure.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace teamlog::cli {

namespace {

using json = nlohmann::json;

constexpr std::size_t kDefaultBudget = 2'000'000;

// Raised by command handlers; carries the exit code.
struct Failure {
    int code;
    std::string kind;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kUsage, "io", "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Failure{kUsage, "io", "cannot write '" + path + "'"};
}

struct Inputs {
    std::string formula_path;
    std::string formula_text;
    std::string team_path;

    [[nodiscard]] Formula formula() const {
        if (!formula_text.empty()) return parse_formula(formula_text);
        if (formula_path.empty()) throw Failure{kUsage, "usage", "a formula file or --expr is required"};
        return parse_formula(read_file(formula_path));
    }

    [[nodiscard]] std::optional<Team> team() const {
        if (team_path.empty()) return std::nullopt;
        return parse_team(read_file(team_path));
    }
};

void add_formula_inputs(CLI::App* cmd, Inputs& in, bool with_team) {
    cmd->add_option("formula", in.formula_path, "Formula file");
    cmd->add_option("-e,--expr", in.formula_text, "Formula text instead of a file");
    if (with_team) cmd->add_option("team", in.team_path, "Team file (text or JSON)");
}

SemanticsMode parse_mode(const std::string& s) { return s == "lax" ? SemanticsMode::Lax : SemanticsMode::Strict; }

std::size_t budget_from(std::size_t flag) {
    if (flag != 0) return flag;
    if (const char* env = std::getenv("TEAMLOG_BUDGET"); env && *env) {
        try {
            std::size_t pos = 0;
            auto v = std::stoull(env, &pos);
            if (pos == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw Failure{kUsage, "usage", "TEAMLOG_BUDGET must be a positive integer"};
    }
    return kDefaultBudget;
}

// The JSON report every command prints; --pretty switches to plain text.
class Report {
public:
    Report(std::string command, std::vector<std::string> args)
        : start_(std::chrono::steady_clock::now()) {
        doc_["command"] = std::move(command);
        doc_["args"] = std::move(args);
        doc_["engine"] = nullptr;
        doc_["result"] = json::object();
    }

    json& result() { return doc_["result"]; }
    void engine(std::string_view e) { doc_["engine"] = std::string(e); }

    void fail(const Failure& f) {
        doc_["error"] = {{"kind", f.kind}, {"message", f.message}, {"exit_code", f.code}};
    }

    void emit(std::ostream& out, bool pretty) {
        doc_["time_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        if (!pretty) {
            out << doc_.dump() << '\n';
            return;
        }
        out << doc_["command"].get<std::string>();
        if (!doc_["engine"].is_null()) out << " (" << doc_["engine"].get<std::string>() << ")";
        out << '\n';
        if (doc_.contains("error")) out << "error: " << doc_["error"]["message"].get<std::string>() << '\n';
        print_pretty(out, doc_["result"], "");
    }

private:
    static void print_pretty(std::ostream& out, const json& j, const std::string& indent) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object() && value.contains("vars") && value.contains("rows")) {
                out << indent << key << ":\n";
                std::istringstream team(render_team(parse_team_json(value)));
                for (std::string line; std::getline(team, line);) out << indent << "  " << line << '\n';
            } else if (value.is_object()) {
                out << indent << key << ":\n";
                print_pretty(out, value, indent + "  ");
            } else if (value.is_string()) {
                out << indent << key << ": " << value.get<std::string>() << '\n';
            } else {
                out << indent << key << ": " << value.dump() << '\n';
            }
        }
    }

    json doc_;
    std::chrono::steady_clock::time_point start_;
};

int cmd_mc(const Inputs& in, const std::string& semantics, const std::string& algo, std::size_t cap, Report& rep) {
    const auto f = in.formula();
    const auto team = in.team();
    if (!team) throw Failure{kUsage, "usage", "mc needs a team file"};
    rep.engine(algo);
    const bool ok = mc(*team, f, parse_mode(semantics), algo == "recursive" ? McAlgorithm::Recursive : McAlgorithm::BottomUp,
                       cap);
    rep.result()["satisfied"] = ok;
    rep.result()["semantics"] = semantics;
    return ok ? kOk : kNegative;
}

std::string auto_engine(const Formula& f) {
    if (f.logic() != LogicKind::PINC) return "singleton";
    return count_splits(f) == 0 ? "splitfree" : "fixpoint";
}

int cmd_sat(const Inputs& in, const std::string& semantics, std::string algo, std::size_t budget_flag, Report& rep) {
    const auto f = in.formula();
    const auto mode = parse_mode(semantics);
    if (algo == "auto") algo = auto_engine(f);
    rep.engine(algo);
    SatResult r;
    if (algo == "brute") {
        r = sat_brute(f, mode);
    } else if (algo == "singleton") {
        r = sat_singleton(f);
    } else if (algo == "fixpoint") {
        FixpointOptions opts;
        opts.budget = budget_from(budget_flag);
        r = sat_fixpoint(f, mode, opts);
    } else {
        r = sat_split_free(f);
    }
    auto& res = rep.result();
    res["status"] = std::string(to_string(r.status));
    res["semantics"] = semantics;
    res["steps"] = r.steps;
    res["witness"] = nullptr;
    if (r.witness) {
        // Never print a witness that does not check out.
        const std::size_t cap = std::max<std::size_t>(kDefaultTeamCap, r.witness->size());
        if (!evaluate(*r.witness, f, mode, cap)) {
            throw Failure{kUsage, "internal", "engine produced a witness that does not satisfy the formula"};
        }
        res["witness"] = team_to_json(*r.witness);
        res["verified"] = true;
    }
    switch (r.status) {
        case SatStatus::Satisfiable:
            return kOk;
        case SatStatus::Unsatisfiable:
            return kNegative;
        case SatStatus::ResourceExhausted:
            return kExhausted;
    }
    return kExhausted;
}

int cmd_params(const Inputs& in, bool exact, std::size_t max_exact, Report& rep) {
    const auto f = in.formula();
    const auto team = in.team();
    rep.engine(exact ? "exact" : std::string(to_string(TreewidthMethod::MinFill)));
    rep.result() = to_json(parameters(f, team ? &*team : nullptr, exact, max_exact));
    return kOk;
}

int cmd_graph(const Inputs& in, const std::string& format, std::ostream& out, Report& rep, bool& printed) {
    const auto f = in.formula();
    const auto team = in.team();
    const auto g = build_gaifman(f, team ? &*team : nullptr);
    if (format == "dot") {
        out << to_dot(g);
        printed = true;
        return kOk;
    }
    rep.engine("gaifman");
    rep.result() = to_json(g);
    return kOk;
}

int cmd_decomp(const Inputs& in, const std::string& method, std::size_t max_exact, Report& rep) {
    const auto f = in.formula();
    const auto team = in.team();
    const auto g = build_gaifman(f, team ? &*team : nullptr);
    rep.engine(method);
    TreewidthResult tw;
    if (method == "exact") {
        tw = treewidth_exact(g, max_exact);
    } else {
        tw = treewidth_upper(g, method == "min_degree" ? TreewidthMethod::MinDegree : TreewidthMethod::MinFill);
    }
    const auto check = validate_decomposition(g, tw.decomposition);
    auto& res = rep.result();
    res["decomposition"] = to_json(tw.decomposition);
    res["exact"] = method == "exact";
    res["valid"] = check.valid;
    json labels = json::array();
    for (const auto& v : g.vertices()) labels.push_back(v.label);
    res["vertices"] = labels;
    return kOk;
}

int cmd_gen_setsplit(const std::string& spec_path, const std::string& prefix, Report& rep) {
    const auto inst = parse_setsplit_json(json::parse(read_file(spec_path)));
    const auto reduced = setsplit_to_pinc_mc(inst);
    rep.engine("setsplit");
    auto& res = rep.result();
    const std::string formula_text = render_formula(reduced.formula);
    res["formula"] = formula_text;
    res["team"] = team_to_json(reduced.team);
    if (!prefix.empty()) {
        write_file(prefix + ".formula", formula_text + "\n");
        write_file(prefix + ".team", render_team(reduced.team));
        res["formula_file"] = prefix + ".formula";
        res["team_file"] = prefix + ".team";
    }
    if (inst.elements.size() <= 20) res["splittable"] = setsplit_brute(inst).has_value();
    return kOk;
}

int cmd_gen_random(const RandomFormulaConfig& cfg, const std::string& logic, Report& rep) {
    RandomFormulaConfig c = cfg;
    c.logic = logic == "pdl" ? LogicKind::PDL : logic == "pinc" ? LogicKind::PINC : logic == "pind" ? LogicKind::PIND : LogicKind::PL;
    rep.engine("random");
    rep.result()["formula"] = render_formula(random_formula(c));
    return kOk;
}

int cmd_translate(const Inputs& in, const std::string& out_path, Report& rep) {
    const auto f = in.formula();
    rep.engine("dep_to_indep");
    const auto g = dep_to_indep(f);
    rep.result()["formula"] = render_formula(g);
    if (!out_path.empty()) {
        write_file(out_path, render_formula(g) + "\n");
        rep.result()["output_file"] = out_path;
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Model checking, satisfiability and structure tools for propositional team logics", "teamlog"};
    app.require_subcommand(1);
    app.fallthrough();
    bool pretty = false;
    app.add_flag("--pretty", pretty, "Human-readable output instead of JSON");

    Inputs in;
    std::string semantics = "strict";
    auto add_semantics = [&](CLI::App* cmd) {
        cmd->add_option("-s,--semantics", semantics, "Split semantics")->check(CLI::IsMember({"strict", "lax"}));
    };

    auto* mc_cmd = app.add_subcommand("mc", "Check whether a team satisfies a formula");
    add_formula_inputs(mc_cmd, in, true);
    add_semantics(mc_cmd);
    std::string mc_algo = "bottomup";
    mc_cmd->add_option("--algo", mc_algo, "Model checking algorithm")->check(CLI::IsMember({"recursive", "bottomup"}));
    std::size_t cap = kDefaultTeamCap;
    mc_cmd->add_option("--cap", cap, "Largest team size to enumerate");

    auto* sat_cmd = app.add_subcommand("sat", "Search for a non-empty satisfying team");
    add_formula_inputs(sat_cmd, in, false);
    add_semantics(sat_cmd);
    std::string sat_algo = "auto";
    sat_cmd->add_option("--algo", sat_algo, "Engine")
        ->check(CLI::IsMember({"auto", "brute", "singleton", "fixpoint", "splitfree"}));
    std::size_t budget = 0;
    sat_cmd->add_option("--budget", budget, "Search budget for the fixpoint engine (default: TEAMLOG_BUDGET or 2000000)");

    auto* params_cmd = app.add_subcommand("params", "Report instance parameters");
    add_formula_inputs(params_cmd, in, true);
    bool exact_tw = false;
    params_cmd->add_flag("--exact-tw", exact_tw, "Exact treewidth when the graph is small enough");
    std::size_t max_exact = kDefaultExactVertexCap;
    params_cmd->add_option("--max-exact", max_exact, "Vertex cap for exact treewidth");

    auto* graph_cmd = app.add_subcommand("graph", "Print the Gaifman graph");
    add_formula_inputs(graph_cmd, in, true);
    std::string format = "dot";
    graph_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"dot", "json"}));

    auto* decomp_cmd = app.add_subcommand("decomp", "Print a tree decomposition of the Gaifman graph");
    add_formula_inputs(decomp_cmd, in, true);
    std::string method = "min_fill";
    decomp_cmd->add_option("--method", method, "Decomposition method")
        ->check(CLI::IsMember({"min_fill", "min_degree", "exact"}));
    decomp_cmd->add_option("--max-exact", max_exact, "Vertex cap for exact treewidth");

    auto* gen_cmd = app.add_subcommand("gen", "Generate instances");
    gen_cmd->require_subcommand(1);
    gen_cmd->fallthrough();
    auto* gen_split = gen_cmd->add_subcommand("setsplit", "Reduce a set-splitting instance to model checking");
    std::string spec_path, prefix;
    gen_split->add_option("instance", spec_path, "Set-splitting JSON {elements, sets}")->required();
    gen_split->add_option("-o,--out", prefix, "Write <out>.formula and <out>.team");
    auto* gen_random = gen_cmd->add_subcommand("random", "Print a random formula");
    RandomFormulaConfig rcfg;
    std::string logic = "pl";
    gen_random->add_option("--logic", logic, "Logic")->check(CLI::IsMember({"pl", "pdl", "pinc", "pind"}));
    gen_random->add_option("--vars", rcfg.max_vars, "Number of variables");
    gen_random->add_option("--nodes", rcfg.max_nodes, "Maximum syntax-tree nodes");
    gen_random->add_option("--arity", rcfg.max_arity, "Maximum atom arity");
    gen_random->add_option("--splits", rcfg.max_splits, "Maximum number of splits");
    gen_random->add_option("--seed", rcfg.seed, "Random seed");

    auto* tr_cmd = app.add_subcommand("translate", "Rewrite a formula");
    add_formula_inputs(tr_cmd, in, false);
    bool dep_to_ind = false;
    tr_cmd->add_flag("--dep-to-indep", dep_to_ind, "Replace dependence atoms by independence atoms")->required();
    std::string tr_out;
    tr_cmd->add_option("-o,--out", tr_out, "Write the rewritten formula to this file");

    std::vector<const char*> argv{"teamlog"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "teamlog: " << e.what() << '\n';
        return kUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    // With --expr the only positional names the team.
    if (!in.formula_text.empty() && in.team_path.empty() && active != sat_cmd && active != tr_cmd) {
        std::swap(in.formula_path, in.team_path);
    }
    std::string name = active->get_name();
    if (active == gen_cmd) name += " " + gen_cmd->get_subcommands().front()->get_name();
    Report rep(name, args);
    int code = kOk;
    bool printed = false;
    try {
        if (active == mc_cmd) {
            code = cmd_mc(in, semantics, mc_algo, cap, rep);
        } else if (active == sat_cmd) {
            code = cmd_sat(in, semantics, sat_algo, budget, rep);
        } else if (active == params_cmd) {
            code = cmd_params(in, exact_tw, max_exact, rep);
        } else if (active == graph_cmd) {
            code = cmd_graph(in, format, out, rep, printed);
        } else if (active == decomp_cmd) {
            code = cmd_decomp(in, method, max_exact, rep);
        } else if (gen_split->parsed()) {
            code = cmd_gen_setsplit(spec_path, prefix, rep);
        } else if (gen_random->parsed()) {
            code = cmd_gen_random(rcfg, logic, rep);
        } else {
            code = cmd_translate(in, tr_out, rep);
        }
    } catch (const Failure& f) {
        rep.fail(f);
        code = f.code;
        err << "teamlog: " << f.message << '\n';
    } catch (const ResourceLimit& e) {
        rep.fail({kResource, "resource_limit", e.what()});
        code = kResource;
        err << "teamlog: " << e.what() << '\n';
    } catch (const InapplicableEngine& e) {
        rep.fail({kUsage, "inapplicable_engine", e.what()});
        code = kUsage;
        err << "teamlog: " << e.what() << '\n';
    } catch (const ParseError& e) {
        rep.fail({kUsage, "parse", e.what()});
        code = kUsage;
        err << "teamlog: " << e.what() << '\n';
    } catch (const json::exception& e) {
        rep.fail({kUsage, "parse", e.what()});
        code = kUsage;
        err << "teamlog: " << e.what() << '\n';
    } catch (const Error& e) {
        rep.fail({kUsage, "input", e.what()});
        code = kUsage;
        err << "teamlog: " << e.what() << '\n';
    }
    if (!printed) rep.emit(out, pretty);
    return code;
}

}  // namespace teamlog::cli
