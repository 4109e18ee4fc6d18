#include "cli.h"

#include "mdp_abstraction.h"
#include "pdb.h"
#include "pddl_frontend.h"
#include "projection.h"
#include "rational.h"
#include "solvers.h"
#include "statespace.h"
#include "task_model.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cli {
namespace {

using json = nlohmann::ordered_json;
using rationals::Rational;
using statespace::ExplicitMdp;
using task_model::PlanningTask;

struct Options {
    std::string command;
    std::string subcommand;
    std::string domain_path;
    std::string problem_path;
    std::string graph_path;
    std::string pattern_spec;
    std::string gamma_text;
    std::string check_framework = "armdp";
    std::string solve_framework = "planning";
    std::string format;
    std::string out_path;
    std::string pdb_path;
    std::string state_bits;
    std::size_t max_states = 0;
    int samples = 0;
    double eps = 1e-9;
    bool absorb_goals = true;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t state_cap(const Options &opt) {
    if (opt.max_states > 0)
        return opt.max_states;
    if (const char *env = std::getenv("PABS_STATE_CAP")) {
        std::string text(env);
        std::size_t pos = 0;
        unsigned long long cap = 0;
        try {
            cap = std::stoull(text, &pos);
        } catch (const std::exception &) {
            pos = std::string::npos;
        }
        if (pos != text.size() || cap == 0)
            throw std::invalid_argument("PABS_STATE_CAP is not a positive integer: " + text);
        return static_cast<std::size_t>(cap);
    }
    return statespace::ExpandOptions{}.max_states;
}

statespace::ExpandOptions expand_options(const Options &opt) {
    statespace::ExpandOptions eo;
    eo.max_states = state_cap(opt);
    if (!opt.gamma_text.empty())
        eo.gamma = rationals::parse(opt.gamma_text);
    return eo;
}

PlanningTask load_task(const Options &opt) {
    if (opt.domain_path.empty() || opt.problem_path.empty())
        throw std::invalid_argument("this command needs both --domain and --problem");
    pddl::Domain domain = pddl::parse_domain(read_file(opt.domain_path));
    pddl::ObjectUniverse universe = pddl::parse_problem(read_file(opt.problem_path), domain);
    return pddl::ground(domain, universe, {});
}

struct Inputs {
    std::optional<PlanningTask> task;
    ExplicitMdp mdp;
};

Inputs load_inputs(const Options &opt) {
    bool has_graph = !opt.graph_path.empty();
    bool has_task = !opt.domain_path.empty() || !opt.problem_path.empty();
    if (has_graph && has_task)
        throw std::invalid_argument("--graph excludes --domain/--problem");
    if (!has_graph && !has_task)
        throw std::invalid_argument("give --domain and --problem, or --graph");
    Inputs in;
    if (has_graph) {
        in.mdp = statespace::load_graph_file(opt.graph_path);
        if (!opt.gamma_text.empty()) {
            Rational gamma = rationals::parse(opt.gamma_text);
            if (gamma < 0 || gamma >= 1)
                throw std::invalid_argument("gamma must lie in [0, 1)");
            in.mdp.gamma = gamma;
        }
    } else {
        in.task = load_task(opt);
        in.mdp = statespace::expand(*in.task, expand_options(opt));
    }
    return in;
}

projection::Pattern pattern_for(const Options &opt, const ExplicitMdp &m) {
    if (opt.pattern_spec.empty())
        throw std::invalid_argument("this command needs --pattern");
    task_model::FactTable facts(m.fact_names);
    if (facts.size() == 0)
        throw std::invalid_argument("the input carries no fact labels, patterns need labeled states");
    return projection::parse_pattern(opt.pattern_spec, facts);
}

projection::Pattern task_pattern(const Options &opt, const PlanningTask &t) {
    if (opt.pattern_spec.empty())
        throw std::invalid_argument("this command needs --pattern");
    return projection::parse_pattern(opt.pattern_spec, t.facts);
}

task_model::State state_from_bits(const std::string &bits, int num_facts) {
    if (static_cast<int>(bits.size()) != num_facts)
        throw std::invalid_argument("state has " + std::to_string(bits.size()) + " bits, the task has " +
                                    std::to_string(num_facts) + " facts");
    for (char c : bits)
        if (c != '0' && c != '1')
            throw std::invalid_argument("state bits must be 0 or 1");
    return task_model::State::from_bits(bits);
}

void emit(const Options &opt, std::ostream &out, const std::string &text) {
    if (opt.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opt.out_path, std::ios::binary);
    if (!file)
        throw std::invalid_argument("cannot write file: " + opt.out_path);
    file << text;
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

json new_report(const Options &opt) {
    json j;
    j["command"] = opt.command;
    if (!opt.subcommand.empty())
        j["subcommand"] = opt.subcommand;
    return j;
}

json witness_json(const mdp_abstraction::Witness &w) {
    json j = json::object();
    if (!w.sbar.empty())
        j["sbar"] = w.sbar;
    if (!w.action.empty())
        j["action"] = w.action;
    if (!w.sbar_prime.empty())
        j["sbar_prime"] = w.sbar_prime;
    if (!w.state1.empty())
        j["state1"] = w.state1;
    if (!w.state2.empty())
        j["state2"] = w.state2;
    if (!w.detail.empty())
        j["detail"] = w.detail;
    return j;
}

json check_json(const std::string &name, const std::string &anchor, const mdp_abstraction::Verdict &v) {
    json j;
    j["check"] = name;
    j["anchor"] = anchor;
    j["result"] = v.pass ? "pass" : "fail";
    if (v.witness)
        j["witness"] = witness_json(*v.witness);
    return j;
}

int finish_report(const Options &opt, std::ostream &out, json &report, const json &checks) {
    bool all_pass = true;
    for (const auto &c : checks)
        all_pass = all_pass && c.at("result") == "pass";
    report["checks"] = checks;
    report["result"] = all_pass ? "pass" : "fail";
    emit(opt, out, dump(report));
    return all_pass ? 0 : 1;
}

json partition_json(const mdp_abstraction::Partition &p, const ExplicitMdp &m) {
    json j = json::array();
    for (int c = 0; c < p.num_classes(); ++c) {
        json cj;
        cj["name"] = p.class_names[c];
        json members = json::array();
        for (int s : p.members[c])
            members.push_back(m.state_names[s]);
        cj["members"] = members;
        j.push_back(cj);
    }
    return j;
}

json omega_json(const mdp_abstraction::WfaWeights &w, const mdp_abstraction::Partition &p, const ExplicitMdp &m) {
    json j = json::object();
    for (int c = 0; c < p.num_classes(); ++c) {
        json cj = json::object();
        for (const auto &[s, value] : w.omega[c])
            cj[m.state_names[s]] = rationals::to_string(value);
        j[p.class_names[c]] = cj;
    }
    return j;
}

json xi_json(const mdp_abstraction::ArmdpWeights &x, const mdp_abstraction::Partition &p, const ExplicitMdp &m) {
    json j = json::object();
    for (const auto &[key, dist] : x.xi) {
        json dj = json::object();
        for (const auto &[s, value] : dist)
            dj[m.state_names[s]] = rationals::to_string(value);
        j[p.class_names[key.first] + "," + m.action_names[key.second]] = dj;
    }
    return j;
}

std::string omega_equation(const ExplicitMdp &m, const std::vector<int> &members) {
    std::string eq;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i > 0)
            eq += "+";
        eq += "ω(" + m.state_names[members[i]] + ")";
    }
    return eq + " = 1";
}

json constraint_json(const ExplicitMdp &m, const mdp_abstraction::Partition &p,
                     const std::pair<mdp_abstraction::CSetKey, std::vector<int>> &constraint) {
    json j;
    j["action"] = m.action_names[constraint.first.action];
    j["target"] = p.class_names[constraint.first.target_cls];
    json members = json::array();
    for (int s : constraint.second)
        members.push_back(m.state_names[s]);
    j["members"] = members;
    j["equation"] = omega_equation(m, constraint.second);
    return j;
}

json conflict_json(const ExplicitMdp &m, const mdp_abstraction::Partition &p,
                   const mdp_abstraction::WfaConflict &conflict) {
    json j;
    j["class"] = p.class_names[conflict.cls];
    json constraints = json::array();
    for (const auto &c : conflict.constraints)
        constraints.push_back(constraint_json(m, p, c));
    j["constraints"] = constraints;
    json core = json::array();
    for (const auto &c : conflict.minimal_core)
        core.push_back(constraint_json(m, p, c));
    j["minimal_core"] = core;
    return j;
}

json intervals_json(const mdp_abstraction::AbstractMdp &am) {
    json rows = json::array();
    for (const auto &[key, row] : am.interval_rows) {
        json rj;
        rj["class"] = am.class_names[key.first];
        rj["action"] = am.action_names[key.second];
        json probs = json::object();
        for (const auto &[target, bounds] : row.prob)
            probs[am.class_names[target]] =
                json::array({rationals::to_string(bounds.first), rationals::to_string(bounds.second)});
        rj["prob"] = probs;
        rj["reward"] =
            json::array({rationals::to_string(row.reward.first), rationals::to_string(row.reward.second)});
        rows.push_back(rj);
    }
    return rows;
}

json fact_names_json(const task_model::FactSet &fs, const task_model::FactTable &facts) {
    json j = json::array();
    for (int f : fs)
        j.push_back(facts.name(f));
    return j;
}

const char *kConnectionAnchor = "abstract transitions mirror member connections";
const char *kWeightAnchor = "per-action weights derive from C-sets";

int cmd_ground(const Options &opt, std::ostream &out) {
    PlanningTask t = load_task(opt);
    std::string format = opt.format.empty() ? "text" : opt.format;
    std::string flavor = t.flavor == task_model::Flavor::classical ? "classical" : "probabilistic";
    if (format == "json") {
        json j;
        j["facts"] = t.facts.names();
        j["init"] = t.init.to_string();
        j["goal"] = fact_names_json(t.goal, t.facts);
        j["flavor"] = flavor;
        json actions = json::array();
        for (const auto &a : t.actions) {
            json aj;
            aj["name"] = a.name;
            aj["cost"] = a.cost;
            aj["pre"] = fact_names_json(a.pre, t.facts);
            json outcomes = json::array();
            for (const auto &o : a.outcomes) {
                json oj;
                oj["prob"] = rationals::to_string(o.prob);
                oj["add"] = fact_names_json(o.add, t.facts);
                oj["del"] = fact_names_json(o.del, t.facts);
                outcomes.push_back(oj);
            }
            aj["outcomes"] = outcomes;
            actions.push_back(aj);
        }
        j["actions"] = actions;
        emit(opt, out, dump(j));
    } else if (format == "text") {
        std::ostringstream os;
        os << "facts (" << t.facts.size() << "):";
        for (const auto &name : t.facts.names())
            os << " " << name;
        os << "\n";
        os << "init: " << t.init.to_string() << "\n";
        os << "goal:";
        for (int g : t.goal)
            os << " " << t.facts.name(g);
        os << "\n";
        os << "flavor: " << flavor << "\n";
        os << "actions (" << t.actions.size() << "):\n";
        for (const auto &a : t.actions) {
            os << "  " << a.name;
            if (a.cost != 1)
                os << " cost " << a.cost;
            os << "\n";
        }
        emit(opt, out, os.str());
    } else {
        throw std::invalid_argument("unknown format: " + format);
    }
    return 0;
}

int cmd_expand(const Options &opt, std::ostream &out) {
    Inputs in = load_inputs(opt);
    std::string format = opt.format.empty() ? "json" : opt.format;
    if (format == "json") {
        emit(opt, out, statespace::save_graph(in.mdp));
    } else if (format == "dot") {
        emit(opt, out, statespace::to_dot(in.mdp));
    } else if (format == "text") {
        int rows = 0;
        for (int s = 0; s < in.mdp.num_states(); ++s)
            for (int a = 0; a < in.mdp.num_actions(); ++a)
                rows += in.mdp.applicable(s, a) ? 1 : 0;
        std::ostringstream os;
        os << "states: " << in.mdp.num_states() << "\n";
        os << "goal states: " << std::count(in.mdp.goal.begin(), in.mdp.goal.end(), true) << "\n";
        os << "actions: " << in.mdp.num_actions() << "\n";
        os << "transition rows: " << rows << "\n";
        os << "deterministic: " << (statespace::is_deterministic(in.mdp) ? "yes" : "no") << "\n";
        os << "gamma: " << rationals::to_string(in.mdp.gamma) << "\n";
        emit(opt, out, os.str());
    } else {
        throw std::invalid_argument("unknown format: " + format);
    }
    return 0;
}

int cmd_abstract(const Options &opt, std::ostream &out) {
    Inputs in = load_inputs(opt);
    if (!in.task)
        throw std::invalid_argument("abstract projects a task, give --domain and --problem");
    projection::Pattern pattern = pattern_for(opt, in.mdp);
    std::string format = opt.format.empty() ? "json" : opt.format;
    if (format == "dot") {
        auto part = projection::partition_from_pattern(in.mdp, pattern);
        emit(opt, out, mdp_abstraction::to_dot(in.mdp, part));
        return 0;
    }
    projection::AbstractTask at = projection::project_task(*in.task, pattern);
    ExplicitMdp abstract = projection::abstract_graph(at, expand_options(opt));
    if (format == "json") {
        emit(opt, out, statespace::save_graph(abstract));
    } else if (format == "text") {
        std::ostringstream os;
        os << "pattern (" << pattern.size() << "):";
        for (int f : pattern.fact_indices)
            os << " " << in.task->facts.name(f);
        os << "\n";
        os << "abstract init: " << at.task.init.to_string() << "\n";
        os << "abstract goal:";
        for (int g : at.task.goal)
            os << " " << at.task.facts.name(g);
        os << "\n";
        os << "actions kept: " << at.task.actions.size() << " of " << in.task->actions.size() << "\n";
        os << "abstract states: " << abstract.num_states() << "\n";
        emit(opt, out, os.str());
    } else {
        throw std::invalid_argument("unknown format: " + format);
    }
    return 0;
}

int cmd_check(const Options &opt, std::ostream &out) {
    const std::string &mode = opt.subcommand;
    Inputs in = load_inputs(opt);
    projection::Pattern pattern = pattern_for(opt, in.mdp);
    json report = new_report(opt);
    json checks = json::array();

    if (mode == "props") {
        if (in.task) {
            auto lin = projection::check_linearity(*in.task, pattern, opt.samples);
            checks.push_back(check_json("linearity", "projection commutes with effect application", lin));
        }
        auto part = projection::partition_from_pattern(in.mdp, pattern);
        report["partition"] = partition_json(part, in.mdp);
        auto ri = mdp_abstraction::check_representative_independence(in.mdp, part);
        checks.push_back(
            check_json("representative_independence", "class members project actions identically", ri));
        return finish_report(opt, out, report, checks);
    }

    if (mode == "equiv") {
        if (!in.task)
            throw std::invalid_argument("check equiv rebuilds a projected task, give --domain and --problem");
        projection::AbstractTask at = projection::project_task(*in.task, pattern);
        ExplicitMdp abstract = projection::abstract_graph(at, expand_options(opt));
        auto part = projection::partition_aligned(in.mdp, abstract, pattern);
        const std::string &fw = opt.check_framework;
        report["framework"] = fw;
        report["partition"] = partition_json(part, in.mdp);
        mdp_abstraction::AbstractMdp am;
        if (fw == "wfa") {
            auto csets = mdp_abstraction::compute_csets(in.mdp, part);
            auto fz = mdp_abstraction::wfa_feasibility(csets, part);
            if (!fz.feasible) {
                json fj;
                fj["check"] = "wfa_feasibility";
                fj["anchor"] = "per-class weights normalize on every C-set";
                fj["result"] = "fail";
                json w;
                w["detail"] = "no per-class weighting normalizes on every C-set";
                json conflicts = json::array();
                for (const auto &c : fz.conflicts)
                    conflicts.push_back(conflict_json(in.mdp, part, c));
                w["conflicts"] = conflicts;
                fj["witness"] = w;
                checks.push_back(fj);
                return finish_report(opt, out, report, checks);
            }
            am = mdp_abstraction::build_wfa(in.mdp, part, fz.weights);
        } else if (fw == "armdp") {
            auto csets = mdp_abstraction::compute_csets(in.mdp, part);
            mdp_abstraction::ArmdpWeights xi;
            try {
                xi = mdp_abstraction::default_xi(in.mdp, part, csets);
            } catch (const mdp_abstraction::AmbiguityError &e) {
                mdp_abstraction::Witness w;
                w.detail = e.what();
                checks.push_back(check_json("weight_derivation", kWeightAnchor,
                                            mdp_abstraction::Verdict::fail(w)));
                return finish_report(opt, out, report, checks);
            }
            am = mdp_abstraction::build_armdp(in.mdp, part, xi);
        } else if (fw == "abpmdp") {
            try {
                am = mdp_abstraction::select_max(mdp_abstraction::build_abpmdp(in.mdp, part));
            } catch (const mdp_abstraction::ModelError &e) {
                mdp_abstraction::Witness w;
                w.detail = e.what();
                checks.push_back(check_json("weight_derivation", kWeightAnchor,
                                            mdp_abstraction::Verdict::fail(w)));
                return finish_report(opt, out, report, checks);
            }
        } else {
            throw std::invalid_argument("unknown framework: " + fw);
        }
        auto eq = mdp_abstraction::check_equivalence(abstract, am);
        checks.push_back(check_json("equivalence", "the framework rebuilds the projection abstraction", eq));
        return finish_report(opt, out, report, checks);
    }

    auto part = projection::partition_from_pattern(in.mdp, pattern);
    report["partition"] = partition_json(part, in.mdp);
    auto csets = mdp_abstraction::compute_csets(in.mdp, part);

    if (mode == "wfa") {
        auto fz = mdp_abstraction::wfa_feasibility(csets, part);
        json fj;
        fj["check"] = "wfa_feasibility";
        fj["anchor"] = "per-class weights normalize on every C-set";
        fj["result"] = fz.feasible ? "pass" : "fail";
        if (!fz.feasible) {
            json w;
            w["detail"] = "no per-class weighting normalizes on every C-set";
            json conflicts = json::array();
            for (const auto &c : fz.conflicts)
                conflicts.push_back(conflict_json(in.mdp, part, c));
            w["conflicts"] = conflicts;
            fj["witness"] = w;
        }
        checks.push_back(fj);
        if (fz.feasible) {
            report["omega"] = omega_json(fz.weights, part, in.mdp);
            auto am = mdp_abstraction::build_wfa(in.mdp, part, fz.weights);
            checks.push_back(check_json("connection_preserving", kConnectionAnchor,
                                        mdp_abstraction::check_connection_preserving(in.mdp, part, am)));
        }
        return finish_report(opt, out, report, checks);
    }

    if (mode == "armdp") {
        mdp_abstraction::ArmdpWeights xi;
        try {
            xi = mdp_abstraction::default_xi(in.mdp, part, csets);
        } catch (const mdp_abstraction::AmbiguityError &e) {
            mdp_abstraction::Witness w;
            w.detail = e.what();
            checks.push_back(
                check_json("weight_derivation", kWeightAnchor, mdp_abstraction::Verdict::fail(w)));
            return finish_report(opt, out, report, checks);
        }
        checks.push_back(check_json("weight_derivation", kWeightAnchor, mdp_abstraction::Verdict::ok()));
        report["xi"] = xi_json(xi, part, in.mdp);
        auto am = mdp_abstraction::build_armdp(in.mdp, part, xi);
        report["deterministic"] = mdp_abstraction::check_deterministic(am).pass;
        checks.push_back(check_json("connection_preserving", kConnectionAnchor,
                                    mdp_abstraction::check_connection_preserving(in.mdp, part, am)));
        return finish_report(opt, out, report, checks);
    }

    if (mode == "abpmdp") {
        auto am = mdp_abstraction::build_abpmdp(in.mdp, part);
        report["intervals"] = intervals_json(am);
        checks.push_back(check_json("connection_preserving", kConnectionAnchor,
                                    mdp_abstraction::check_connection_preserving(in.mdp, part, am)));
        return finish_report(opt, out, report, checks);
    }

    throw std::invalid_argument("unknown check mode: " + mode);
}

int cmd_pdb(const Options &opt, std::ostream &out) {
    PlanningTask t = load_task(opt);
    if (opt.subcommand == "build") {
        projection::Pattern pattern = task_pattern(opt, t);
        pdb::PatternDatabase db = pdb::build_pdb(t, pattern);
        if (opt.out_path.empty())
            throw std::invalid_argument("pdb build needs --out");
        pdb::save_pdb(db, opt.out_path);
        std::size_t entries = db.sparse_table.size();
        if (db.dense)
            entries = static_cast<std::size_t>(
                std::count_if(db.dense_table.begin(), db.dense_table.end(),
                              [](solvers::Cost c) { return c != solvers::kInfiniteCost; }));
        json j = new_report(opt);
        j["pattern"] = db.fact_names;
        j["entries"] = entries;
        j["dense"] = db.dense;
        j["file"] = opt.out_path;
        out << dump(j);
        return 0;
    }
    if (!opt.pdb_path.empty() && !opt.pattern_spec.empty())
        throw std::invalid_argument("give --pdb or --pattern, not both");
    pdb::PatternDatabase db;
    if (!opt.pdb_path.empty()) {
        db = pdb::load_pdb(opt.pdb_path);
        pdb::bind_to_task(db, t);
    } else {
        db = pdb::build_pdb(t, task_pattern(opt, t));
    }
    task_model::State s = opt.state_bits.empty() ? t.init : state_from_bits(opt.state_bits, t.facts.size());
    solvers::Cost value = pdb::lookup(db, s);
    json j = new_report(opt);
    j["state"] = s.to_string();
    j["pattern"] = db.fact_names;
    if (value == solvers::kInfiniteCost)
        j["value"] = "inf";
    else
        j["value"] = value;
    out << dump(j);
    return 0;
}

int cmd_vi(const Options &opt, std::ostream &out) {
    Inputs in = load_inputs(opt);
    const std::string &fw = opt.solve_framework;
    json report = new_report(opt);
    report["framework"] = fw;

    ExplicitMdp model;
    if (opt.pattern_spec.empty()) {
        if (fw != "planning")
            throw std::invalid_argument("framework " + fw + " needs --pattern");
        model = in.mdp;
    } else {
        projection::Pattern pattern = pattern_for(opt, in.mdp);
        if (fw == "planning") {
            if (!in.task)
                throw std::invalid_argument("the planning framework projects a task, give --domain and --problem");
            model = projection::abstract_graph(projection::project_task(*in.task, pattern), expand_options(opt));
        } else {
            auto part = projection::partition_from_pattern(in.mdp, pattern);
            mdp_abstraction::AbstractMdp am;
            if (fw == "wfa") {
                auto fz = mdp_abstraction::wfa_feasibility(mdp_abstraction::compute_csets(in.mdp, part), part);
                if (!fz.feasible) {
                    report["result"] = "fail";
                    report["error"] = "no per-class weighting normalizes on every C-set; run check wfa for the conflict";
                    emit(opt, out, dump(report));
                    return 1;
                }
                am = mdp_abstraction::build_wfa(in.mdp, part, fz.weights);
            } else if (fw == "armdp") {
                auto csets = mdp_abstraction::compute_csets(in.mdp, part);
                am = mdp_abstraction::build_armdp(in.mdp, part, mdp_abstraction::default_xi(in.mdp, part, csets));
            } else if (fw == "abpmdp-max") {
                am = mdp_abstraction::select_max(mdp_abstraction::build_abpmdp(in.mdp, part));
            } else {
                throw std::invalid_argument("unknown framework: " + fw);
            }
            model = mdp_abstraction::to_explicit(am);
        }
    }

    solvers::ViOptions vo;
    vo.eps = opt.eps;
    vo.absorb_goals = opt.absorb_goals;
    auto res = solvers::value_iteration(model, vo);
    report["gamma"] = rationals::to_string(model.gamma);
    report["states"] = model.state_names;
    report["values"] = res.values;
    json policy = json::array();
    for (int a : res.policy)
        policy.push_back(a < 0 ? json(nullptr) : json(model.action_names[a]));
    report["policy"] = policy;
    report["iterations"] = res.iterations;
    report["residual"] = res.residuals.empty() ? 0.0 : res.residuals.back();
    report["converged"] = res.converged;
    report["result"] = res.converged ? "pass" : "fail";
    emit(opt, out, dump(report));
    return res.converged ? 0 : 1;
}

int cmd_ivi(const Options &opt, std::ostream &out) {
    Inputs in = load_inputs(opt);
    projection::Pattern pattern = pattern_for(opt, in.mdp);
    auto part = projection::partition_from_pattern(in.mdp, pattern);
    auto am = mdp_abstraction::build_abpmdp(in.mdp, part);
    solvers::ViOptions vo;
    vo.eps = opt.eps;
    vo.absorb_goals = opt.absorb_goals;
    auto res = solvers::interval_value_iteration(am, vo);
    json report = new_report(opt);
    report["framework"] = "abpmdp";
    report["gamma"] = rationals::to_string(am.gamma);
    report["classes"] = am.class_names;
    report["lower"] = res.lower;
    report["upper"] = res.upper;
    report["iterations"] = res.iterations;
    report["residual"] = res.residuals.empty() ? 0.0 : res.residuals.back();
    report["converged"] = res.converged;
    report["result"] = res.converged ? "pass" : "fail";
    emit(opt, out, dump(report));
    return res.converged ? 0 : 1;
}

int cmd_astar(const Options &opt, std::ostream &out) {
    PlanningTask t = load_task(opt);
    if (!opt.pdb_path.empty() && !opt.pattern_spec.empty())
        throw std::invalid_argument("give --pdb or --pattern, not both");
    solvers::Heuristic h = [](const task_model::State &) { return solvers::Cost(0); };
    std::string heuristic = "blind";
    if (!opt.pdb_path.empty()) {
        pdb::PatternDatabase db = pdb::load_pdb(opt.pdb_path);
        pdb::bind_to_task(db, t);
        std::vector<pdb::PatternDatabase> dbs;
        dbs.push_back(std::move(db));
        h = pdb::max_combine(std::move(dbs));
        heuristic = "pdb";
    } else if (!opt.pattern_spec.empty()) {
        std::vector<pdb::PatternDatabase> dbs;
        dbs.push_back(pdb::build_pdb(t, task_pattern(opt, t)));
        h = pdb::max_combine(std::move(dbs));
        heuristic = "pdb";
    }
    auto res = solvers::astar_search(t, h);
    json report = new_report(opt);
    report["heuristic"] = heuristic;
    report["solved"] = res.solved;
    if (res.solved) {
        report["cost"] = res.cost;
        report["plan"] = res.plan.steps;
    }
    report["expanded"] = res.expanded;
    report["generated"] = res.generated;
    report["result"] = res.solved ? "pass" : "fail";
    emit(opt, out, dump(report));
    return res.solved ? 0 : 1;
}

int cmd_solve(const Options &opt, std::ostream &out) {
    if (opt.subcommand == "astar")
        return cmd_astar(opt, out);
    if (opt.subcommand == "ivi")
        return cmd_ivi(opt, out);
    return cmd_vi(opt, out);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options opt;
    CLI::App app{"projection abstractions of planning tasks as discounted MDPs"};
    app.name("pabs");
    app.require_subcommand(1);

    auto set_cmd = [&opt](const std::string &command, const std::string &subcommand) {
        return [&opt, command, subcommand]() {
            opt.command = command;
            opt.subcommand = subcommand;
        };
    };
    auto add_task_opts = [&](CLI::App *cmd) {
        cmd->add_option("--domain", opt.domain_path, "domain PDDL file");
        cmd->add_option("--problem", opt.problem_path, "problem PDDL file");
    };
    auto add_graph_opt = [&](CLI::App *cmd) {
        cmd->add_option("--graph", opt.graph_path, "explicit graph JSON file");
    };
    auto add_gamma = [&](CLI::App *cmd) {
        cmd->add_option("--gamma", opt.gamma_text, "discount factor, a rational like 9/10");
    };
    auto add_pattern = [&](CLI::App *cmd, bool required) {
        auto *o = cmd->add_option("--pattern", opt.pattern_spec, "comma separated fact names or indices");
        if (required)
            o->required();
    };
    auto add_out = [&](CLI::App *cmd) {
        cmd->add_option("--out", opt.out_path, "write the output to this file instead of stdout");
    };
    auto add_max_states = [&](CLI::App *cmd) {
        cmd->add_option("--max-states", opt.max_states, "state cap for expansion");
    };
    auto add_vi_opts = [&](CLI::App *cmd) {
        cmd->add_option("--eps", opt.eps, "convergence tolerance");
        cmd->add_flag("--absorb-goals,!--no-absorb-goals", opt.absorb_goals, "treat goal states as absorbing");
    };

    auto *ground = app.add_subcommand("ground", "ground a PDDL task and print it");
    add_task_opts(ground);
    ground->add_option("--format", opt.format, "text|json");
    add_out(ground);
    ground->callback(set_cmd("ground", ""));

    auto *expand = app.add_subcommand("expand", "expand the reachable states into an explicit MDP");
    add_task_opts(expand);
    add_graph_opt(expand);
    add_gamma(expand);
    add_max_states(expand);
    expand->add_option("--format", opt.format, "json|dot|text");
    add_out(expand);
    expand->callback(set_cmd("expand", ""));

    auto *abstract_ = app.add_subcommand("abstract", "project the task onto a pattern");
    add_task_opts(abstract_);
    add_pattern(abstract_, true);
    add_gamma(abstract_);
    add_max_states(abstract_);
    abstract_->add_option("--format", opt.format, "json|dot|text");
    add_out(abstract_);
    abstract_->callback(set_cmd("abstract", ""));

    auto *check = app.add_subcommand("check", "verify abstraction properties");
    check->require_subcommand(1);
    auto *check_wfa = check->add_subcommand("wfa", "weight the class members once per class");
    auto *check_armdp = check->add_subcommand("armdp", "weight the class members per action");
    auto *check_abpmdp = check->add_subcommand("abpmdp", "bound transition mass per class pair");
    auto *check_props = check->add_subcommand("props", "projection linearity and representative independence");
    auto *check_equiv = check->add_subcommand("equiv", "compare a framework against the projected task");
    for (CLI::App *c : {check_wfa, check_armdp, check_abpmdp, check_props}) {
        add_task_opts(c);
        add_graph_opt(c);
        add_pattern(c, true);
        add_gamma(c);
        add_max_states(c);
        add_out(c);
    }
    add_task_opts(check_equiv);
    add_pattern(check_equiv, true);
    add_gamma(check_equiv);
    add_max_states(check_equiv);
    add_out(check_equiv);
    check_equiv->add_option("--framework", opt.check_framework, "wfa|armdp|abpmdp");
    check_props->add_option("--samples", opt.samples, "extra random states for the linearity check");
    check_wfa->callback(set_cmd("check", "wfa"));
    check_armdp->callback(set_cmd("check", "armdp"));
    check_abpmdp->callback(set_cmd("check", "abpmdp"));
    check_props->callback(set_cmd("check", "props"));
    check_equiv->callback(set_cmd("check", "equiv"));

    auto *pdb_cmd = app.add_subcommand("pdb", "build and query pattern databases");
    pdb_cmd->require_subcommand(1);
    auto *pdb_build = pdb_cmd->add_subcommand("build", "build a pattern database and save it");
    add_task_opts(pdb_build);
    add_pattern(pdb_build, true);
    pdb_build->add_option("--out", opt.out_path, "output database file")->required();
    pdb_build->callback(set_cmd("pdb", "build"));
    auto *pdb_query = pdb_cmd->add_subcommand("query", "look up a heuristic value");
    add_task_opts(pdb_query);
    add_pattern(pdb_query, false);
    pdb_query->add_option("--pdb", opt.pdb_path, "database file");
    pdb_query->add_option("--state", opt.state_bits, "state bit string, default the initial state");
    pdb_query->callback(set_cmd("pdb", "query"));

    auto *solve = app.add_subcommand("solve", "solve tasks and abstractions");
    solve->require_subcommand(1);
    auto *solve_vi = solve->add_subcommand("vi", "value iteration");
    add_task_opts(solve_vi);
    add_graph_opt(solve_vi);
    add_pattern(solve_vi, false);
    add_gamma(solve_vi);
    add_max_states(solve_vi);
    add_vi_opts(solve_vi);
    add_out(solve_vi);
    solve_vi->add_option("--framework", opt.solve_framework, "planning|wfa|armdp|abpmdp-max");
    solve_vi->callback(set_cmd("solve", "vi"));
    auto *solve_ivi = solve->add_subcommand("ivi", "interval value iteration on the bounded abstraction");
    add_task_opts(solve_ivi);
    add_graph_opt(solve_ivi);
    add_pattern(solve_ivi, true);
    add_gamma(solve_ivi);
    add_max_states(solve_ivi);
    add_vi_opts(solve_ivi);
    add_out(solve_ivi);
    solve_ivi->callback(set_cmd("solve", "ivi"));
    auto *solve_astar = solve->add_subcommand("astar", "A* search on the concrete task");
    add_task_opts(solve_astar);
    add_pattern(solve_astar, false);
    solve_astar->add_option("--pdb", opt.pdb_path, "heuristic database file");
    add_out(solve_astar);
    solve_astar->callback(set_cmd("solve", "astar"));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (opt.command == "ground")
            return cmd_ground(opt, out);
        if (opt.command == "expand")
            return cmd_expand(opt, out);
        if (opt.command == "abstract")
            return cmd_abstract(opt, out);
        if (opt.command == "check")
            return cmd_check(opt, out);
        if (opt.command == "pdb")
            return cmd_pdb(opt, out);
        if (opt.command == "solve")
            return cmd_solve(opt, out);
        err << "error: no command selected\n";
        return 2;
    } catch (const mdp_abstraction::ModelError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const mdp_abstraction::AmbiguityError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cli
