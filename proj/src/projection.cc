#include "projection.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

using namespace std;
using task_model::EffectOutcome;
using task_model::FactSet;
using task_model::GroundAction;
using task_model::SignedVec;

namespace projection {

Pattern make_pattern(const vector<int> &indices, int num_facts) {
    set<int> seen;
    for (int i : indices) {
        if (i < 0 || i >= num_facts)
            throw invalid_argument("pattern: fact index " + std::to_string(i) + " out of range");
        if (!seen.insert(i).second)
            throw invalid_argument("pattern: duplicate fact index " + std::to_string(i));
    }
    return Pattern{indices};
}

Pattern parse_pattern(const string &spec, const task_model::FactTable &facts) {
    vector<string> tokens;
    string current;
    int depth = 0;
    for (char c : spec) {
        if (c == '(')
            ++depth;
        else if (c == ')')
            --depth;
        if (c == ',' && depth == 0) {
            tokens.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    tokens.push_back(current);

    vector<int> indices;
    for (string token : tokens) {
        size_t begin = token.find_first_not_of(" \t");
        size_t end = token.find_last_not_of(" \t");
        if (begin == string::npos)
            continue;
        token = token.substr(begin, end - begin + 1);
        bool numeric = all_of(token.begin(), token.end(),
                              [](char c) { return isdigit(static_cast<unsigned char>(c)); });
        if (numeric) {
            indices.push_back(stoi(token));
        } else {
            auto idx = facts.index_of(token);
            if (!idx)
                throw invalid_argument("pattern: unknown fact '" + token + "'");
            indices.push_back(*idx);
        }
    }
    return make_pattern(indices, facts.size());
}

State project_state(const State &s, const Pattern &p) {
    State out(p.size());
    for (int i = 0; i < p.size(); ++i)
        out.set(i, s.test(p.fact_indices[i]));
    return out;
}

SignedVec project_signed(const SignedVec &v, const Pattern &p) {
    SignedVec out(p.size());
    for (int i = 0; i < p.size(); ++i)
        out[i] = v[p.fact_indices[i]];
    return out;
}

namespace {

FactSet project_fact_set(const FactSet &facts, const vector<int> &remap) {
    vector<int> out;
    for (int f : facts)
        if (remap[f] >= 0)
            out.push_back(remap[f]);
    return task_model::make_fact_set(move(out));
}

}  // namespace

AbstractTask project_task(const PlanningTask &t, const Pattern &p) {
    task_model::ValidationReport report = task_model::validate(t);
    if (!report.ok())
        throw invalid_argument("project_task: task fails validation: " + report.problems.front());
    make_pattern(p.fact_indices, t.facts.size());

    vector<string> kept_names;
    for (int f : p.fact_indices)
        kept_names.push_back(t.facts.name(f));
    vector<int> remap(t.facts.size(), -1);
    for (int i = 0; i < p.size(); ++i)
        remap[p.fact_indices[i]] = i;

    AbstractTask at;
    at.pattern = p;
    at.task.facts = task_model::FactTable(kept_names);
    at.task.init = project_state(t.init, p);
    at.task.goal = project_fact_set(t.goal, remap);
    for (const GroundAction &a : t.actions) {
        GroundAction abstract_action;
        abstract_action.name = a.name;
        abstract_action.cost = a.cost;
        abstract_action.pre = project_fact_set(a.pre, remap);
        bool annihilated = true;
        for (const EffectOutcome &o : a.outcomes) {
            EffectOutcome projected;
            projected.add = project_fact_set(o.add, remap);
            projected.del = project_fact_set(o.del, remap);
            projected.prob = o.prob;
            annihilated &= projected.add.empty() && projected.del.empty();
            abstract_action.outcomes.push_back(move(projected));
        }
        if (!annihilated)
            at.task.actions.push_back(move(abstract_action));
    }

    // Projection can leave only single-outcome actions standing; the flavor
    // follows the surviving actions, not the source task.
    bool all_single = true;
    for (const GroundAction &a : at.task.actions)
        all_single &= a.outcomes.size() == 1;
    at.task.flavor = all_single ? task_model::Flavor::classical : task_model::Flavor::probabilistic;

    report = task_model::validate(at.task);
    if (!report.ok())
        throw logic_error("project_task: abstract task fails validation: " + report.problems.front());
    return at;
}

ExplicitMdp abstract_graph(const AbstractTask &at, const statespace::ExpandOptions &options) {
    return statespace::expand(at.task, options);
}

mdp_abstraction::Partition partition_from_pattern(const ExplicitMdp &m, const Pattern &p) {
    make_pattern(p.fact_indices, static_cast<int>(m.fact_names.size()));
    map<State, int> class_ids;
    vector<int> class_of;
    for (const State &s : m.states) {
        State projected = project_state(s, p);
        auto [it, inserted] = class_ids.emplace(move(projected), static_cast<int>(class_ids.size()));
        class_of.push_back(it->second);
    }
    return mdp_abstraction::make_partition(class_of);
}

mdp_abstraction::Partition partition_aligned(const ExplicitMdp &m, const ExplicitMdp &abstract_m,
                                             const Pattern &p) {
    make_pattern(p.fact_indices, static_cast<int>(m.fact_names.size()));
    map<State, int> abstract_index;
    for (int i = 0; i < abstract_m.num_states(); ++i)
        abstract_index[abstract_m.states[i]] = i;

    vector<int> class_of;
    set<int> seen;
    for (const State &s : m.states) {
        State projected = project_state(s, p);
        auto it = abstract_index.find(projected);
        if (it == abstract_index.end())
            throw invalid_argument("partition_aligned: projection " + projected.to_string() +
                                   " has no state in the abstract graph");
        class_of.push_back(it->second);
        seen.insert(it->second);
    }
    for (int i = 0; i < abstract_m.num_states(); ++i)
        if (!seen.count(i))
            throw invalid_argument("partition_aligned: abstract state " + abstract_m.state_names[i] +
                                   " has no concrete preimage");
    return mdp_abstraction::make_partition(class_of);
}

mdp_abstraction::Verdict check_linearity(const PlanningTask &t, const Pattern &p, int samples,
                                         unsigned seed) {
    make_pattern(p.fact_indices, t.facts.size());
    auto check_state = [&](const State &s) -> optional<mdp_abstraction::Witness> {
        State projected = project_state(s, p);
        for (const GroundAction &a : t.actions) {
            if (!task_model::applicable(s, a))
                continue;
            for (size_t oi = 0; oi < a.outcomes.size(); ++oi) {
                const EffectOutcome &o = a.outcomes[oi];
                State lhs = project_state(task_model::apply(s, a, o), p);
                SignedVec delta = task_model::effect_delta(o, t.facts.size());
                State rhs = task_model::clamp(
                    task_model::state_plus_delta(projected, project_signed(delta, p)));
                if (lhs == rhs)
                    continue;
                mdp_abstraction::Witness w;
                w.action = a.name;
                w.state1 = s.to_string();
                w.detail = "outcome " + std::to_string(oi) + ": projected successor " +
                           lhs.to_string() + " differs from projected-delta image " + rhs.to_string();
                return w;
            }
        }
        return nullopt;
    };

    ExplicitMdp m = statespace::expand(t);
    for (const State &s : m.states)
        if (auto w = check_state(s))
            return mdp_abstraction::Verdict::fail(move(*w));

    mt19937 rng(seed);
    bernoulli_distribution coin(0.5);
    for (int i = 0; i < samples; ++i) {
        State s(t.facts.size());
        for (int f = 0; f < t.facts.size(); ++f)
            s.set(f, coin(rng));
        if (auto w = check_state(s))
            return mdp_abstraction::Verdict::fail(move(*w));
    }
    return mdp_abstraction::Verdict::ok();
}

mdp_abstraction::Verdict check_no_ambiguity(const ExplicitMdp &m, const mdp_abstraction::Partition &p) {
    return mdp_abstraction::check_representative_independence(m, p);
}

}  // namespace projection
