#include "support.h"

#include "pddl_frontend.h"
#include "rational.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

using rationals::Rational;
using statespace::ExplicitMdp;
using statespace::Row;
using statespace::TransitionEntry;
using task_model::FactSet;
using task_model::GroundAction;
using task_model::PlanningTask;
using task_model::State;
using std::string;
using std::vector;

namespace support {

string data_path(const string &name) { return string(PABS_DATA_DIR) + "/" + name; }

string read_file(const string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

PlanningTask load(const string &domain_file, const string &problem_file) {
    pddl::Domain domain = pddl::parse_domain(read_file(data_path(domain_file)));
    pddl::ObjectUniverse universe = pddl::parse_problem(read_file(data_path(problem_file)), domain);
    return pddl::ground(domain, universe, {});
}

int fact(const task_model::FactTable &facts, const string &name) {
    auto idx = facts.index_of(name);
    if (!idx)
        throw std::runtime_error("fixture fact missing: " + name);
    return *idx;
}

}  // namespace

PlanningTask logistics() { return load("logistics-domain.pddl", "logistics-problem.pddl"); }

PlanningTask logistics_probabilistic() {
    return load("logistics-probabilistic-domain.pddl", "logistics-problem.pddl");
}

projection::Pattern package_pattern(const PlanningTask &t) {
    vector<int> indices = {fact(t.facts, "at(P,L)"), fact(t.facts, "at(P,R)"), fact(t.facts, "in(P,A)"),
                           fact(t.facts, "in(P,B)")};
    return projection::make_pattern(indices, t.facts.size());
}

State sas_state(const PlanningTask &t, const string &label) {
    if (label.size() != 3)
        throw std::runtime_error("state label needs three letters: " + label);
    State s(t.facts.size());
    switch (label[0]) {
    case 'L': s.set(fact(t.facts, "at(P,L)"), true); break;
    case 'R': s.set(fact(t.facts, "at(P,R)"), true); break;
    case 'A': s.set(fact(t.facts, "in(P,A)"), true); break;
    case 'B': s.set(fact(t.facts, "in(P,B)"), true); break;
    default: throw std::runtime_error("bad package position in " + label);
    }
    s.set(fact(t.facts, label[1] == 'L' ? "at(A,L)" : "at(A,R)"), true);
    s.set(fact(t.facts, label[2] == 'L' ? "at(B,L)" : "at(B,R)"), true);
    return s;
}

int state_index(const ExplicitMdp &m, const State &s) {
    for (int i = 0; i < m.num_states(); ++i)
        if (m.states[i] == s)
            return i;
    throw std::runtime_error("state not present: " + s.to_string());
}

PlanningTask random_task(std::mt19937 &rng, const RandomTaskOptions &opt) {
    auto pick = [&rng](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    auto subset = [&](int max_size, const vector<int> &pool) {
        vector<int> out;
        int size = pick(max_size + 1);
        for (int i = 0; i < size && !pool.empty(); ++i)
            out.push_back(pool[pick(static_cast<int>(pool.size()))]);
        return task_model::make_fact_set(std::move(out));
    };

    PlanningTask t;
    vector<string> names;
    vector<int> all_facts;
    for (int f = 0; f < opt.num_facts; ++f) {
        names.push_back("f" + std::to_string(f));
        all_facts.push_back(f);
    }
    t.facts = task_model::FactTable(names);
    t.init = State(opt.num_facts);
    for (int f = 0; f < opt.num_facts; ++f)
        t.init.set(f, pick(2) == 1);
    t.goal = subset(std::max(1, opt.num_facts / 3), all_facts);
    t.flavor = opt.probabilistic ? task_model::Flavor::probabilistic : task_model::Flavor::classical;

    for (int i = 0; i < opt.num_actions; ++i) {
        GroundAction a;
        a.name = "a" + std::to_string(i);
        a.pre = subset(opt.max_pre, all_facts);
        int num_outcomes = 1;
        if (opt.probabilistic) {
            num_outcomes = 1 + pick(opt.max_outcomes);
            if (i == 0)
                num_outcomes = std::max(num_outcomes, 2);
        }
        vector<long long> weights;
        long long total = 0;
        for (int o = 0; o < num_outcomes; ++o) {
            weights.push_back(1 + pick(5));
            total += weights.back();
        }
        for (int o = 0; o < num_outcomes; ++o) {
            task_model::EffectOutcome eff;
            eff.add = subset(opt.max_effect_facts, all_facts);
            vector<int> rest;
            for (int f : all_facts)
                if (!task_model::fact_set_contains(eff.add, f))
                    rest.push_back(f);
            eff.del = subset(opt.max_effect_facts, rest);
            eff.prob = rationals::make(weights[o], total);
            a.outcomes.push_back(std::move(eff));
        }
        t.actions.push_back(std::move(a));
    }
    return t;
}

std::pair<ExplicitMdp, mdp_abstraction::Partition>
random_partitioned_graph(std::mt19937 &rng, const RandomGraphOptions &opt) {
    auto pick = [&rng](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    auto chance = [&rng](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };

    vector<int> class_of;
    for (int c = 0; c < opt.num_classes; ++c) {
        int size = 1 + pick(opt.max_class_size);
        for (int i = 0; i < size; ++i)
            class_of.push_back(c);
    }
    int n = static_cast<int>(class_of.size());

    ExplicitMdp m;
    m.gamma = rationals::make(9, 10);
    for (int s = 0; s < n; ++s) {
        m.state_names.push_back("s" + std::to_string(s));
        m.states.push_back(State(0));
        m.goal.push_back(chance(opt.goal_density));
    }
    for (int a = 0; a < opt.num_actions; ++a) {
        m.action_names.push_back("a" + std::to_string(a));
        m.action_costs.push_back(1);
    }
    m.transitions.assign(n, vector<Row>(opt.num_actions));
    m.rewards.assign(n, vector<Rational>(opt.num_actions, Rational(0)));

    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < opt.num_actions; ++a) {
            if (!chance(opt.row_density))
                continue;
            std::map<int, Rational> mass;
            if (opt.deterministic) {
                mass[pick(n)] = 1;
            } else {
                int num_targets = 1 + pick(opt.max_targets);
                vector<long long> weights;
                long long total = 0;
                vector<int> targets;
                for (int i = 0; i < num_targets; ++i) {
                    targets.push_back(pick(n));
                    weights.push_back(1 + pick(5));
                    total += weights.back();
                }
                for (int i = 0; i < num_targets; ++i)
                    mass[targets[i]] += rationals::make(weights[i], total);
            }
            Row row;
            Rational reward = 0;
            for (const auto &[target, prob] : mass) {
                row.push_back({target, prob});
                if (m.goal[target])
                    reward += prob;
            }
            m.transitions[s][a] = std::move(row);
            m.rewards[s][a] = reward;
        }
    }
    return {std::move(m), mdp_abstraction::make_partition(class_of)};
}

namespace {

// All C-sets of one class, recomputed directly from the rows.
vector<vector<int>> class_csets(const ExplicitMdp &m, const mdp_abstraction::Partition &p, int cls) {
    vector<vector<int>> sets;
    for (int a = 0; a < m.num_actions(); ++a) {
        std::map<int, vector<int>> by_target;
        for (int s : p.members[cls]) {
            for (const TransitionEntry &e : m.transitions[s][a]) {
                int target_cls = p.class_of[e.target];
                if (target_cls == cls)
                    continue;
                auto &members = by_target[target_cls];
                if (members.empty() || members.back() != s)
                    members.push_back(s);
            }
        }
        for (auto &[target_cls, members] : by_target)
            sets.push_back(std::move(members));
    }
    return sets;
}

bool compositions_satisfy(const vector<vector<int>> &sets, const vector<int> &members) {
    int k = static_cast<int>(members.size());
    std::map<int, int> position;
    for (int i = 0; i < k; ++i)
        position[members[i]] = i;
    for (int den = 1; den <= k; ++den) {
        vector<int> num(k, 0);
        num[0] = den;
        while (true) {
            bool all_good = true;
            for (const vector<int> &set : sets) {
                int sum = 0;
                for (int s : set)
                    sum += num[position.at(s)];
                if (sum != den) {
                    all_good = false;
                    break;
                }
            }
            if (all_good)
                return true;
            // next composition of den into k parts
            int i = k - 2;
            while (i >= 0 && num[i] == 0)
                --i;
            if (i < 0)
                break;
            int tail = num[k - 1];
            num[i] -= 1;
            num[i + 1] = tail + 1;
            if (i + 1 != k - 1)
                num[k - 1] = 0;
        }
    }
    return false;
}

}  // namespace

bool wfa_feasible_oracle(const ExplicitMdp &m, const mdp_abstraction::Partition &p) {
    for (int c = 0; c < p.num_classes(); ++c) {
        vector<vector<int>> sets = class_csets(m, p, c);
        if (sets.empty())
            continue;
        if (!compositions_satisfy(sets, p.members[c]))
            return false;
    }
    return true;
}

std::vector<double> vi_oracle(const ExplicitMdp &m, bool absorb_goals, int iterations, double tol) {
    double gamma = rationals::to_double(m.gamma);
    int n = m.num_states();
    vector<double> v(n, 0.0), next(n, 0.0);
    for (int it = 0; it < iterations; ++it) {
        double delta = 0.0;
        for (int s = 0; s < n; ++s) {
            if (absorb_goals && m.goal[s]) {
                next[s] = 0.0;
                continue;
            }
            double best = 0.0;
            bool any = false;
            for (int a = 0; a < m.num_actions(); ++a) {
                if (m.transitions[s][a].empty())
                    continue;
                double q = rationals::to_double(m.rewards[s][a]);
                for (const TransitionEntry &e : m.transitions[s][a])
                    q += gamma * rationals::to_double(e.prob) * v[e.target];
                if (!any || q > best)
                    best = q;
                any = true;
            }
            next[s] = best;
            delta = std::max(delta, std::abs(next[s] - v[s]));
        }
        v = next;
        if (delta < tol)
            break;
    }
    return v;
}

std::vector<solvers::Cost> distance_oracle(const PlanningTask &t, const vector<State> &states) {
    vector<solvers::Cost> out;
    for (const State &start : states) {
        std::map<State, solvers::Cost> dist;
        using Item = std::pair<solvers::Cost, State>;
        std::priority_queue<Item, vector<Item>, std::greater<Item>> open;
        dist[start] = 0;
        open.push({0, start});
        solvers::Cost found = solvers::kInfiniteCost;
        while (!open.empty()) {
            auto [d, s] = open.top();
            open.pop();
            if (dist.at(s) != d)
                continue;
            if (task_model::is_goal(s, t)) {
                found = d;
                break;
            }
            for (const GroundAction &a : t.actions) {
                if (!task_model::applicable(s, a))
                    continue;
                State succ = task_model::apply(s, a, a.outcomes[0]);
                solvers::Cost nd = d + a.cost;
                auto it = dist.find(succ);
                if (it == dist.end() || nd < it->second) {
                    dist[succ] = nd;
                    open.push({nd, succ});
                }
            }
        }
        out.push_back(found);
    }
    return out;
}

ExplicitMdp random_selection(std::mt19937 &rng, const mdp_abstraction::AbstractMdp &am) {
    if (!am.interval)
        throw std::logic_error("random_selection needs an interval abstraction");
    auto pick = [&rng](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };

    ExplicitMdp m;
    m.state_names = am.class_names;
    m.states.assign(am.num_classes(), State(0));
    m.goal.assign(am.goal.begin(), am.goal.end());
    m.action_names = am.action_names;
    m.action_costs = am.action_costs;
    m.gamma = am.gamma;
    m.transitions.assign(am.num_classes(), vector<Row>(am.num_actions()));
    m.rewards.assign(am.num_classes(), vector<Rational>(am.num_actions(), Rational(0)));

    for (const auto &[key, row] : am.interval_rows) {
        auto [cls, act] = key;
        vector<int> targets;
        std::map<int, Rational> x;
        Rational slack = 1;
        for (const auto &[target, bounds] : row.prob) {
            targets.push_back(target);
            x[target] = bounds.first;
            slack -= bounds.first;
        }
        if (slack < 0)
            throw std::logic_error("random_selection: lower bounds exceed 1");
        std::shuffle(targets.begin(), targets.end(), rng);
        for (int target : targets) {
            if (slack == 0)
                break;
            Rational cap = row.prob.at(target).second - x[target];
            Rational extra = slack * rationals::make(pick(5), 4);
            if (extra > cap)
                extra = cap;
            x[target] += extra;
            slack -= extra;
        }
        for (int target : targets) {
            if (slack == 0)
                break;
            Rational cap = row.prob.at(target).second - x[target];
            Rational extra = slack < cap ? slack : cap;
            x[target] += extra;
            slack -= extra;
        }
        if (slack != 0)
            throw std::logic_error("random_selection: upper bounds below 1");
        Row out;
        for (const auto &[target, prob] : x)
            if (prob > 0)
                out.push_back({target, prob});
        m.transitions[cls][act] = std::move(out);
        Rational span = row.reward.second - row.reward.first;
        m.rewards[cls][act] = row.reward.first + span * rationals::make(pick(5), 4);
    }
    return m;
}

}  // namespace support
