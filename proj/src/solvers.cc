#include "solvers.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

using namespace std;
using mdp_abstraction::AbstractMdp;
using statespace::TransitionEntry;
using task_model::State;

namespace solvers {

vector<Cost> goal_distances(const ExplicitMdp &m) {
    if (!statespace::is_deterministic(m))
        throw invalid_argument("goal_distances: deterministic model required");

    struct ReverseEdge {
        int source;
        Cost cost;
    };
    vector<vector<ReverseEdge>> incoming(m.num_states());
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            for (const TransitionEntry &e : m.transitions[s][a])
                incoming[e.target].push_back({s, m.action_costs[a]});

    vector<Cost> dist(m.num_states(), kInfiniteCost);
    priority_queue<pair<Cost, int>, vector<pair<Cost, int>>, greater<>> open;
    for (int s = 0; s < m.num_states(); ++s)
        if (m.goal[s]) {
            dist[s] = 0;
            open.push({0, s});
        }
    while (!open.empty()) {
        auto [d, s] = open.top();
        open.pop();
        if (d > dist[s])
            continue;
        for (const ReverseEdge &e : incoming[s]) {
            Cost nd = d + e.cost;
            if (nd < dist[e.source]) {
                dist[e.source] = nd;
                open.push({nd, e.source});
            }
        }
    }
    return dist;
}

namespace {

struct DenseRow {
    int action;
    double reward;
    vector<pair<int, double>> entries;
};

double stopping_threshold(double eps, double gamma) {
    return gamma == 0 ? eps : eps * (1 - gamma) / (2 * gamma);
}

}  // namespace

ViResult value_iteration(const ExplicitMdp &m, const ViOptions &options) {
    Rational gamma = options.gamma.value_or(m.gamma);
    if (gamma < 0 || gamma >= 1)
        throw invalid_argument("value_iteration: gamma must lie in [0, 1)");
    if (options.eps <= 0)
        throw invalid_argument("value_iteration: eps must be positive");
    double g = rationals::to_double(gamma);
    double threshold = stopping_threshold(options.eps, g);

    vector<vector<DenseRow>> rows(m.num_states());
    for (int s = 0; s < m.num_states(); ++s) {
        if (options.absorb_goals && m.goal[s])
            continue;
        for (int a = 0; a < m.num_actions(); ++a) {
            if (m.transitions[s][a].empty())
                continue;
            DenseRow row;
            row.action = a;
            row.reward = rationals::to_double(m.rewards[s][a]);
            for (const TransitionEntry &e : m.transitions[s][a])
                row.entries.push_back({e.target, rationals::to_double(e.prob)});
            rows[s].push_back(move(row));
        }
    }

    ViResult result;
    result.values.assign(m.num_states(), 0.0);
    result.policy.assign(m.num_states(), -1);
    vector<double> next(m.num_states(), 0.0);
    for (int it = 0; it < options.max_iterations; ++it) {
        double residual = 0;
        for (int s = 0; s < m.num_states(); ++s) {
            double best = 0;
            int best_action = -1;
            for (const DenseRow &row : rows[s]) {
                double q = row.reward;
                for (const auto &[target, prob] : row.entries)
                    q += g * prob * result.values[target];
                if (best_action < 0 || q > best) {
                    best = q;
                    best_action = row.action;
                }
            }
            next[s] = best_action < 0 ? 0.0 : best;
            result.policy[s] = best_action;
            residual = max(residual, fabs(next[s] - result.values[s]));
        }
        swap(result.values, next);
        result.residuals.push_back(residual);
        ++result.iterations;
        if (residual <= threshold) {
            result.converged = true;
            break;
        }
    }
    return result;
}

ViResult value_iteration(const AbstractMdp &am, const ViOptions &options) {
    return value_iteration(mdp_abstraction::to_explicit(am), options);
}

namespace {

struct IntervalEntry {
    int target;
    double lo;
    double hi;
};

struct IntervalDenseRow {
    double reward_lo;
    double reward_hi;
    double slack;  // 1 - sum of lower bounds
    vector<IntervalEntry> entries;
};

// Mass assignment inside the intervals that extremizes sum T(t)*V(t):
// start every target at its lower bound and spend the slack in the given
// value order.
double assign_by_order(const IntervalDenseRow &row, const vector<double> &values,
                       const vector<int> &order) {
    double total = 0;
    for (const IntervalEntry &e : row.entries)
        total += e.lo * values[e.target];
    double slack = row.slack;
    for (int i : order) {
        if (slack <= 0)
            break;
        const IntervalEntry &e = row.entries[i];
        double extra = min(slack, e.hi - e.lo);
        total += extra * values[e.target];
        slack -= extra;
    }
    return total;
}

}  // namespace

IviResult interval_value_iteration(const AbstractMdp &am, const ViOptions &options) {
    if (!am.interval)
        throw invalid_argument("interval_value_iteration: interval abstraction required");
    Rational gamma = options.gamma.value_or(am.gamma);
    if (gamma < 0 || gamma >= 1)
        throw invalid_argument("interval_value_iteration: gamma must lie in [0, 1)");
    if (options.eps <= 0)
        throw invalid_argument("interval_value_iteration: eps must be positive");
    double g = rationals::to_double(gamma);
    double threshold = stopping_threshold(options.eps, g);

    int n = am.num_classes();
    vector<vector<IntervalDenseRow>> rows(n);
    for (const auto &[key, row] : am.interval_rows) {
        if (options.absorb_goals && am.goal[key.first])
            continue;
        Rational sum_lo = 0, sum_hi = 0;
        IntervalDenseRow dense;
        for (const auto &[target, bounds] : row.prob) {
            sum_lo += bounds.first;
            sum_hi += bounds.second;
            dense.entries.push_back({target, rationals::to_double(bounds.first),
                                     rationals::to_double(bounds.second)});
        }
        if (sum_lo > 1 || sum_hi < 1)
            throw mdp_abstraction::ModelError(
                "interval_value_iteration: no selection for (" + am.class_names[key.first] + ", " +
                am.action_names[key.second] + ") sums to 1; bounds allow [" +
                rationals::to_string(sum_lo) + ", " + rationals::to_string(sum_hi) + "]");
        dense.reward_lo = rationals::to_double(row.reward.first);
        dense.reward_hi = rationals::to_double(row.reward.second);
        dense.slack = 1.0 - rationals::to_double(sum_lo);
        rows[key.first].push_back(move(dense));
    }

    IviResult result;
    result.lower.assign(n, 0.0);
    result.upper.assign(n, 0.0);
    vector<double> next_lower(n, 0.0), next_upper(n, 0.0);
    vector<int> order;
    for (int it = 0; it < options.max_iterations; ++it) {
        double residual = 0;
        for (int s = 0; s < n; ++s) {
            double best_lo = 0, best_hi = 0;
            bool have = false;
            for (const IntervalDenseRow &row : rows[s]) {
                order.resize(row.entries.size());
                for (size_t i = 0; i < order.size(); ++i)
                    order[i] = static_cast<int>(i);
                // optimistic: slack toward high-value targets
                sort(order.begin(), order.end(), [&](int a, int b) {
                    return result.upper[row.entries[a].target] > result.upper[row.entries[b].target];
                });
                double q_hi = row.reward_hi + g * assign_by_order(row, result.upper, order);
                // pessimistic: slack toward low-value targets
                sort(order.begin(), order.end(), [&](int a, int b) {
                    return result.lower[row.entries[a].target] < result.lower[row.entries[b].target];
                });
                double q_lo = row.reward_lo + g * assign_by_order(row, result.lower, order);
                if (!have) {
                    best_lo = q_lo;
                    best_hi = q_hi;
                    have = true;
                } else {
                    best_lo = max(best_lo, q_lo);
                    best_hi = max(best_hi, q_hi);
                }
            }
            next_lower[s] = best_lo;
            next_upper[s] = best_hi;
            residual = max(residual, fabs(next_lower[s] - result.lower[s]));
            residual = max(residual, fabs(next_upper[s] - result.upper[s]));
        }
        swap(result.lower, next_lower);
        swap(result.upper, next_upper);
        result.residuals.push_back(residual);
        ++result.iterations;
        if (residual <= threshold) {
            result.converged = true;
            break;
        }
    }
    return result;
}

ProperPolicyReport proper_policy_exists(const ExplicitMdp &m) {
    int n = m.num_states();
    vector<char> alive(n, 1);
    while (true) {
        // Backward closure within the surviving set: a state joins when some
        // action keeps all mass on survivors and touches an already-joined
        // state.
        vector<char> reach(n, 0);
        for (int s = 0; s < n; ++s)
            if (alive[s] && m.goal[s])
                reach[s] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int s = 0; s < n; ++s) {
                if (!alive[s] || reach[s])
                    continue;
                for (int a = 0; a < m.num_actions() && !reach[s]; ++a) {
                    const statespace::Row &row = m.transitions[s][a];
                    if (row.empty())
                        continue;
                    bool inside = true, touches = false;
                    for (const TransitionEntry &e : row) {
                        inside &= static_cast<bool>(alive[e.target]);
                        touches |= static_cast<bool>(reach[e.target]);
                    }
                    if (inside && touches) {
                        reach[s] = 1;
                        changed = true;
                    }
                }
            }
        }
        if (reach == alive)
            break;
        alive = move(reach);
    }

    ProperPolicyReport report;
    report.exists = true;
    for (int s = 0; s < n; ++s)
        if (!alive[s]) {
            report.exists = false;
            report.dead.push_back(s);
        }
    return report;
}

SearchResult astar_search(const task_model::PlanningTask &t, const Heuristic &h) {
    if (t.flavor != task_model::Flavor::classical)
        throw invalid_argument("astar_search: classical task required");
    task_model::ValidationReport report = task_model::validate(t);
    if (!report.ok())
        throw invalid_argument("astar_search: task fails validation: " + report.problems.front());

    SearchResult result;
    vector<State> states;
    unordered_map<State, int, task_model::StateHash> index;
    vector<Cost> g_value, h_value;
    vector<pair<int, int>> parent;  // (state, action)
    vector<char> closed;
    auto intern = [&](const State &s) {
        auto it = index.find(s);
        if (it != index.end())
            return it->second;
        int id = static_cast<int>(states.size());
        index.emplace(s, id);
        states.push_back(s);
        g_value.push_back(kInfiniteCost);
        h_value.push_back(h(s));
        parent.push_back({-1, -1});
        closed.push_back(0);
        ++result.generated;
        return id;
    };

    using Node = tuple<Cost, Cost, int>;  // f, h, state
    priority_queue<Node, vector<Node>, greater<>> open;
    int init = intern(t.init);
    g_value[init] = 0;
    if (h_value[init] != kInfiniteCost)
        open.push({h_value[init], h_value[init], init});

    while (!open.empty()) {
        auto [f, hv, s] = open.top();
        open.pop();
        if (closed[s] || g_value[s] + hv != f)
            continue;
        if (task_model::is_goal(states[s], t)) {
            result.solved = true;
            result.cost = g_value[s];
            vector<string> steps;
            for (int at = s; parent[at].first >= 0; at = parent[at].first)
                steps.push_back(t.actions[parent[at].second].name);
            reverse(steps.begin(), steps.end());
            result.plan.steps = move(steps);
            return result;
        }
        closed[s] = 1;
        ++result.expanded;
        for (size_t a = 0; a < t.actions.size(); ++a) {
            const task_model::GroundAction &action = t.actions[a];
            State current = states[s];  // copy: intern() may reallocate
            if (!task_model::applicable(current, action))
                continue;
            int succ = intern(task_model::apply(current, action, action.outcomes[0]));
            Cost ng = g_value[s] + action.cost;
            if (ng >= g_value[succ] || h_value[succ] == kInfiniteCost)
                continue;
            g_value[succ] = ng;
            parent[succ] = {s, static_cast<int>(a)};
            closed[succ] = 0;
            open.push({ng + h_value[succ], h_value[succ], succ});
        }
    }
    return result;
}

}  // namespace solvers
