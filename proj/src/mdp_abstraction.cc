#include "mdp_abstraction.h"

#include <algorithm>
#include <climits>
#include <functional>
#include <set>
#include <sstream>

using namespace std;
using statespace::Row;
using statespace::TransitionEntry;

namespace mdp_abstraction {

string default_class_name(int i) {
    return "s̄" + std::to_string(i);
}

Partition make_partition(const vector<int> &class_of) {
    Partition p;
    p.class_of = class_of;
    int num_classes = 0;
    for (int c : class_of) {
        if (c < 0)
            throw invalid_argument("make_partition: negative class id");
        num_classes = max(num_classes, c + 1);
    }
    p.members.resize(num_classes);
    for (size_t s = 0; s < class_of.size(); ++s)
        p.members[class_of[s]].push_back(static_cast<int>(s));
    for (int c = 0; c < num_classes; ++c) {
        if (p.members[c].empty())
            throw invalid_argument("make_partition: empty class " + std::to_string(c));
        p.class_names.push_back(default_class_name(c));
    }
    return p;
}

void validate_partition(const ExplicitMdp &m, const Partition &p) {
    if (static_cast<int>(p.class_of.size()) != m.num_states())
        throw invalid_argument("partition: labeling covers " + std::to_string(p.class_of.size()) +
                               " states, MDP has " + std::to_string(m.num_states()));
    if (p.class_names.size() != p.members.size())
        throw invalid_argument("partition: class name count mismatch");
    vector<vector<int>> rebuilt(p.members.size());
    for (size_t s = 0; s < p.class_of.size(); ++s) {
        int c = p.class_of[s];
        if (c < 0 || c >= p.num_classes())
            throw invalid_argument("partition: class id out of range for state " + std::to_string(s));
        rebuilt[c].push_back(static_cast<int>(s));
    }
    if (rebuilt != p.members)
        throw invalid_argument("partition: member index disagrees with labeling");
    for (const vector<int> &ms : p.members)
        if (ms.empty())
            throw invalid_argument("partition: empty class");
}

namespace {

// Projected transition row of (s, a): class -> accumulated mass, diagonal included.
map<int, Rational> project_row(const ExplicitMdp &m, const Partition &p, int s, int a) {
    map<int, Rational> proj;
    for (const TransitionEntry &e : m.transitions[s][a])
        proj[p.class_of[e.target]] += e.prob;
    return proj;
}

vector<int> intersect_sorted(const vector<int> &a, const vector<int> &b) {
    vector<int> out;
    set_intersection(a.begin(), a.end(), b.begin(), b.end(), back_inserter(out));
    return out;
}

string member_list(const ExplicitMdp &m, const vector<int> &states) {
    string out = "{";
    for (size_t i = 0; i < states.size(); ++i) {
        if (i)
            out += ", ";
        out += m.state_names[states[i]];
    }
    return out + "}";
}

}  // namespace

CSetIndex compute_csets(const ExplicitMdp &m, const Partition &p) {
    validate_partition(m, p);
    CSetIndex cs;
    for (int s = 0; s < m.num_states(); ++s) {
        int c = p.class_of[s];
        for (int a = 0; a < m.num_actions(); ++a) {
            for (const TransitionEntry &e : m.transitions[s][a]) {
                int tc = p.class_of[e.target];
                if (tc == c)
                    continue;
                vector<int> &members = cs.csets[{c, a, tc}];
                if (members.empty() || members.back() != s)
                    members.push_back(s);
                if (m.goal[e.target]) {
                    vector<int> &refined = cs.goal_refined[{c, a, tc}];
                    if (refined.empty() || refined.back() != s)
                        refined.push_back(s);
                }
            }
        }
    }
    return cs;
}

WfaWeights uniform_weights(const Partition &p) {
    WfaWeights w;
    w.omega.resize(p.num_classes());
    for (int c = 0; c < p.num_classes(); ++c) {
        Rational share = rationals::make(1, static_cast<long long>(p.members[c].size()));
        for (int s : p.members[c])
            w.omega[c][s] = share;
    }
    return w;
}

ArmdpWeights xi_from_omega(const WfaWeights &w, int num_actions) {
    ArmdpWeights x;
    for (int c = 0; c < static_cast<int>(w.omega.size()); ++c)
        for (int a = 0; a < num_actions; ++a)
            x.xi[{c, a}] = w.omega[c];
    return x;
}

WfaFeasibility wfa_feasibility(const CSetIndex &cs, const Partition &p) {
    WfaFeasibility result;
    result.feasible = true;
    result.weights.omega.resize(p.num_classes());

    // Group the C-sets by class; map order keeps them contiguous.
    vector<vector<pair<CSetKey, vector<int>>>> by_class(p.num_classes());
    for (const auto &[key, members] : cs.csets)
        by_class[key.cls].emplace_back(key, members);

    for (int c = 0; c < p.num_classes(); ++c) {
        const auto &family = by_class[c];
        if (family.empty()) {
            Rational share = rationals::make(1, static_cast<long long>(p.members[c].size()));
            for (int s : p.members[c])
                result.weights.omega[c][s] = share;
            continue;
        }
        vector<int> common = family[0].second;
        for (size_t i = 1; i < family.size() && !common.empty(); ++i)
            common = intersect_sorted(common, family[i].second);
        if (!common.empty()) {
            Rational share = rationals::make(1, static_cast<long long>(common.size()));
            for (int s : common)
                result.weights.omega[c][s] = share;
            continue;
        }

        result.feasible = false;
        WfaConflict conflict;
        conflict.cls = c;
        conflict.constraints = family;

        // Irredundant subfamily with empty intersection: grow smallest-first,
        // then drop every constraint the emptiness does not depend on.
        vector<size_t> order(family.size());
        for (size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
            return family[x].second.size() < family[y].second.size();
        });
        vector<size_t> core;
        vector<int> running;
        for (size_t idx : order) {
            running = core.empty() ? family[idx].second : intersect_sorted(running, family[idx].second);
            core.push_back(idx);
            if (!core.empty() && running.empty())
                break;
        }
        auto intersection_of = [&](const vector<size_t> &subset) {
            if (subset.empty())
                return p.members[c];
            vector<int> acc = family[subset[0]].second;
            for (size_t i = 1; i < subset.size() && !acc.empty(); ++i)
                acc = intersect_sorted(acc, family[subset[i]].second);
            return acc;
        };
        for (size_t i = 0; i < core.size();) {
            vector<size_t> without = core;
            without.erase(without.begin() + i);
            if (intersection_of(without).empty())
                core = move(without);
            else
                ++i;
        }
        sort(core.begin(), core.end());
        for (size_t idx : core)
            conflict.minimal_core.push_back(family[idx]);
        result.conflicts.push_back(move(conflict));
    }
    return result;
}

ArmdpWeights default_xi(const ExplicitMdp &m, const Partition &p, const CSetIndex &cs) {
    Verdict independent = check_representative_independence(m, p);
    if (!independent.pass) {
        const Witness &w = *independent.witness;
        throw AmbiguityError("default_xi: representatives disagree: action " + w.action +
                             " from " + w.state1 + " and " + w.state2 +
                             " project different mass onto " + w.sbar_prime + " (" + w.detail + ")");
    }
    ArmdpWeights x;
    for (int c = 0; c < p.num_classes(); ++c) {
        for (int a = 0; a < m.num_actions(); ++a) {
            vector<int> applicable;
            for (int s : p.members[c])
                if (!m.transitions[s][a].empty())
                    applicable.push_back(s);
            if (applicable.empty())
                continue;
            set<int> support;
            CSetKey low{c, a, INT_MIN};
            for (auto it = cs.goal_refined.lower_bound(low);
                 it != cs.goal_refined.end() && it->first.cls == c && it->first.action == a; ++it)
                support.insert(it->second.begin(), it->second.end());
            if (support.empty())
                for (auto it = cs.csets.lower_bound(low);
                     it != cs.csets.end() && it->first.cls == c && it->first.action == a; ++it)
                    support.insert(it->second.begin(), it->second.end());
            if (support.empty())
                support.insert(applicable.begin(), applicable.end());
            Rational share = rationals::make(1, static_cast<long long>(support.size()));
            for (int s : support)
                x.xi[{c, a}][s] = share;
        }
    }
    return x;
}

string provenance_name(Provenance p) {
    switch (p) {
    case Provenance::planning:
        return "planning";
    case Provenance::wfa:
        return "wfa";
    case Provenance::armdp:
        return "armdp";
    case Provenance::abpmdp:
        return "abpmdp";
    case Provenance::abpmdp_max:
        return "abpmdp-max";
    }
    return "?";
}

bool self_loop_only(int cls, const PointRow &row) {
    if (row.prob.empty())
        return false;
    for (const auto &[target, prob] : row.prob)
        if (target != cls && prob > 0)
            return false;
    return true;
}

bool self_loop_only(int cls, const IntervalRow &row) {
    if (row.prob.empty())
        return false;
    for (const auto &[target, bounds] : row.prob)
        if (target != cls && bounds.second > 0)
            return false;
    return true;
}

namespace {

AbstractMdp base_abstraction(const ExplicitMdp &m, const Partition &p, Provenance prov) {
    AbstractMdp am;
    am.provenance = prov;
    am.class_names = p.class_names;
    am.action_names = m.action_names;
    am.action_costs = m.action_costs;
    am.gamma = m.gamma;
    for (int c = 0; c < p.num_classes(); ++c) {
        bool all_goal = true;
        for (int s : p.members[c])
            all_goal &= static_cast<bool>(m.goal[s]);
        am.goal.push_back(all_goal);
    }
    return am;
}

// Shared core of the WFA and ARMDP builders: a row exists where some member
// applies the action, and averages the members' projected rows under the
// given weights.
AbstractMdp build_weighted(const ExplicitMdp &m, const Partition &p, Provenance prov,
                           const function<const map<int, Rational> *(int, int)> &weights_for) {
    validate_partition(m, p);
    AbstractMdp am = base_abstraction(m, p, prov);
    for (int c = 0; c < p.num_classes(); ++c) {
        for (int a = 0; a < m.num_actions(); ++a) {
            bool any_applicable = false;
            for (int s : p.members[c])
                any_applicable |= !m.transitions[s][a].empty();
            if (!any_applicable)
                continue;
            const map<int, Rational> *weights = weights_for(c, a);
            PointRow row;
            for (int s : p.members[c]) {
                if (m.transitions[s][a].empty() || !weights)
                    continue;
                auto it = weights->find(s);
                if (it == weights->end() || it->second == 0)
                    continue;
                for (const TransitionEntry &e : m.transitions[s][a])
                    row.prob[p.class_of[e.target]] += it->second * e.prob;
                row.reward += it->second * m.rewards[s][a];
            }
            am.point_rows[{c, a}] = move(row);
        }
    }
    return am;
}

}  // namespace

AbstractMdp build_wfa(const ExplicitMdp &m, const Partition &p, const WfaWeights &w) {
    if (static_cast<int>(w.omega.size()) != p.num_classes())
        throw invalid_argument("build_wfa: weights cover " + std::to_string(w.omega.size()) +
                               " classes, partition has " + std::to_string(p.num_classes()));
    return build_weighted(m, p, Provenance::wfa,
                          [&](int c, int) { return &w.omega[c]; });
}

AbstractMdp build_armdp(const ExplicitMdp &m, const Partition &p, const ArmdpWeights &x) {
    return build_weighted(m, p, Provenance::armdp,
                          [&](int c, int a) -> const map<int, Rational> * {
                              auto it = x.xi.find({c, a});
                              return it == x.xi.end() ? nullptr : &it->second;
                          });
}

AbstractMdp build_abpmdp(const ExplicitMdp &m, const Partition &p) {
    validate_partition(m, p);
    AbstractMdp am = base_abstraction(m, p, Provenance::abpmdp);
    am.interval = true;
    for (int c = 0; c < p.num_classes(); ++c) {
        for (int a = 0; a < m.num_actions(); ++a) {
            vector<map<int, Rational>> projected;
            vector<Rational> member_rewards;
            bool any_applicable = false;
            for (int s : p.members[c]) {
                projected.push_back(project_row(m, p, s, a));
                member_rewards.push_back(m.rewards[s][a]);
                any_applicable |= !m.transitions[s][a].empty();
            }
            if (!any_applicable)
                continue;
            // Min and max range over every member; an inapplicable member
            // contributes zero mass and zero reward.
            IntervalRow row;
            set<int> targets;
            for (const auto &proj : projected)
                for (const auto &[target, mass] : proj)
                    targets.insert(target);
            for (int target : targets) {
                Rational lo, hi;
                bool first = true;
                for (const auto &proj : projected) {
                    auto it = proj.find(target);
                    Rational mass = it == proj.end() ? Rational(0) : it->second;
                    if (first) {
                        lo = hi = mass;
                        first = false;
                    } else {
                        lo = min(lo, mass);
                        hi = max(hi, mass);
                    }
                }
                if (hi > 0)
                    row.prob[target] = {lo, hi};
            }
            row.reward = {member_rewards[0], member_rewards[0]};
            for (const Rational &r : member_rewards) {
                row.reward.first = min(row.reward.first, r);
                row.reward.second = max(row.reward.second, r);
            }
            am.interval_rows[{c, a}] = move(row);
        }
    }
    return am;
}

AbstractMdp select_max(const AbstractMdp &am) {
    if (!am.interval)
        throw invalid_argument("select_max: interval abstraction required");
    AbstractMdp out = am;
    out.provenance = Provenance::abpmdp_max;
    out.interval = false;
    out.interval_rows.clear();
    for (const auto &[key, row] : am.interval_rows) {
        PointRow selected;
        Rational sum = 0;
        for (const auto &[target, bounds] : row.prob) {
            if (bounds.second == 0)
                continue;
            selected.prob[target] = bounds.second;
            sum += bounds.second;
        }
        if (selected.prob.empty())
            continue;
        if (sum != 1)
            throw ModelError("select_max: upper bounds for (" + am.class_names[key.first] + ", " +
                             am.action_names[key.second] + ") sum to " + rationals::to_string(sum) +
                             ", the selection is not representable as one MDP");
        selected.reward = row.reward.second;
        out.point_rows[key] = move(selected);
    }
    return out;
}

AbstractMdp planning_view(const ExplicitMdp &m) {
    AbstractMdp am;
    am.provenance = Provenance::planning;
    am.class_names = m.state_names;
    am.goal.assign(m.goal.begin(), m.goal.end());
    am.action_names = m.action_names;
    am.action_costs = m.action_costs;
    am.gamma = m.gamma;
    for (int s = 0; s < m.num_states(); ++s) {
        for (int a = 0; a < m.num_actions(); ++a) {
            if (m.transitions[s][a].empty())
                continue;
            PointRow row;
            for (const TransitionEntry &e : m.transitions[s][a])
                row.prob[e.target] = e.prob;
            row.reward = m.rewards[s][a];
            am.point_rows[{s, a}] = move(row);
        }
    }
    return am;
}

ExplicitMdp to_explicit(const AbstractMdp &am) {
    if (am.interval)
        throw invalid_argument("to_explicit: point abstraction required");
    ExplicitMdp m;
    m.state_names = am.class_names;
    m.states.assign(am.num_classes(), task_model::State(0));
    m.goal.assign(am.goal.begin(), am.goal.end());
    m.action_names = am.action_names;
    m.action_costs = am.action_costs;
    m.gamma = am.gamma;
    m.transitions.assign(am.num_classes(), vector<Row>(am.num_actions()));
    m.rewards.assign(am.num_classes(), vector<Rational>(am.num_actions(), Rational(0)));
    for (const auto &[key, row] : am.point_rows) {
        Row &out = m.transitions[key.first][key.second];
        for (const auto &[target, prob] : row.prob)
            out.push_back({target, prob});
        m.rewards[key.first][key.second] = row.reward;
    }
    return m;
}

Verdict check_connection_preserving(const ExplicitMdp &m, const Partition &p, const AbstractMdp &am) {
    CSetIndex cs = compute_csets(m, p);
    auto witness = [&](const CSetKey &key, const string &detail) {
        Witness w;
        w.sbar = am.class_names[key.cls];
        w.action = am.action_names[key.action];
        w.sbar_prime = am.class_names[key.target_cls];
        w.detail = detail;
        return w;
    };

    for (const auto &[key, members] : cs.csets) {
        Rational mass = 0;
        if (am.interval) {
            auto it = am.interval_rows.find({key.cls, key.action});
            if (it != am.interval_rows.end()) {
                auto entry = it->second.prob.find(key.target_cls);
                if (entry != it->second.prob.end())
                    mass = entry->second.second;
            }
        } else {
            auto it = am.point_rows.find({key.cls, key.action});
            if (it != am.point_rows.end()) {
                auto entry = it->second.prob.find(key.target_cls);
                if (entry != it->second.prob.end())
                    mass = entry->second;
            }
        }
        if (mass == 0)
            return Verdict::fail(witness(
                key, "connecting members " + member_list(m, members) + " exist but the abstraction assigns zero mass"));
    }

    if (am.interval) {
        for (const auto &[rowkey, row] : am.interval_rows)
            for (const auto &[target, bounds] : row.prob) {
                if (target == rowkey.first || bounds.second == 0)
                    continue;
                CSetKey key{rowkey.first, rowkey.second, target};
                if (!cs.csets.count(key))
                    return Verdict::fail(witness(key, "abstraction allows mass up to " +
                                                          rationals::to_string(bounds.second) +
                                                          " but no member connects the classes"));
            }
    } else {
        for (const auto &[rowkey, row] : am.point_rows)
            for (const auto &[target, prob] : row.prob) {
                if (target == rowkey.first || prob == 0)
                    continue;
                CSetKey key{rowkey.first, rowkey.second, target};
                if (!cs.csets.count(key))
                    return Verdict::fail(witness(key, "abstraction assigns mass " + rationals::to_string(prob) +
                                                          " but no member connects the classes"));
            }
    }
    return Verdict::ok();
}

Verdict check_deterministic(const AbstractMdp &am) {
    if (am.interval)
        throw invalid_argument("check_deterministic: point abstraction required");
    for (const auto &[key, row] : am.point_rows) {
        for (const auto &[target, prob] : row.prob) {
            if (prob != 0 && prob != 1) {
                Witness w;
                w.sbar = am.class_names[key.first];
                w.action = am.action_names[key.second];
                w.sbar_prime = am.class_names[target];
                w.detail = "transition probability " + rationals::to_string(prob) + " is not 0 or 1";
                return Verdict::fail(move(w));
            }
        }
    }
    return Verdict::ok();
}

Verdict check_equivalence(const ExplicitMdp &planning, const AbstractMdp &am) {
    if (am.interval)
        throw invalid_argument("check_equivalence: point abstraction required");
    if (planning.num_states() != am.num_classes()) {
        Witness w;
        w.detail = "planning abstraction has " + std::to_string(planning.num_states()) +
                   " states, abstract MDP has " + std::to_string(am.num_classes()) + " classes";
        return Verdict::fail(move(w));
    }

    map<string, int> planning_actions, am_actions;
    for (int a = 0; a < planning.num_actions(); ++a)
        planning_actions[planning.action_names[a]] = a;
    for (int a = 0; a < am.num_actions(); ++a)
        am_actions[am.action_names[a]] = a;
    vector<string> all_actions = planning.action_names;
    for (const string &name : am.action_names)
        if (!planning_actions.count(name))
            all_actions.push_back(name);

    for (const string &name : all_actions) {
        auto pa = planning_actions.find(name);
        auto ma = am_actions.find(name);
        for (int cls = 0; cls < am.num_classes(); ++cls) {
            // A row whose mass never leaves the class carries no abstract
            // edge; the planning side has no such rows because fully
            // annihilated actions are removed, so both sides ignore them.
            map<int, Rational> planning_row;
            Rational planning_reward = 0;
            bool planning_present = false;
            if (pa != planning_actions.end() && !planning.transitions[cls][pa->second].empty()) {
                for (const TransitionEntry &e : planning.transitions[cls][pa->second])
                    planning_row[e.target] = e.prob;
                planning_reward = planning.rewards[cls][pa->second];
                planning_present = true;
                bool self_only = true;
                for (const auto &[target, prob] : planning_row)
                    self_only &= target == cls;
                if (self_only)
                    planning_present = false;
            }

            map<int, Rational> am_row;
            Rational am_reward = 0;
            bool am_present = false;
            if (ma != am_actions.end()) {
                auto it = am.point_rows.find({cls, ma->second});
                if (it != am.point_rows.end() && !it->second.prob.empty()) {
                    am_row = it->second.prob;
                    am_reward = it->second.reward;
                    am_present = !self_loop_only(cls, it->second);
                }
            }

            if (planning_present != am_present) {
                Witness w;
                w.sbar = am.class_names[cls];
                w.action = name;
                w.detail = planning_present ? "row exists only in the planning abstraction"
                                            : "row exists only in the abstract MDP";
                return Verdict::fail(move(w));
            }
            if (!planning_present)
                continue;
            if (planning_row != am_row) {
                int bad_target = -1;
                for (const auto &[target, prob] : planning_row) {
                    auto it = am_row.find(target);
                    if (it == am_row.end() || it->second != prob) {
                        bad_target = target;
                        break;
                    }
                }
                if (bad_target < 0)
                    for (const auto &[target, prob] : am_row)
                        if (!planning_row.count(target)) {
                            bad_target = target;
                            break;
                        }
                Witness w;
                w.sbar = am.class_names[cls];
                w.action = name;
                w.sbar_prime = bad_target >= 0 ? am.class_names[bad_target] : "";
                w.detail = "transition rows differ";
                return Verdict::fail(move(w));
            }
            if (planning_reward != am_reward) {
                Witness w;
                w.sbar = am.class_names[cls];
                w.action = name;
                w.detail = "rewards differ: " + rationals::to_string(planning_reward) + " vs " +
                           rationals::to_string(am_reward);
                return Verdict::fail(move(w));
            }
        }
    }
    return Verdict::ok();
}

Verdict check_representative_independence(const ExplicitMdp &m, const Partition &p) {
    validate_partition(m, p);
    for (int c = 0; c < p.num_classes(); ++c) {
        for (int a = 0; a < m.num_actions(); ++a) {
            int reference = -1;
            map<int, Rational> reference_row;
            for (int s : p.members[c]) {
                if (m.transitions[s][a].empty())
                    continue;
                map<int, Rational> row = project_row(m, p, s, a);
                if (reference < 0) {
                    reference = s;
                    reference_row = move(row);
                    continue;
                }
                if (row == reference_row)
                    continue;
                int bad_target = -1;
                Rational mass1, mass2;
                for (const auto &[target, mass] : reference_row) {
                    auto it = row.find(target);
                    Rational other = it == row.end() ? Rational(0) : it->second;
                    if (other != mass) {
                        bad_target = target;
                        mass1 = mass;
                        mass2 = other;
                        break;
                    }
                }
                if (bad_target < 0)
                    for (const auto &[target, mass] : row)
                        if (!reference_row.count(target)) {
                            bad_target = target;
                            mass1 = 0;
                            mass2 = mass;
                            break;
                        }
                Witness w;
                w.sbar = p.class_names[c];
                w.action = m.action_names[a];
                w.sbar_prime = bad_target >= 0 ? p.class_names[bad_target] : "";
                w.state1 = m.state_names[reference];
                w.state2 = m.state_names[s];
                w.detail = "projected mass " + rationals::to_string(mass1) + " vs " + rationals::to_string(mass2);
                return Verdict::fail(move(w));
            }
        }
    }
    return Verdict::ok();
}

string to_dot(const ExplicitMdp &m, const Partition &p) {
    validate_partition(m, p);
    ostringstream out;
    out << "digraph abstraction {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (int c = 0; c < p.num_classes(); ++c) {
        out << "  subgraph cluster_" << c << " {\n    label=\"" << p.class_names[c]
            << "\";\n    style=dashed;\n";
        for (int s : p.members[c]) {
            out << "    \"" << m.state_names[s] << "\"";
            if (m.goal[s])
                out << " [peripheries=2]";
            out << ";\n";
        }
        out << "  }\n";
    }
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            for (const TransitionEntry &e : m.transitions[s][a]) {
                out << "  \"" << m.state_names[s] << "\" -> \"" << m.state_names[e.target]
                    << "\" [label=\"" << m.action_names[a];
                if (e.prob != 1)
                    out << ":" << rationals::to_string(e.prob);
                out << "\"];\n";
            }
    out << "}\n";
    return out.str();
}

string to_dot(const AbstractMdp &am) {
    ostringstream out;
    out << "digraph abstract_mdp {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    for (int c = 0; c < am.num_classes(); ++c) {
        out << "  \"" << am.class_names[c] << "\"";
        if (am.goal[c])
            out << " [peripheries=2]";
        out << ";\n";
    }
    if (am.interval) {
        for (const auto &[key, row] : am.interval_rows)
            for (const auto &[target, bounds] : row.prob)
                out << "  \"" << am.class_names[key.first] << "\" -> \"" << am.class_names[target]
                    << "\" [label=\"" << am.action_names[key.second] << ":["
                    << rationals::to_string(bounds.first) << "," << rationals::to_string(bounds.second)
                    << "]\"];\n";
    } else {
        for (const auto &[key, row] : am.point_rows)
            for (const auto &[target, prob] : row.prob)
                out << "  \"" << am.class_names[key.first] << "\" -> \"" << am.class_names[target]
                    << "\" [label=\"" << am.action_names[key.second] << ":"
                    << rationals::to_string(prob) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace mdp_abstraction
