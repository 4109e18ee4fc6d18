#include "task_model.h"

#include <algorithm>
#include <sstream>

using namespace std;

namespace task_model {

FactTable::FactTable(vector<string> names) : names_(move(names)) {
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        if (names_[i].empty())
            throw invalid_argument("empty fact name at position " + std::to_string(i));
        auto [_, inserted] = index_.emplace(names_[i], i);
        if (!inserted)
            throw invalid_argument("duplicate fact name '" + names_[i] + "'");
    }
}

optional<int> FactTable::index_of(string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        return nullopt;
    return it->second;
}

State State::from_bits(string_view bits) {
    State s(static_cast<int>(bits.size()));
    for (int i = 0; i < static_cast<int>(bits.size()); ++i) {
        if (bits[i] == '1')
            s.bits_[i] = 1;
        else if (bits[i] != '0')
            throw invalid_argument("state bit string must contain only 0/1: '" + string(bits) + "'");
    }
    return s;
}

string State::to_string() const {
    string out(bits_.size(), '0');
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i])
            out[i] = '1';
    return out;
}

size_t StateHash::operator()(const State &s) const {
    // FNV-1a over the bits; states are short, collisions are harmless here.
    size_t h = 1469598103934665603ull;
    for (int i = 0; i < s.size(); ++i) {
        h ^= static_cast<size_t>(s.test(i) ? 1 : 2);
        h *= 1099511628211ull;
    }
    return h;
}

FactSet make_fact_set(vector<int> indices) {
    sort(indices.begin(), indices.end());
    indices.erase(unique(indices.begin(), indices.end()), indices.end());
    return indices;
}

bool fact_set_contains(const FactSet &set, int fact) {
    return binary_search(set.begin(), set.end(), fact);
}

bool applicable(const State &s, const GroundAction &a) {
    for (int f : a.pre)
        if (!s.test(f))
            return false;
    return true;
}

State apply(const State &s, const GroundAction &a, const EffectOutcome &o) {
    if (!applicable(s, a))
        throw ContractError("apply: action '" + a.name + "' is not applicable in state " + s.to_string());
    State result = s;
    for (int f : o.del)
        result.set(f, false);
    for (int f : o.add)
        result.set(f, true);
    return result;
}

SignedVec effect_delta(const EffectOutcome &o, int num_facts) {
    SignedVec delta(num_facts, 0);
    for (int f : o.add)
        delta.at(f) += 1;
    for (int f : o.del)
        delta.at(f) -= 1;
    return delta;
}

SignedVec state_plus_delta(const State &s, const SignedVec &delta) {
    if (static_cast<int>(delta.size()) != s.size())
        throw ContractError("state_plus_delta: width mismatch");
    SignedVec out(delta.size());
    for (size_t i = 0; i < delta.size(); ++i)
        out[i] = (s.test(static_cast<int>(i)) ? 1 : 0) + delta[i];
    return out;
}

State clamp(const SignedVec &v) {
    State s(static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i)
        s.set(static_cast<int>(i), v[i] >= 1);
    return s;
}

bool is_goal(const State &s, const PlanningTask &t) {
    for (int f : t.goal)
        if (!s.test(f))
            return false;
    return true;
}

const GroundAction *find_action(const PlanningTask &t, string_view name) {
    for (const GroundAction &a : t.actions)
        if (a.name == name)
            return &a;
    return nullptr;
}

static bool in_range(const FactSet &set, int num_facts) {
    for (int f : set)
        if (f < 0 || f >= num_facts)
            return false;
    return true;
}

ValidationReport validate(const PlanningTask &t) {
    ValidationReport report;
    auto complain = [&](const string &msg) { report.problems.push_back(msg); };

    int n = t.facts.size();
    if (t.init.size() != n)
        complain("initial state has width " + std::to_string(t.init.size()) +
                 ", expected " + std::to_string(n));
    if (!in_range(t.goal, n))
        complain("goal references a fact index out of range");

    bool all_single_outcome = true;
    for (const GroundAction &a : t.actions) {
        string where = "action '" + a.name + "'";
        if (a.name.empty())
            complain("action with empty name");
        if (a.cost <= 0)
            complain(where + ": nonpositive cost " + std::to_string(a.cost));
        if (!in_range(a.pre, n))
            complain(where + ": precondition fact index out of range");
        if (a.outcomes.empty()) {
            complain(where + ": no outcomes");
            continue;
        }
        if (a.outcomes.size() > 1)
            all_single_outcome = false;
        Rational sum = 0;
        for (size_t i = 0; i < a.outcomes.size(); ++i) {
            const EffectOutcome &o = a.outcomes[i];
            string owhere = where + " outcome " + std::to_string(i);
            if (!in_range(o.add, n) || !in_range(o.del, n))
                complain(owhere + ": effect fact index out of range");
            if (o.prob <= 0)
                complain(owhere + ": nonpositive probability " + rationals::to_string(o.prob));
            for (int f : o.add)
                if (fact_set_contains(o.del, f))
                    complain(owhere + ": fact " + std::to_string(f) + " both added and deleted");
            sum += o.prob;
        }
        if (sum != 1)
            complain(where + ": probabilities sum to " + rationals::to_string(sum));
    }

    if (t.flavor == Flavor::classical && !all_single_outcome)
        complain("flavor is classical but some action has several outcomes");
    if (t.flavor == Flavor::probabilistic && all_single_outcome)
        complain("flavor is probabilistic but every action has a single outcome");

    return report;
}

}  // namespace task_model
