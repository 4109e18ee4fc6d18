#include "statespace.h"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

using namespace std;
using json = nlohmann::ordered_json;
using task_model::PlanningTask;
using task_model::State;

namespace statespace {

ExplicitMdp expand(const PlanningTask &t, const ExpandOptions &options) {
    task_model::ValidationReport report = task_model::validate(t);
    if (!report.ok())
        throw invalid_argument("expand: task fails validation: " + report.problems.front());
    if (options.gamma < 0 || options.gamma >= 1)
        throw invalid_argument("expand: gamma must lie in [0, 1), got " + rationals::to_string(options.gamma));

    ExplicitMdp m;
    m.fact_names = t.facts.names();
    m.gamma = options.gamma;
    for (const task_model::GroundAction &a : t.actions) {
        m.action_names.push_back(a.name);
        m.action_costs.push_back(a.cost);
    }

    unordered_map<State, int, task_model::StateHash> index;
    deque<int> queue;
    auto intern = [&](const State &s) {
        auto it = index.find(s);
        if (it != index.end())
            return it->second;
        if (m.states.size() >= options.max_states)
            throw CapacityError("expand: state cap of " + std::to_string(options.max_states) + " exceeded");
        int id = static_cast<int>(m.states.size());
        index.emplace(s, id);
        m.states.push_back(s);
        m.transitions.emplace_back(t.actions.size());
        queue.push_back(id);
        return id;
    };

    intern(t.init);
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        for (size_t ai = 0; ai < t.actions.size(); ++ai) {
            const task_model::GroundAction &a = t.actions[ai];
            State s = m.states[id];  // copy: intern() may reallocate the vector
            if (!task_model::applicable(s, a))
                continue;
            map<int, Rational> mass;  // successor -> merged probability
            for (const task_model::EffectOutcome &o : a.outcomes)
                mass[intern(task_model::apply(s, a, o))] += o.prob;
            Row row;
            for (const auto &[target, prob] : mass)
                row.push_back({target, prob});
            m.transitions[id][ai] = move(row);
        }
    }

    m.state_names.reserve(m.states.size());
    for (const State &s : m.states) {
        m.state_names.push_back(s.to_string());
        m.goal.push_back(task_model::is_goal(s, t));
    }
    m.rewards.assign(m.num_states(), vector<Rational>(m.num_actions(), Rational(0)));
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            for (const TransitionEntry &e : m.transitions[s][a])
                if (m.goal[e.target])
                    m.rewards[s][a] += e.prob;
    return m;
}

namespace {

Rational parse_prob(const json &value, const string &where) {
    if (value.is_string())
        return rationals::parse(value.get<string>());
    if (value.is_number_integer())
        return rationals::make(value.get<long long>());
    throw GraphFormatError(where + ": probabilities must be rational strings or integers");
}

vector<string> split_label(const string &label) {
    vector<string> props;
    string current;
    for (char c : label) {
        if (c == ',' || isspace(static_cast<unsigned char>(c))) {
            if (!current.empty())
                props.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty())
        props.push_back(current);
    return props;
}

// String labels are split on commas and whitespace, which suits hand-written
// files; array labels carry the fact names verbatim, so names containing
// commas survive a save/load round trip.
vector<string> state_label(const json &state) {
    if (!state.contains("label"))
        return {};
    const json &label = state["label"];
    if (label.is_string())
        return split_label(label.get<string>());
    if (label.is_array()) {
        vector<string> props;
        for (const json &p : label) {
            if (!p.is_string())
                throw GraphFormatError("graph JSON: label entries must be strings");
            props.push_back(p.get<string>());
        }
        return props;
    }
    throw GraphFormatError("graph JSON: label must be a string or an array of fact names");
}

}  // namespace

ExplicitMdp load_graph(string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception &e) {
        throw GraphFormatError(string("graph JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("states") || !doc.contains("actions") || !doc.contains("transitions"))
        throw GraphFormatError("graph JSON: expected an object with states, actions and transitions");

    ExplicitMdp m;
    vector<vector<string>> state_props;
    map<string, int> state_index;
    for (const json &s : doc["states"]) {
        if (!s.is_object() || !s.contains("id") || !s["id"].is_string())
            throw GraphFormatError("graph JSON: each state needs a string id");
        string id = s["id"].get<string>();
        if (id.empty() || state_index.count(id))
            throw GraphFormatError("graph JSON: duplicate or empty state id '" + id + "'");
        state_index[id] = m.num_states();
        m.state_names.push_back(id);
        m.goal.push_back(s.value("goal", false));
        state_props.push_back(state_label(s));
    }
    if (m.state_names.empty())
        throw GraphFormatError("graph JSON: no states");

    if (doc.contains("facts")) {
        for (const json &f : doc["facts"])
            m.fact_names.push_back(f.get<string>());
    } else {
        set<string> props;
        for (const vector<string> &sp : state_props)
            props.insert(sp.begin(), sp.end());
        m.fact_names.assign(props.begin(), props.end());
    }
    task_model::FactTable facts;
    try {
        facts = task_model::FactTable(m.fact_names);
    } catch (const invalid_argument &e) {
        throw GraphFormatError(string("graph JSON facts: ") + e.what());
    }
    for (const vector<string> &sp : state_props) {
        State s(facts.size());
        for (const string &prop : sp) {
            auto idx = facts.index_of(prop);
            if (!idx)
                throw GraphFormatError("graph JSON: label proposition '" + prop + "' missing from facts list");
            s.set(*idx, true);
        }
        m.states.push_back(move(s));
    }

    map<string, int> action_index;
    for (const json &a : doc["actions"]) {
        if (!a.is_string())
            throw GraphFormatError("graph JSON: actions must be strings");
        string name = a.get<string>();
        if (name.empty() || action_index.count(name))
            throw GraphFormatError("graph JSON: duplicate or empty action '" + name + "'");
        action_index[name] = m.num_actions();
        m.action_names.push_back(name);
    }
    if (doc.contains("costs")) {
        for (const json &c : doc["costs"])
            m.action_costs.push_back(c.get<long long>());
        if (m.action_costs.size() != m.action_names.size())
            throw GraphFormatError("graph JSON: costs list does not match actions list");
        for (long long c : m.action_costs)
            if (c <= 0)
                throw GraphFormatError("graph JSON: action costs must be positive");
    } else {
        m.action_costs.assign(m.action_names.size(), 1);
    }

    m.transitions.assign(m.num_states(), vector<Row>(m.num_actions()));
    for (const json &tr : doc["transitions"]) {
        if (!tr.is_object() || !tr.contains("from") || !tr.contains("action") || !tr.contains("to"))
            throw GraphFormatError("graph JSON: each transition needs from, action and to");
        string from = tr["from"].get<string>();
        string action = tr["action"].get<string>();
        if (!state_index.count(from))
            throw GraphFormatError("graph JSON: transition from unknown state '" + from + "'");
        if (!action_index.count(action))
            throw GraphFormatError("graph JSON: transition with unknown action '" + action + "'");
        int s = state_index[from], a = action_index[action];
        if (!m.transitions[s][a].empty())
            throw GraphFormatError("graph JSON: duplicate transition row for (" + from + ", " + action + ")");
        string where = "transition (" + from + ", " + action + ")";
        map<int, Rational> mass;
        for (const json &entry : tr["to"]) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string())
                throw GraphFormatError(where + ": 'to' entries must be [state, probability] pairs");
            string target = entry[0].get<string>();
            if (!state_index.count(target))
                throw GraphFormatError(where + ": unknown target state '" + target + "'");
            Rational p = parse_prob(entry[1], where);
            if (p <= 0)
                throw GraphFormatError(where + ": probabilities must be positive");
            mass[state_index[target]] += p;
        }
        Rational sum = 0;
        Row row;
        for (const auto &[target, prob] : mass) {
            row.push_back({target, prob});
            sum += prob;
        }
        if (sum != 1)
            throw GraphFormatError(where + ": probabilities sum to " + rationals::to_string(sum));
        m.transitions[s][a] = move(row);
    }

    if (doc.contains("gamma")) {
        const json &g = doc["gamma"];
        m.gamma = g.is_string() ? rationals::parse(g.get<string>()) : parse_prob(g, "gamma");
    } else {
        m.gamma = rationals::make(9, 10);
    }
    if (m.gamma < 0 || m.gamma >= 1)
        throw GraphFormatError("graph JSON: gamma must lie in [0, 1)");

    m.rewards.assign(m.num_states(), vector<Rational>(m.num_actions(), Rational(0)));
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            for (const TransitionEntry &e : m.transitions[s][a])
                if (m.goal[e.target])
                    m.rewards[s][a] += e.prob;
    return m;
}

ExplicitMdp load_graph_file(const string &path) {
    ifstream in(path);
    if (!in)
        throw GraphFormatError("cannot open graph file '" + path + "'");
    stringstream buffer;
    buffer << in.rdbuf();
    return load_graph(buffer.str());
}

string save_graph(const ExplicitMdp &m) {
    json doc = json::object();
    if (!m.fact_names.empty())
        doc["facts"] = m.fact_names;
    doc["states"] = json::array();
    for (int s = 0; s < m.num_states(); ++s) {
        json state = json::object();
        state["id"] = m.state_names[s];
        if (!m.fact_names.empty()) {
            json label = json::array();
            for (int f = 0; f < static_cast<int>(m.fact_names.size()); ++f)
                if (m.states[s].test(f))
                    label.push_back(m.fact_names[f]);
            state["label"] = label;
        }
        state["goal"] = static_cast<bool>(m.goal[s]);
        doc["states"].push_back(move(state));
    }
    doc["actions"] = m.action_names;
    bool nonunit = false;
    for (long long c : m.action_costs)
        nonunit |= c != 1;
    if (nonunit)
        doc["costs"] = m.action_costs;
    doc["transitions"] = json::array();
    for (int s = 0; s < m.num_states(); ++s) {
        for (int a = 0; a < m.num_actions(); ++a) {
            if (m.transitions[s][a].empty())
                continue;
            json tr = json::object();
            tr["from"] = m.state_names[s];
            tr["action"] = m.action_names[a];
            tr["to"] = json::array();
            for (const TransitionEntry &e : m.transitions[s][a])
                tr["to"].push_back(json::array({m.state_names[e.target], rationals::to_string(e.prob)}));
            doc["transitions"].push_back(move(tr));
        }
    }
    doc["gamma"] = rationals::to_string(m.gamma);
    return doc.dump(2) + "\n";
}

bool is_deterministic(const ExplicitMdp &m) {
    for (const auto &rows : m.transitions)
        for (const Row &row : rows)
            if (row.size() > 1)
                return false;
    return true;
}

string to_dot(const ExplicitMdp &m) {
    ostringstream out;
    out << "digraph mdp {\n  rankdir=LR;\n  node [shape=ellipse];\n";
    out << "  init [shape=point];\n";
    for (int s = 0; s < m.num_states(); ++s) {
        out << "  \"" << m.state_names[s] << "\"";
        if (m.goal[s])
            out << " [peripheries=2]";
        out << ";\n";
    }
    out << "  init -> \"" << m.state_names[0] << "\";\n";
    for (int s = 0; s < m.num_states(); ++s) {
        for (int a = 0; a < m.num_actions(); ++a) {
            for (const TransitionEntry &e : m.transitions[s][a]) {
                out << "  \"" << m.state_names[s] << "\" -> \"" << m.state_names[e.target]
                    << "\" [label=\"" << m.action_names[a];
                if (e.prob != 1)
                    out << ":" << rationals::to_string(e.prob);
                out << "\"];\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace statespace
