#include "pdb.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

using namespace std;
using task_model::EffectOutcome;
using task_model::GroundAction;

namespace pdb {

namespace {

constexpr int kDenseBitLimit = 24;

uint64_t fnv1a(const string &text) {
    uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

string canonical_dump(const PlanningTask &t) {
    ostringstream out;
    out << "facts";
    for (const string &name : t.facts.names())
        out << " " << name;
    out << "\ninit " << t.init.to_string() << "\ngoal";
    for (int f : t.goal)
        out << " " << f;
    out << "\n";
    for (const GroundAction &a : t.actions) {
        out << "action " << a.name << " cost " << a.cost << " pre";
        for (int f : a.pre)
            out << " " << f;
        out << "\n";
        for (const EffectOutcome &o : a.outcomes) {
            out << "outcome " << rationals::to_string(o.prob) << " add";
            for (int f : o.add)
                out << " " << f;
            out << " del";
            for (int f : o.del)
                out << " " << f;
            out << "\n";
        }
    }
    return out.str();
}

uint64_t index_of_abstract_state(const task_model::State &s) {
    uint64_t index = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s.test(i))
            index |= uint64_t{1} << i;
    return index;
}

void store(PatternDatabase &db, uint64_t index, Cost value) {
    if (db.dense)
        db.dense_table[index] = value;
    else if (value != solvers::kInfiniteCost)
        db.sparse_table[index] = value;
}

Cost fetch(const PatternDatabase &db, uint64_t index) {
    if (db.dense)
        return db.dense_table[index];
    auto it = db.sparse_table.find(index);
    return it == db.sparse_table.end() ? solvers::kInfiniteCost : it->second;
}

}  // namespace

uint64_t task_fingerprint(const PlanningTask &t) {
    return fnv1a(canonical_dump(t));
}

uint64_t project_to_index(const State &s, const Pattern &p) {
    uint64_t index = 0;
    for (int i = 0; i < p.size(); ++i)
        if (s.test(p.fact_indices[i]))
            index |= uint64_t{1} << i;
    return index;
}

PatternDatabase build_pdb(const PlanningTask &t, const Pattern &p) {
    if (t.flavor != task_model::Flavor::classical)
        throw invalid_argument("build_pdb: classical task required");
    projection::AbstractTask at = projection::project_task(t, p);
    statespace::ExplicitMdp m = projection::abstract_graph(at);
    vector<Cost> dist = solvers::goal_distances(m);

    PatternDatabase db;
    db.pattern = p;
    db.fact_names = at.task.facts.names();
    db.fingerprint = task_fingerprint(t);
    db.dense = p.size() <= kDenseBitLimit;
    if (db.dense)
        db.dense_table.assign(uint64_t{1} << p.size(), solvers::kInfiniteCost);
    for (int s = 0; s < m.num_states(); ++s)
        store(db, index_of_abstract_state(m.states[s]), dist[s]);
    return db;
}

Cost lookup(const PatternDatabase &db, const State &s) {
    if (static_cast<int>(db.pattern.fact_indices.size()) != static_cast<int>(db.fact_names.size()))
        throw invalid_argument("lookup: database is not bound to a task");
    return fetch(db, project_to_index(s, db.pattern));
}

solvers::Heuristic max_combine(vector<PatternDatabase> dbs) {
    auto shared = make_shared<vector<PatternDatabase>>(move(dbs));
    return [shared](const State &s) {
        Cost best = 0;
        for (const PatternDatabase &db : *shared)
            best = max(best, lookup(db, s));
        return best;
    };
}

AdditiveVerdict check_additive(const PlanningTask &t, const vector<Pattern> &patterns) {
    vector<vector<char>> in_pattern(patterns.size(), vector<char>(t.facts.size(), 0));
    for (size_t i = 0; i < patterns.size(); ++i)
        for (int f : patterns[i].fact_indices)
            in_pattern[i][f] = 1;
    for (const GroundAction &a : t.actions) {
        int affected = 0;
        for (size_t i = 0; i < patterns.size(); ++i) {
            bool touches = false;
            for (const EffectOutcome &o : a.outcomes) {
                for (int f : o.add)
                    touches |= static_cast<bool>(in_pattern[i][f]);
                for (int f : o.del)
                    touches |= static_cast<bool>(in_pattern[i][f]);
            }
            affected += touches;
        }
        if (affected > 1)
            return {false, a.name};
    }
    return {true, ""};
}

solvers::Heuristic additive_combine(const PlanningTask &t, vector<PatternDatabase> dbs) {
    vector<Pattern> patterns;
    for (const PatternDatabase &db : dbs)
        patterns.push_back(db.pattern);
    AdditiveVerdict verdict = check_additive(t, patterns);
    if (!verdict.accepted)
        throw invalid_argument("additive_combine: action " + verdict.witness_action +
                               " affects two patterns");
    auto shared = make_shared<vector<PatternDatabase>>(move(dbs));
    return [shared](const State &s) {
        Cost total = 0;
        for (const PatternDatabase &db : *shared) {
            Cost value = lookup(db, s);
            if (value == solvers::kInfiniteCost)
                return solvers::kInfiniteCost;
            total += value;
        }
        return total;
    };
}

string dump_pdb(const PatternDatabase &db) {
    ostringstream out;
    out << "pabs-pdb 1\n";
    out << "fingerprint " << hex << setw(16) << setfill('0') << db.fingerprint << dec << "\n";
    out << "pattern " << db.fact_names.size() << "\n";
    for (const string &name : db.fact_names)
        out << name << "\n";
    vector<pair<uint64_t, Cost>> entries;
    if (db.dense) {
        for (uint64_t i = 0; i < db.dense_table.size(); ++i)
            if (db.dense_table[i] != solvers::kInfiniteCost)
                entries.push_back({i, db.dense_table[i]});
    } else {
        for (const auto &[index, value] : db.sparse_table)
            if (value != solvers::kInfiniteCost)
                entries.push_back({index, value});
    }
    out << "entries " << entries.size() << "\n";
    for (const auto &[index, value] : entries)
        out << index << ": " << value << "\n";
    return out.str();
}

PatternDatabase parse_pdb(const string &text) {
    istringstream in(text);
    string line;
    auto next_line = [&](const string &what) {
        if (!getline(in, line))
            throw invalid_argument("pdb file: missing " + what);
        return line;
    };
    if (next_line("version line") != "pabs-pdb 1")
        throw invalid_argument("pdb file: unrecognized version line '" + line + "'");

    PatternDatabase db;
    istringstream fp(next_line("fingerprint"));
    string keyword;
    if (!(fp >> keyword >> hex >> db.fingerprint) || keyword != "fingerprint")
        throw invalid_argument("pdb file: bad fingerprint line");

    istringstream pat(next_line("pattern size"));
    size_t num_facts = 0;
    if (!(pat >> keyword >> num_facts) || keyword != "pattern")
        throw invalid_argument("pdb file: bad pattern line");
    for (size_t i = 0; i < num_facts; ++i)
        db.fact_names.push_back(next_line("pattern fact"));

    istringstream ent(next_line("entry count"));
    size_t num_entries = 0;
    if (!(ent >> keyword >> num_entries) || keyword != "entries")
        throw invalid_argument("pdb file: bad entries line");

    db.dense = num_facts <= kDenseBitLimit;
    if (db.dense)
        db.dense_table.assign(uint64_t{1} << num_facts, solvers::kInfiniteCost);
    for (size_t i = 0; i < num_entries; ++i) {
        istringstream row(next_line("entry"));
        uint64_t index = 0;
        Cost value = 0;
        char colon = 0;
        if (!(row >> index >> colon >> value) || colon != ':')
            throw invalid_argument("pdb file: bad entry line '" + line + "'");
        if (num_facts < 64 && index >= (uint64_t{1} << num_facts))
            throw invalid_argument("pdb file: entry index out of range");
        store(db, index, value);
    }
    return db;
}

void save_pdb(const PatternDatabase &db, const string &path) {
    ofstream out(path);
    if (!out)
        throw invalid_argument("cannot open '" + path + "' for writing");
    out << dump_pdb(db);
}

PatternDatabase load_pdb(const string &path) {
    ifstream in(path);
    if (!in)
        throw invalid_argument("cannot open pdb file '" + path + "'");
    stringstream buffer;
    buffer << in.rdbuf();
    return parse_pdb(buffer.str());
}

void bind_to_task(PatternDatabase &db, const PlanningTask &t) {
    if (db.fingerprint != task_fingerprint(t))
        throw invalid_argument("pdb was built for a different task (fingerprint mismatch)");
    vector<int> indices;
    for (const string &name : db.fact_names) {
        auto idx = t.facts.index_of(name);
        if (!idx)
            throw invalid_argument("pdb pattern fact '" + name + "' missing from the task");
        indices.push_back(*idx);
    }
    db.pattern = projection::make_pattern(indices, t.facts.size());
}

}  // namespace pdb
